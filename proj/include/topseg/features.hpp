#pragma once

#include <cstdint>
#include <vector>

#include "topseg/frame.hpp"

namespace topseg {

/// One randomized feature: two pixel offsets whose depth difference is the
/// response.
struct OffsetPair {
    std::int16_t ux = 0, uy = 0;
    std::int16_t vx = 0, vy = 0;
};

/// The randomized offset-pair feature space shared by all trees of a forest.
struct FeatureSpec {
    std::vector<OffsetPair> offsets;  // size PC
    int patch_w = 64;
    int patch_h = 64;
    std::uint64_t seed = 0;
    /// When set, offsets are divided by the center pixel's depth before the
    /// reads (inverse-depth scaling). Off by default: the response is the
    /// plain difference of the two offset reads.
    bool scaled_offsets = false;

    int feature_count() const { return static_cast<int>(offsets.size()); }
};

/// Draws `pc` offset pairs uniformly over the patch rectangle
/// [-w/2, w/2] x [-h/2, h/2], deterministically under the seed.
FeatureSpec make_spec(int pc, int patch_w, int patch_h, std::uint64_t seed, bool scaled_offsets = false);

/// Depth-difference response d(s+u) - d(s+v). Reads outside the frame (or
/// non-finite) return `sentinel`, the floor depth.
float eval_feature(const DepthFrame& frame, int x, int y, const OffsetPair& pair, float sentinel,
                   bool scaled_offsets = false);

struct PixelSample {
    std::uint16_t x = 0, y = 0;
    std::uint8_t label = 0;
};

/// Uniform without-replacement draw of up to `per_class_quota` pixels from
/// each class present in the frame (classes with fewer pixels contribute all
/// of them). Deterministic under the seed.
std::vector<PixelSample> sample_training_pixels(const LabelFrame& labels, int per_class_quota,
                                                std::uint64_t seed, int class_count);

/// All responses of a spec at one pixel.
std::vector<float> eval_all_features(const DepthFrame& frame, int x, int y, const FeatureSpec& spec,
                                     float sentinel);

}  // namespace topseg
