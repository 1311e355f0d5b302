#include "topseg/features.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "topseg/rng.hpp"

namespace topseg {

FeatureSpec make_spec(int pc, int patch_w, int patch_h, std::uint64_t seed, bool scaled_offsets) {
    if (pc < 1) throw std::invalid_argument("feature count must be at least 1");
    if (patch_w <= 0 || patch_h <= 0) throw std::invalid_argument("patch dimensions must be positive");
    FeatureSpec spec;
    spec.patch_w = patch_w;
    spec.patch_h = patch_h;
    spec.seed = seed;
    spec.scaled_offsets = scaled_offsets;
    Rng rng = make_rng(seed);
    std::uniform_int_distribution<int> dx(-patch_w / 2, patch_w / 2);
    std::uniform_int_distribution<int> dy(-patch_h / 2, patch_h / 2);
    spec.offsets.reserve(pc);
    for (int i = 0; i < pc; ++i) {
        OffsetPair p;
        p.ux = static_cast<std::int16_t>(dx(rng));
        p.uy = static_cast<std::int16_t>(dy(rng));
        p.vx = static_cast<std::int16_t>(dx(rng));
        p.vy = static_cast<std::int16_t>(dy(rng));
        spec.offsets.push_back(p);
    }
    return spec;
}

namespace {

inline float read_depth_or(const DepthFrame& frame, int x, int y, float sentinel) {
    if (!frame.contains(x, y)) return sentinel;
    const float v = frame.at(x, y);
    return std::isfinite(v) ? v : sentinel;
}

}  // namespace

float eval_feature(const DepthFrame& frame, int x, int y, const OffsetPair& pair, float sentinel,
                   bool scaled_offsets) {
    int ux = pair.ux, uy = pair.uy, vx = pair.vx, vy = pair.vy;
    if (scaled_offsets) {
        const float d = read_depth_or(frame, x, y, sentinel);
        const float inv = d > 1e-3f ? 1.f / d : 1.f;
        ux = static_cast<int>(std::lround(ux * inv));
        uy = static_cast<int>(std::lround(uy * inv));
        vx = static_cast<int>(std::lround(vx * inv));
        vy = static_cast<int>(std::lround(vy * inv));
    }
    return read_depth_or(frame, x + ux, y + uy, sentinel) -
           read_depth_or(frame, x + vx, y + vy, sentinel);
}

std::vector<float> eval_all_features(const DepthFrame& frame, int x, int y, const FeatureSpec& spec,
                                     float sentinel) {
    std::vector<float> values(spec.offsets.size());
    for (std::size_t i = 0; i < spec.offsets.size(); ++i)
        values[i] = eval_feature(frame, x, y, spec.offsets[i], sentinel, spec.scaled_offsets);
    return values;
}

std::vector<PixelSample> sample_training_pixels(const LabelFrame& labels, int per_class_quota,
                                                std::uint64_t seed, int class_count) {
    std::vector<PixelSample> out;
    if (per_class_quota <= 0) return out;

    std::vector<std::vector<std::uint32_t>> by_class(class_count);
    for (int y = 0; y < labels.height; ++y)
        for (int x = 0; x < labels.width; ++x) {
            const std::uint8_t c = labels.at(x, y);
            if (c < class_count) by_class[c].push_back(std::uint32_t(y) * labels.width + x);
        }

    Rng rng = make_rng(seed);
    for (int c = 0; c < class_count; ++c) {
        auto& pixels = by_class[c];
        const std::size_t take = std::min<std::size_t>(per_class_quota, pixels.size());
        // Partial Fisher-Yates: the first `take` entries become a uniform
        // without-replacement draw.
        for (std::size_t i = 0; i < take; ++i) {
            const std::size_t j =
                std::uniform_int_distribution<std::size_t>(i, pixels.size() - 1)(rng);
            std::swap(pixels[i], pixels[j]);
            out.push_back({static_cast<std::uint16_t>(pixels[i] % labels.width),
                           static_cast<std::uint16_t>(pixels[i] / labels.width),
                           static_cast<std::uint8_t>(c)});
        }
    }
    return out;
}

}  // namespace topseg
