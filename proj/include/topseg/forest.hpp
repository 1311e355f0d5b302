#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "topseg/features.hpp"
#include "topseg/frame.hpp"
#include "topseg/object_class.hpp"
#include "topseg/rng.hpp"

namespace topseg {

enum class SplitKind : std::uint8_t { axis_aligned, linear };

/// Node test over a sample's feature responses: axis-aligned thresholds one
/// response, linear thresholds a unit-direction combination of two.
struct SplitFunction {
    SplitKind kind = SplitKind::axis_aligned;
    std::uint32_t feature_a = 0;
    std::uint32_t feature_b = 0;  // linear only
    float dir_x = 1.f;            // linear only; (dir_x, dir_y) has unit norm
    float dir_y = 0.f;
    float threshold = 0.f;

    float project(const float* values) const {
        return kind == SplitKind::axis_aligned
                   ? values[feature_a]
                   : dir_x * values[feature_a] + dir_y * values[feature_b];
    }
    bool goes_left(const float* values) const { return project(values) < threshold; }
};

struct TreeNode {
    SplitFunction split;
    std::int32_t left = -1;  // -1 marks a leaf
    std::int32_t right = -1;
    std::vector<float> posterior;  // leaves: Laplace-smoothed class distribution

    bool is_leaf() const { return left < 0; }
};

struct Tree {
    std::vector<TreeNode> nodes;  // root at index 0
};

struct TrainConfig {
    int max_depth = 19;           // D
    int tree_count = 5;           // T
    int frames_per_tree = 1600;   // F, bagged with replacement
    int thresholds_per_feature = 100;
    int response_samples = 100;   // candidate split functions per node
    float min_info_gain = 1e-4f;
    float bagging_fraction = 1.0f;
    float leaf_laplace = 1.0f;
    SplitKind split_kind = SplitKind::linear;
    int pixels_per_class = 32;    // per frame draw
    unsigned threads = 0;
    std::uint64_t seed = 1;
};

struct TreeStats {
    std::size_t sample_count = 0;
    std::size_t node_count = 0;
    std::size_t leaf_count = 0;
    int max_depth = 0;
};

struct Forest {
    std::vector<Tree> trees;
    FeatureSpec spec;
    int class_count = kClassCount;
    float sentinel_depth = 3.5f;  // out-of-frame read value; the floor depth
    TrainConfig meta;
    std::vector<TreeStats> stats;
};

/// Shannon entropy of the normalized histogram, in nats; 0 for an empty one.
double entropy(std::span<const std::uint32_t> histogram);

/// Row-major sample-by-feature response storage.
class FeatureMatrix {
public:
    FeatureMatrix() = default;
    FeatureMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    float* row(std::size_t r) { return data_.data() + r * cols_; }
    const float* row(std::size_t r) const { return data_.data() + r * cols_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<float> data_;
};

struct BestSplit {
    SplitFunction split;
    double gain = 0.0;
    std::size_t left_count = 0;
    std::size_t right_count = 0;
};

/// Randomized node optimization: draws `response_samples` candidate split
/// functions and `thresholds_per_feature` thresholds spread over each
/// candidate's empirical response range, and returns the information-gain
/// maximizer. Empty when no candidate clears min_info_gain with two non-empty
/// children.
std::optional<BestSplit> best_split(const FeatureMatrix& features, std::span<const std::uint8_t> labels,
                                    std::span<const std::uint32_t> indices, const TrainConfig& config,
                                    int class_count, Rng& rng);

/// Abstract frame supply so training can stream from disk or memory.
struct FrameSource {
    std::size_t count = 0;
    std::function<void(std::size_t index, DepthFrame& depth, LabelFrame& labels)> load;
};

Forest train_forest(const FrameSource& source, const TrainConfig& config, const FeatureSpec& spec,
                    float sentinel_depth, int class_count = kClassCount);

/// Per-pixel class posteriors, pixel-major.
struct PosteriorVolume {
    int width = 0;
    int height = 0;
    int class_count = 0;
    std::vector<float> values;

    const float* at(int x, int y) const {
        return values.data() + (std::size_t(y) * width + x) * class_count;
    }
    float* at(int x, int y) { return values.data() + (std::size_t(y) * width + x) * class_count; }
};

PosteriorVolume predict(const Forest& forest, const DepthFrame& frame, unsigned threads = 0);

LabelFrame argmax_labels(const PosteriorVolume& volume);

// Model file: magic "RDF1", u32 class_count, feature block (u32 PC,
// u32 patch_w, u32 patch_h, PC * 4 i16 offsets), u32 T, then per tree a
// u32 node count and flat nodes (u8 kind tag 0=leaf/1=axis/2=linear, payload,
// u32 child ids or class_count f32 posterior). Little-endian throughout.
void save_forest(const std::string& path, const Forest& forest);
Forest load_forest(const std::string& path, float sentinel_depth = 3.5f);

}  // namespace topseg
