#include "topseg/forest.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "topseg/errors.hpp"
#include "topseg/parallel.hpp"

namespace topseg {

double entropy(std::span<const std::uint32_t> histogram) {
    std::uint64_t total = 0;
    for (auto c : histogram) total += c;
    if (total == 0) return 0.0;
    double acc = 0.0;
    for (auto c : histogram)
        if (c > 0) acc += double(c) * std::log(double(c));
    return std::log(double(total)) - acc / double(total);
}

namespace {

// c*ln(c) memo so threshold scans do table lookups instead of log calls.
class XLogX {
public:
    explicit XLogX(std::size_t max_count) : table_(max_count + 1, 0.0) {
        for (std::size_t c = 2; c < table_.size(); ++c) table_[c] = double(c) * std::log(double(c));
    }
    double operator()(std::uint32_t c) const { return table_[c]; }

    double entropy_of(const std::uint32_t* hist, int classes, std::uint32_t total) const {
        if (total == 0) return 0.0;
        double acc = 0.0;
        for (int c = 0; c < classes; ++c) acc += table_[hist[c]];
        return std::log(double(total)) - acc / double(total);
    }

private:
    std::vector<double> table_;
};

SplitFunction draw_candidate(const TrainConfig& config, int feature_count, Rng& rng) {
    SplitFunction f;
    f.kind = config.split_kind;
    std::uniform_int_distribution<std::uint32_t> pick(0, feature_count - 1);
    f.feature_a = pick(rng);
    if (f.kind == SplitKind::linear) {
        do {
            f.feature_b = pick(rng);
        } while (feature_count > 1 && f.feature_b == f.feature_a);
        const float angle =
            std::uniform_real_distribution<float>(0.f, 2.f * std::numbers::pi_v<float>)(rng);
        f.dir_x = std::cos(angle);
        f.dir_y = std::sin(angle);
    }
    return f;
}

}  // namespace

std::optional<BestSplit> best_split(const FeatureMatrix& features, std::span<const std::uint8_t> labels,
                                    std::span<const std::uint32_t> indices, const TrainConfig& config,
                                    int class_count, Rng& rng) {
    const std::size_t n = indices.size();
    if (n < 2) return std::nullopt;

    std::vector<std::uint32_t> parent_hist(class_count, 0);
    for (auto i : indices) parent_hist[labels[i]]++;

    const XLogX xlogx(n);
    const double h_parent = xlogx.entropy_of(parent_hist.data(), class_count, std::uint32_t(n));
    if (h_parent <= 0.0) return std::nullopt;

    const int k_thresholds = config.thresholds_per_feature;
    const int bins = k_thresholds + 1;
    std::vector<float> responses(n);
    std::vector<std::uint32_t> bin_hist(std::size_t(bins) * class_count);
    std::vector<std::uint32_t> left_hist(class_count), right_hist(class_count);

    double best_gain = -1.0;
    SplitFunction best_fn;

    for (int cand = 0; cand < config.response_samples; ++cand) {
        SplitFunction fn = draw_candidate(config, int(features.cols()), rng);
        float lo = std::numeric_limits<float>::infinity();
        float hi = -lo;
        for (std::size_t s = 0; s < n; ++s) {
            const float r = fn.project(features.row(indices[s]));
            responses[s] = r;
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        if (!(hi > lo)) continue;  // constant response, nothing to threshold

        const float scale = float(bins) / (hi - lo);
        std::fill(bin_hist.begin(), bin_hist.end(), 0u);
        for (std::size_t s = 0; s < n; ++s) {
            int b = int((responses[s] - lo) * scale);
            b = std::clamp(b, 0, bins - 1);
            bin_hist[std::size_t(b) * class_count + labels[indices[s]]]++;
        }

        // Thresholds sit on the interior bin boundaries; scanning the bins
        // left to right evaluates all of them in one pass.
        std::fill(left_hist.begin(), left_hist.end(), 0u);
        std::uint32_t n_left = 0;
        for (int k = 0; k < k_thresholds; ++k) {
            const std::uint32_t* bin = bin_hist.data() + std::size_t(k) * class_count;
            bool moved = false;
            for (int c = 0; c < class_count; ++c) {
                left_hist[c] += bin[c];
                n_left += bin[c];
                moved |= bin[c] != 0;
            }
            if (!moved || n_left == 0 || n_left == n) continue;
            for (int c = 0; c < class_count; ++c) right_hist[c] = parent_hist[c] - left_hist[c];
            const std::uint32_t n_right = std::uint32_t(n) - n_left;
            const double gain =
                h_parent -
                (double(n_left) / double(n)) * xlogx.entropy_of(left_hist.data(), class_count, n_left) -
                (double(n_right) / double(n)) * xlogx.entropy_of(right_hist.data(), class_count, n_right);
            if (gain > best_gain) {
                best_gain = gain;
                best_fn = fn;
                best_fn.threshold = lo + (hi - lo) * float(k + 1) / float(bins);
            }
        }
    }

    if (best_gain < 0.0) return std::nullopt;

    // Exact recount for the winner; the binned scan rounds at bin edges.
    std::fill(left_hist.begin(), left_hist.end(), 0u);
    std::size_t n_left = 0;
    for (auto i : indices)
        if (best_fn.goes_left(features.row(i))) {
            left_hist[labels[i]]++;
            ++n_left;
        }
    const std::size_t n_right = n - n_left;
    if (n_left == 0 || n_right == 0) return std::nullopt;
    for (int c = 0; c < class_count; ++c) right_hist[c] = parent_hist[c] - left_hist[c];
    const double gain =
        h_parent -
        (double(n_left) / double(n)) * xlogx.entropy_of(left_hist.data(), class_count, std::uint32_t(n_left)) -
        (double(n_right) / double(n)) *
            xlogx.entropy_of(right_hist.data(), class_count, std::uint32_t(n_right));
    if (gain < config.min_info_gain) return std::nullopt;
    return BestSplit{best_fn, gain, n_left, n_right};
}

namespace {

struct TreeTrainData {
    FeatureMatrix features;
    std::vector<std::uint8_t> labels;
};

TreeTrainData gather_tree_samples(const FrameSource& source, const TrainConfig& config,
                                  const FeatureSpec& spec, float sentinel, int class_count,
                                  std::size_t tree_index) {
    Rng rng = make_rng(stream_seed(config.seed, stream::tree, tree_index));
    const int draws = std::max(1, int(std::lround(config.bagging_fraction * config.frames_per_tree)));
    std::vector<std::size_t> bag(draws);
    std::uniform_int_distribution<std::size_t> pick_frame(0, source.count - 1);
    for (auto& id : bag) id = pick_frame(rng);

    // Per-draw pixel draws are seeded by draw slot, so grouping loads by frame
    // does not perturb the result.
    std::vector<std::vector<PixelSample>> per_draw(draws);
    std::vector<std::size_t> order(draws);
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return bag[a] < bag[b]; });

    DepthFrame depth;
    LabelFrame labels;
    std::size_t loaded = std::size_t(-1);
    std::vector<std::vector<float>> rows;
    std::vector<std::uint8_t> row_labels;
    for (std::size_t slot : order) {
        if (bag[slot] != loaded) {
            source.load(bag[slot], depth, labels);
            loaded = bag[slot];
        }
        const std::uint64_t pixel_seed =
            stream_seed(config.seed, stream::pixel_sample, (tree_index << 24) ^ slot);
        per_draw[slot] = sample_training_pixels(labels, config.pixels_per_class, pixel_seed, class_count);
        for (const auto& px : per_draw[slot]) {
            rows.push_back(eval_all_features(depth, px.x, px.y, spec, sentinel));
            row_labels.push_back(px.label);
        }
    }

    // Restore draw order so the sample layout is independent of bag grouping.
    TreeTrainData data;
    data.features = FeatureMatrix(rows.size(), spec.offsets.size());
    data.labels.resize(rows.size());
    std::size_t emitted = 0;
    // rows were appended in `order`; map them back to draw-slot order.
    std::vector<std::size_t> row_start(draws, 0);
    {
        std::size_t cursor = 0;
        for (std::size_t slot : order) {
            row_start[slot] = cursor;
            cursor += per_draw[slot].size();
        }
    }
    for (std::size_t slot = 0; slot < std::size_t(draws); ++slot) {
        for (std::size_t i = 0; i < per_draw[slot].size(); ++i) {
            const std::size_t src = row_start[slot] + i;
            std::memcpy(data.features.row(emitted), rows[src].data(),
                        sizeof(float) * spec.offsets.size());
            data.labels[emitted] = row_labels[src];
            ++emitted;
        }
    }
    return data;
}

struct GrowJob {
    std::int32_t node = 0;
    std::size_t begin = 0;
    std::size_t end = 0;
    int depth = 1;
};

void make_leaf(TreeNode& node, std::span<const std::uint32_t> hist, float laplace, int class_count) {
    std::uint64_t total = 0;
    for (auto c : hist) total += c;
    node.posterior.resize(class_count);
    const double denom = double(total) + double(laplace) * class_count;
    for (int c = 0; c < class_count; ++c)
        node.posterior[c] = float((double(hist[c]) + laplace) / denom);
}

Tree grow_tree(const TreeTrainData& data, const TrainConfig& config, int class_count,
               std::uint64_t node_seed, TreeStats& stats) {
    Tree tree;
    const std::size_t n = data.labels.size();
    std::vector<std::uint32_t> indices(n);
    for (std::size_t i = 0; i < n; ++i) indices[i] = std::uint32_t(i);

    Rng rng = make_rng(node_seed);
    tree.nodes.emplace_back();
    std::vector<GrowJob> stack{{0, 0, n, 1}};
    std::vector<std::uint32_t> hist(class_count);

    stats = TreeStats{};
    stats.sample_count = n;

    while (!stack.empty()) {
        const GrowJob job = stack.back();
        stack.pop_back();
        stats.max_depth = std::max(stats.max_depth, job.depth);

        std::fill(hist.begin(), hist.end(), 0u);
        for (std::size_t i = job.begin; i < job.end; ++i) hist[data.labels[indices[i]]]++;

        const std::size_t count = job.end - job.begin;
        std::optional<BestSplit> split;
        if (job.depth < config.max_depth && count >= 2) {
            std::span<const std::uint32_t> span(indices.data() + job.begin, count);
            split = best_split(data.features, data.labels, span, config, class_count, rng);
        }
        if (!split) {
            make_leaf(tree.nodes[job.node], hist, config.leaf_laplace, class_count);
            continue;
        }

        auto* base = indices.data();
        auto mid = std::partition(base + job.begin, base + job.end, [&](std::uint32_t i) {
            return split->split.goes_left(data.features.row(i));
        });
        const std::size_t cut = std::size_t(mid - base);
        // The recount inside best_split guarantees both sides are populated.
        tree.nodes[job.node].split = split->split;
        const std::int32_t left_id = std::int32_t(tree.nodes.size());
        tree.nodes[job.node].left = left_id;
        tree.nodes[job.node].right = left_id + 1;
        tree.nodes.emplace_back();
        tree.nodes.emplace_back();
        stack.push_back({left_id + 1, cut, job.end, job.depth + 1});
        stack.push_back({left_id, job.begin, cut, job.depth + 1});
    }

    stats.node_count = tree.nodes.size();
    for (const auto& node : tree.nodes)
        if (node.is_leaf()) stats.leaf_count++;
    return tree;
}

}  // namespace

Forest train_forest(const FrameSource& source, const TrainConfig& config, const FeatureSpec& spec,
                    float sentinel_depth, int class_count) {
    if (source.count == 0) throw std::invalid_argument("training dataset is empty");
    if (config.tree_count < 1 || config.max_depth < 1 || config.frames_per_tree < 1 ||
        config.thresholds_per_feature < 1 || config.response_samples < 1)
        throw std::invalid_argument("train config counts must be positive");

    Forest forest;
    forest.spec = spec;
    forest.class_count = class_count;
    forest.sentinel_depth = sentinel_depth;
    forest.meta = config;
    forest.trees.resize(config.tree_count);
    forest.stats.resize(config.tree_count);

    parallel_for(config.tree_count, config.threads, [&](std::size_t t) {
        TreeTrainData data = gather_tree_samples(source, config, spec, sentinel_depth, class_count, t);
        const std::uint64_t node_seed = stream_seed(config.seed, stream::tree, 0x10000 + t);
        forest.trees[t] = grow_tree(data, config, class_count, node_seed, forest.stats[t]);
    });
    return forest;
}

namespace {

// Contiguous per-tree traversal tables; the node structs keep their leaf
// posteriors in separate heap blocks, which costs a cache miss per level in
// the per-pixel loop.
struct FlatTree {
    struct Node {
        std::int32_t left;   // -1 marks a leaf
        std::int32_t right;  // leaves store the posterior pool offset here
        std::uint32_t feature_a;
        std::uint32_t feature_b;
        float dir_x, dir_y, threshold;
    };
    std::vector<Node> nodes;
    std::vector<float> leaf_pool;
};

FlatTree flatten(const Tree& tree, int class_count) {
    FlatTree flat;
    flat.nodes.resize(tree.nodes.size());
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        const TreeNode& node = tree.nodes[i];
        FlatTree::Node& out = flat.nodes[i];
        if (node.is_leaf()) {
            out.left = -1;
            out.right = std::int32_t(flat.leaf_pool.size());
            flat.leaf_pool.insert(flat.leaf_pool.end(), node.posterior.begin(),
                                  node.posterior.end());
            continue;
        }
        out.left = node.left;
        out.right = node.right;
        out.feature_a = node.split.feature_a;
        out.feature_b = node.split.feature_b;
        const bool axis = node.split.kind == SplitKind::axis_aligned;
        out.dir_x = axis ? 1.f : node.split.dir_x;
        out.dir_y = axis ? 0.f : node.split.dir_y;
        out.threshold = node.split.threshold;
        (void)class_count;
    }
    return flat;
}

}  // namespace

PosteriorVolume predict(const Forest& forest, const DepthFrame& frame, unsigned threads) {
    if (frame.width <= 0 || frame.height <= 0)
        throw std::invalid_argument("frame dimensions must be positive");
    PosteriorVolume volume;
    volume.width = frame.width;
    volume.height = frame.height;
    volume.class_count = forest.class_count;
    volume.values.assign(frame.pixel_count() * forest.class_count, 0.f);

    std::vector<FlatTree> flat;
    flat.reserve(forest.trees.size());
    for (const auto& tree : forest.trees) flat.push_back(flatten(tree, forest.class_count));

    const float inv_trees = 1.f / float(forest.trees.size());
    const float sentinel = forest.sentinel_depth;
    const int w = frame.width, h = frame.height;
    const auto& offsets = forest.spec.offsets;
    const bool scaled = forest.spec.scaled_offsets;

    // Sentinel-padded copy: offset reads become unconditional loads, and NaN
    // sanitizing happens once instead of per read.
    const int margin =
        std::max({std::abs(forest.spec.patch_w / 2), std::abs(forest.spec.patch_h / 2), 1}) + 1;
    const int stride = w + 2 * margin;
    std::vector<float> padded(std::size_t(stride) * (h + 2 * margin), sentinel);
    for (int y = 0; y < h; ++y) {
        float* dst = padded.data() + std::size_t(y + margin) * stride + margin;
        const float* src = frame.depth.data() + std::size_t(y) * w;
        for (int x = 0; x < w; ++x) dst[x] = std::isfinite(src[x]) ? src[x] : sentinel;
    }

    // Tiled traversal keeps each tile's read neighborhood cache resident.
    const int tile = 48;
    const int tiles_x = (w + tile - 1) / tile;
    const int tiles_y = (h + tile - 1) / tile;

    parallel_for(std::size_t(tiles_x) * tiles_y, threads, [&](std::size_t t) {
        const int ty = int(t) / tiles_x, tx = int(t) % tiles_x;
        const int x1 = std::min(w, (tx + 1) * tile), y1 = std::min(h, (ty + 1) * tile);
        for (int y = ty * tile; y < y1; ++y) {
            const float* center_row = padded.data() + std::size_t(y + margin) * stride + margin;
            for (int x = tx * tile; x < x1; ++x) {
                auto response_of = [&](std::uint32_t feature) -> float {
                    const OffsetPair& p = offsets[feature];
                    if (scaled) return eval_feature(frame, x, y, p, sentinel, true);
                    return center_row[std::ptrdiff_t(p.uy) * stride + p.ux + x] -
                           center_row[std::ptrdiff_t(p.vy) * stride + p.vx + x];
                };
                float* out = volume.at(x, y);
                for (const FlatTree& tree : flat) {
                    const FlatTree::Node* nodes = tree.nodes.data();
                    std::int32_t id = 0;
                    while (nodes[id].left >= 0) {
                        const FlatTree::Node& n = nodes[id];
                        float response = n.dir_x * response_of(n.feature_a);
                        if (n.dir_y != 0.f) response += n.dir_y * response_of(n.feature_b);
                        id = response < n.threshold ? n.left : n.right;
                    }
                    const float* leaf = tree.leaf_pool.data() + nodes[id].right;
                    for (int c = 0; c < forest.class_count; ++c) out[c] += leaf[c];
                }
                for (int c = 0; c < forest.class_count; ++c) out[c] *= inv_trees;
            }
        }
    });
    return volume;
}

LabelFrame argmax_labels(const PosteriorVolume& volume) {
    LabelFrame labels(volume.width, volume.height);
    for (int y = 0; y < volume.height; ++y)
        for (int x = 0; x < volume.width; ++x) {
            const float* p = volume.at(x, y);
            int best = 0;
            for (int c = 1; c < volume.class_count; ++c)
                if (p[c] > p[best]) best = c;
            labels.at(x, y) = std::uint8_t(best);
        }
    return labels;
}

namespace {

void put_u32le(std::ostream& out, std::uint32_t v) {
    const unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                                static_cast<unsigned char>((v >> 8) & 0xff),
                                static_cast<unsigned char>((v >> 16) & 0xff),
                                static_cast<unsigned char>((v >> 24) & 0xff)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

void put_i16le(std::ostream& out, std::int16_t v) {
    const auto u = static_cast<std::uint16_t>(v);
    const unsigned char b[2] = {static_cast<unsigned char>(u & 0xff),
                                static_cast<unsigned char>((u >> 8) & 0xff)};
    out.write(reinterpret_cast<const char*>(b), 2);
}

void put_f32le(std::ostream& out, float v) { put_u32le(out, std::bit_cast<std::uint32_t>(v)); }

std::uint32_t get_u32le(std::istream& in, const std::string& path) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4)) throw IoError("truncated model file: " + path);
    return std::uint32_t(b[0]) | (std::uint32_t(b[1]) << 8) | (std::uint32_t(b[2]) << 16) |
           (std::uint32_t(b[3]) << 24);
}

std::int16_t get_i16le(std::istream& in, const std::string& path) {
    unsigned char b[2];
    if (!in.read(reinterpret_cast<char*>(b), 2)) throw IoError("truncated model file: " + path);
    return static_cast<std::int16_t>(std::uint16_t(b[0]) | (std::uint16_t(b[1]) << 8));
}

float get_f32le(std::istream& in, const std::string& path) {
    return std::bit_cast<float>(get_u32le(in, path));
}

constexpr std::uint8_t kTagLeaf = 0;
constexpr std::uint8_t kTagAxis = 1;
constexpr std::uint8_t kTagLinear = 2;

}  // namespace

void save_forest(const std::string& path, const Forest& forest) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write model file: " + path);
    out.write("RDF1", 4);
    put_u32le(out, std::uint32_t(forest.class_count));
    put_u32le(out, std::uint32_t(forest.spec.offsets.size()));
    put_u32le(out, std::uint32_t(forest.spec.patch_w));
    put_u32le(out, std::uint32_t(forest.spec.patch_h));
    for (const auto& p : forest.spec.offsets) {
        put_i16le(out, p.ux);
        put_i16le(out, p.uy);
        put_i16le(out, p.vx);
        put_i16le(out, p.vy);
    }
    put_u32le(out, std::uint32_t(forest.trees.size()));
    for (const auto& tree : forest.trees) {
        put_u32le(out, std::uint32_t(tree.nodes.size()));
        for (const auto& node : tree.nodes) {
            if (node.is_leaf()) {
                out.put(char(kTagLeaf));
                for (float p : node.posterior) put_f32le(out, p);
            } else if (node.split.kind == SplitKind::axis_aligned) {
                out.put(char(kTagAxis));
                put_u32le(out, node.split.feature_a);
                put_f32le(out, node.split.threshold);
                put_u32le(out, std::uint32_t(node.left));
                put_u32le(out, std::uint32_t(node.right));
            } else {
                out.put(char(kTagLinear));
                put_u32le(out, node.split.feature_a);
                put_u32le(out, node.split.feature_b);
                put_f32le(out, node.split.dir_x);
                put_f32le(out, node.split.dir_y);
                put_f32le(out, node.split.threshold);
                put_u32le(out, std::uint32_t(node.left));
                put_u32le(out, std::uint32_t(node.right));
            }
        }
    }
    if (!out) throw IoError("write failed: " + path);
}

Forest load_forest(const std::string& path, float sentinel_depth) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open model file: " + path);
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, "RDF1", 4) != 0)
        throw IoError("bad magic in model file: " + path);

    Forest forest;
    forest.sentinel_depth = sentinel_depth;
    forest.class_count = int(get_u32le(in, path));
    if (forest.class_count < 1 || forest.class_count > 255)
        throw IoError("unreasonable class count in model file: " + path);
    const std::uint32_t pc = get_u32le(in, path);
    forest.spec.patch_w = int(get_u32le(in, path));
    forest.spec.patch_h = int(get_u32le(in, path));
    forest.spec.offsets.resize(pc);
    for (auto& p : forest.spec.offsets) {
        p.ux = get_i16le(in, path);
        p.uy = get_i16le(in, path);
        p.vx = get_i16le(in, path);
        p.vy = get_i16le(in, path);
        if (std::abs(p.ux) > forest.spec.patch_w / 2 || std::abs(p.vx) > forest.spec.patch_w / 2 ||
            std::abs(p.uy) > forest.spec.patch_h / 2 || std::abs(p.vy) > forest.spec.patch_h / 2)
            throw IoError("feature offset outside patch in model file: " + path);
    }
    const std::uint32_t tree_count = get_u32le(in, path);
    forest.trees.resize(tree_count);
    forest.meta.tree_count = int(tree_count);
    for (auto& tree : forest.trees) {
        const std::uint32_t node_count = get_u32le(in, path);
        tree.nodes.resize(node_count);
        for (auto& node : tree.nodes) {
            const int tag = in.get();
            if (tag == kTagLeaf) {
                node.posterior.resize(forest.class_count);
                for (auto& p : node.posterior) p = get_f32le(in, path);
            } else if (tag == kTagAxis || tag == kTagLinear) {
                node.split.kind = tag == kTagAxis ? SplitKind::axis_aligned : SplitKind::linear;
                node.split.feature_a = get_u32le(in, path);
                if (tag == kTagLinear) {
                    node.split.feature_b = get_u32le(in, path);
                    node.split.dir_x = get_f32le(in, path);
                    node.split.dir_y = get_f32le(in, path);
                }
                node.split.threshold = get_f32le(in, path);
                node.left = std::int32_t(get_u32le(in, path));
                node.right = std::int32_t(get_u32le(in, path));
                if (node.split.feature_a >= pc || node.split.feature_b >= pc ||
                    std::uint32_t(node.left) >= node_count || std::uint32_t(node.right) >= node_count)
                    throw IoError("node references out of range in model file: " + path);
            } else {
                throw IoError("unknown node tag in model file: " + path);
            }
        }
    }
    return forest;
}

}  // namespace topseg
