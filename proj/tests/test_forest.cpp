#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "test_support.hpp"
#include "topseg/config.hpp"
#include "topseg/errors.hpp"
#include "topseg/forest.hpp"
#include "topseg/metrics.hpp"
#include "topseg/pipeline.hpp"
#include "topseg/render.hpp"

using namespace topseg;

namespace {

// Two synthetic texture classes: class 0 is a checkerboard, class 1 is flat.
// Depth differences tell them apart at every pixel.
void textured_frame(std::size_t index, DepthFrame& depth, LabelFrame& labels) {
    const int w = 24, h = 24;
    depth = DepthFrame(w, h);
    const bool checker = index % 2 == 0;
    labels = LabelFrame(w, h, checker ? 0 : 1);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            depth.at(x, y) = checker ? (1.0f + 0.5f * float((x + y) % 2)) : 2.0f;
}

FrameSource textured_source(std::size_t count) {
    return FrameSource{count, textured_frame};
}

TrainConfig tiny_config() {
    TrainConfig config;
    config.max_depth = 8;
    config.tree_count = 2;
    config.frames_per_tree = 6;
    config.pixels_per_class = 30;
    config.seed = 5;
    config.threads = 1;
    return config;
}

}  // namespace

TEST_CASE("entropy golden values") {
    CHECK(entropy(std::vector<std::uint32_t>{17, 0, 0}) == doctest::Approx(0.0));
    CHECK(entropy(std::vector<std::uint32_t>{5, 5}) == doctest::Approx(std::log(2.0)).epsilon(1e-9));
    CHECK(entropy(std::vector<std::uint32_t>{1, 1, 1, 1}) ==
          doctest::Approx(std::log(4.0)).epsilon(1e-9));
    CHECK(entropy(std::vector<std::uint32_t>{}) == 0.0);
    CHECK(entropy(std::vector<std::uint32_t>{0, 0}) == 0.0);
}

TEST_CASE("entropy agrees with the independent computation") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::uint32_t> hist(1 + rng() % 8);
        for (auto& c : hist) c = std::uint32_t(rng() % 50);
        CHECK(entropy(hist) == doctest::Approx(oracle::entropy_nats(hist)).epsilon(1e-12));
    }
}

TEST_CASE("best_split separates a two-point node with gain ln 2") {
    FeatureMatrix features(2, 3);
    features.row(0)[0] = 0.f;
    features.row(0)[1] = -1.f;
    features.row(0)[2] = 0.5f;
    features.row(1)[0] = 1.f;
    features.row(1)[1] = 2.f;
    features.row(1)[2] = 0.5f;
    const std::vector<std::uint8_t> labels = {0, 1};
    const std::vector<std::uint32_t> indices = {0, 1};

    TrainConfig config;
    config.split_kind = SplitKind::axis_aligned;
    Rng rng = make_rng(3);
    const auto split = best_split(features, labels, indices, config, 2, rng);
    REQUIRE(split.has_value());
    CHECK(split->gain == doctest::Approx(std::log(2.0)).epsilon(1e-9));
    CHECK(split->left_count == 1);
    CHECK(split->right_count == 1);
}

TEST_CASE("identical feature vectors admit no split") {
    FeatureMatrix features(4, 2);
    for (int i = 0; i < 4; ++i) {
        features.row(i)[0] = 1.f;
        features.row(i)[1] = -2.f;
    }
    const std::vector<std::uint8_t> labels = {0, 1, 0, 1};
    const std::vector<std::uint32_t> indices = {0, 1, 2, 3};
    TrainConfig config;
    Rng rng = make_rng(4);
    CHECK_FALSE(best_split(features, labels, indices, config, 2, rng).has_value());
}

TEST_CASE("information gain is bounded by the parent entropy and conserves samples") {
    std::mt19937_64 seeder(21);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 10 + seeder() % 60;
        FeatureMatrix features(n, 5);
        std::vector<std::uint8_t> labels(n);
        std::vector<std::uint32_t> indices(n);
        std::vector<std::uint32_t> hist(3, 0);
        std::uniform_real_distribution<float> value(-2.f, 2.f);
        for (std::size_t i = 0; i < n; ++i) {
            for (int f = 0; f < 5; ++f) features.row(i)[f] = value(seeder);
            labels[i] = std::uint8_t(seeder() % 3);
            hist[labels[i]]++;
            indices[i] = std::uint32_t(i);
        }
        TrainConfig config;
        config.split_kind = trial % 2 ? SplitKind::linear : SplitKind::axis_aligned;
        Rng rng = make_rng(trial);
        const auto split = best_split(features, labels, indices, config, 3, rng);
        if (!split) continue;
        CHECK(split->gain >= config.min_info_gain);
        CHECK(split->gain <= entropy(hist) + 1e-9);
        CHECK(split->left_count + split->right_count == n);
        CHECK(split->left_count > 0);
        CHECK(split->right_count > 0);
        if (config.split_kind == SplitKind::linear) {
            const float norm = split->split.dir_x * split->split.dir_x +
                               split->split.dir_y * split->split.dir_y;
            CHECK(norm == doctest::Approx(1.f).epsilon(1e-5));
        }
    }
}

TEST_CASE("a single-class dataset trains to single pure leaves") {
    FrameSource source{3, [](std::size_t, DepthFrame& depth, LabelFrame& labels) {
                           depth = DepthFrame(16, 16, 2.f);
                           labels = LabelFrame(16, 16, 4);
                       }};
    const FeatureSpec spec = make_spec(20, 8, 8, 1);
    const Forest forest = train_forest(source, tiny_config(), spec, 3.5f, 11);
    for (const auto& tree : forest.trees) {
        REQUIRE(tree.nodes.size() == 1);
        CHECK(tree.nodes[0].is_leaf());
        // Laplace-smoothed posterior still peaks hard on the one class
        CHECK(tree.nodes[0].posterior[4] > 0.9f);
    }
}

TEST_CASE("separable textures reach full training accuracy") {
    const FeatureSpec spec = make_spec(50, 6, 6, 2);
    TrainConfig config = tiny_config();
    config.max_depth = 12;
    const Forest forest = train_forest(textured_source(6), config, spec, 3.5f, 2);

    DepthFrame depth;
    LabelFrame truth;
    for (std::size_t frame_id = 0; frame_id < 2; ++frame_id) {
        textured_frame(frame_id, depth, truth);
        const auto samples = sample_training_pixels(truth, 30, 99, 2);
        const PosteriorVolume posteriors = predict(forest, depth, 1);
        const LabelFrame pred = argmax_labels(posteriors);
        for (const auto& s : samples) CHECK(pred.at(s.x, s.y) == s.label);
    }
}

TEST_CASE("training is deterministic") {
    const FeatureSpec spec = make_spec(30, 6, 6, 7);
    test_support::TempDir dir("forest_determinism");
    const Forest a = train_forest(textured_source(5), tiny_config(), spec, 3.5f, 2);
    TrainConfig threaded = tiny_config();
    threaded.threads = 2;
    const Forest b = train_forest(textured_source(5), threaded, spec, 3.5f, 2);
    save_forest(dir.str() + "/a.rdf", a);
    save_forest(dir.str() + "/b.rdf", b);
    std::ifstream fa(dir.str() + "/a.rdf", std::ios::binary);
    std::ifstream fb(dir.str() + "/b.rdf", std::ios::binary);
    const std::string bytes_a((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
    const std::string bytes_b((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
    CHECK(bytes_a == bytes_b);
}

TEST_CASE("prediction posteriors are normalized and deterministic") {
    const FeatureSpec spec = make_spec(40, 6, 6, 3);
    const Forest forest = train_forest(textured_source(6), tiny_config(), spec, 3.5f, 2);
    DepthFrame depth;
    LabelFrame labels;
    textured_frame(0, depth, labels);
    const PosteriorVolume a = predict(forest, depth, 1);
    const PosteriorVolume b = predict(forest, depth, 2);
    CHECK(a.values == b.values);
    for (int y = 0; y < a.height; ++y)
        for (int x = 0; x < a.width; ++x) {
            float sum = 0.f;
            for (int c = 0; c < a.class_count; ++c) {
                CHECK(a.at(x, y)[c] >= 0.f);
                sum += a.at(x, y)[c];
            }
            CHECK(sum == doctest::Approx(1.f).epsilon(1e-5));
        }
}

TEST_CASE("model files round-trip through the RDF1 format") {
    const FeatureSpec spec = make_spec(25, 6, 6, 9);
    TrainConfig config = tiny_config();
    config.split_kind = SplitKind::linear;
    const Forest forest = train_forest(textured_source(4), config, spec, 3.5f, 2);

    test_support::TempDir dir("model_roundtrip");
    const std::string path = dir.str() + "/model.rdf";
    save_forest(path, forest);

    std::ifstream in(path, std::ios::binary);
    char magic[4];
    in.read(magic, 4);
    CHECK(std::string(magic, 4) == "RDF1");

    const Forest loaded = load_forest(path, 3.5f);
    CHECK(loaded.class_count == forest.class_count);
    CHECK(loaded.spec.offsets.size() == forest.spec.offsets.size());
    REQUIRE(loaded.trees.size() == forest.trees.size());

    DepthFrame depth;
    LabelFrame labels;
    textured_frame(1, depth, labels);
    const PosteriorVolume before = predict(forest, depth, 1);
    const PosteriorVolume after = predict(loaded, depth, 1);
    CHECK(before.values == after.values);

    CHECK_THROWS(load_forest(dir.str() + "/missing.rdf"));
}

TEST_CASE("train config defaults match the reference parameter setup") {
    const TrainConfig config;
    CHECK(config.max_depth == 19);
    CHECK(config.tree_count == 5);
    CHECK(config.frames_per_tree == 1600);
    CHECK(config.thresholds_per_feature == 100);
    CHECK(config.response_samples == 100);
    const PipelineConfig pipeline;
    CHECK(pipeline.pc == 300);
    CHECK(pipeline.patch_w == 64);
    CHECK(pipeline.patch_h == 64);
    CHECK(pipeline.width == 640);
    CHECK(pipeline.height == 480);
    CHECK(pipeline.camera_height == 3.5f);
    CHECK(pipeline.sigma == 0.15f);
    CHECK(pipeline.theta_prime == 0.30f);
    CHECK(pipeline.dataset_frames == 20000);
}

TEST_CASE("unreadable frame files surface as I/O errors naming the path") {
    test_support::TempDir dir("bad_manifest");
    write_manifest(dir.str() + "/manifest.txt", {{"gone.dpth", "gone.lbls"}});
    PipelineConfig config;
    config.pc = 10;
    config.trees = 1;
    config.depth = 3;
    config.frames_per_tree = 1;
    try {
        train_from_manifest(config, dir.str() + "/manifest.txt");
        FAIL("expected an IoError");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("gone.dpth") != std::string::npos);
    }
}

TEST_CASE("an ensemble does not materially hurt the single tree") {
    // small synthetic pipeline split; mAR(T=5) >= mAR(T=1) - 0.02
    PipelineConfig config;
    config.width = 80;
    config.height = 60;
    config.pc = 80;
    config.pixels_per_class = 12;
    config.depth = 10;
    config.frames_per_tree = 30;
    config.dataset_frames = 30;
    config.threads = 2;
    config.seed = 3;

    const PoseLibrary poses = PoseLibrary::load(test_support::repo_path("data/poses.txt"));
    test_support::TempDir dir("ensemble");
    SynthesisRequest req;
    req.count = 30;
    req.out_dir = dir.str() + "/train";
    req.sigma = config.sigma;
    const std::string manifest = synthesize_dataset(config, poses, req);
    SynthesisRequest test_req;
    test_req.count = 8;
    test_req.out_dir = dir.str() + "/test";
    test_req.scene_stream = stream::scene_test;
    test_req.sigma = config.sigma;
    const auto test_entries = read_manifest(synthesize_dataset(config, poses, test_req));

    auto mar_for_trees = [&](int trees) {
        PipelineConfig variant = config;
        variant.trees = trees;
        const Forest forest = train_from_manifest(variant, manifest);
        EvalOptions opts;
        opts.threads = 2;
        return report(evaluate_forest(forest, test_entries, opts), kBackgroundId).mean_recall;
    };
    const double single = mar_for_trees(1);
    const double ensemble = mar_for_trees(5);
    CHECK(ensemble >= single - 0.02);
}
