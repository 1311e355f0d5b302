#include "topseg/pipeline.hpp"

#include <cstdio>
#include <filesystem>

#include "topseg/errors.hpp"

#include "topseg/parallel.hpp"
#include "topseg/render.hpp"

namespace topseg {

namespace {

// Baseline scenes cycle one instance kind per frame so every class stays
// represented in the training pool.
ClassMix single_object_mix(std::size_t scene_index) {
    ClassMix mix;
    mix.human = {0, 0};
    mix.table = {0, 0};
    mix.storage = {0, 0};
    mix.chair = {0, 0};
    mix.plant = {0, 0};
    switch (scene_index % 5) {
        case 0: mix.human = {1, 1}; break;
        case 1: mix.table = {1, 1}; break;
        case 2: mix.storage = {1, 1}; break;
        case 3: mix.chair = {1, 1}; break;
        default: mix.plant = {1, 1}; break;
    }
    return mix;
}

std::string frame_name(const std::string& prefix, int index, const char* ext) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "_%06d.%s", index, ext);
    return prefix + buf;
}

}  // namespace

std::string synthesize_dataset(const PipelineConfig& config, const PoseLibrary& poses,
                               const SynthesisRequest& request) {
    namespace fs = std::filesystem;
    fs::create_directories(request.out_dir);

    const SceneSampler sampler(scene_model_from(config), interaction_params_from(config), &poses);
    const Camera camera = camera_from(config);
    const ClassMix modeled_mix = class_mix_from(config);

    std::vector<ManifestEntry> entries(request.count);
    parallel_for(std::size_t(request.count), config.threads, [&](std::size_t i) {
        const std::uint64_t scene_seed = stream_seed(config.seed, request.scene_stream, i);
        const ClassMix mix =
            request.style == SceneStyle::modeled ? modeled_mix : single_object_mix(i);
        const SceneGraph scene = sampler.sample(scene_seed, mix);
        RenderResult frame = render(scene, camera);
        if (request.sigma > 0.f) {
            NoiseParams noise{request.sigma,
                              stream_seed(config.seed, request.scene_stream ^ stream::noise, i)};
            frame.depth = add_noise(frame.depth, noise, config.camera_height);
        }
        const std::string depth_name = frame_name(request.prefix, int(i), "dpth");
        const std::string label_name = frame_name(request.prefix, int(i), "lbls");
        write_depth((fs::path(request.out_dir) / depth_name).string(), frame.depth);
        write_labels((fs::path(request.out_dir) / label_name).string(), frame.labels);
        entries[i] = {depth_name, label_name};
    });

    const std::string manifest_path = (fs::path(request.out_dir) / "manifest.txt").string();
    write_manifest(manifest_path, entries);
    return manifest_path;
}

FrameSource manifest_frame_source(std::vector<ManifestEntry> entries) {
    FrameSource source;
    source.count = entries.size();
    source.load = [entries = std::move(entries)](std::size_t i, DepthFrame& depth, LabelFrame& labels) {
        depth = read_depth(entries[i].depth_path);
        labels = read_labels(entries[i].label_path);
    };
    return source;
}

Forest train_from_manifest(const PipelineConfig& config, const std::string& manifest_path) {
    const auto entries = read_manifest(manifest_path);
    if (entries.empty()) throw IoError("manifest is empty: " + manifest_path);
    const FeatureSpec spec = make_spec(config.pc, config.patch_w, config.patch_h,
                                       stream_seed(config.seed, stream::feature_spec, 0),
                                       config.scaled_offsets);
    return train_forest(manifest_frame_source(entries), train_config_from(config), spec,
                        config.camera_height);
}

ConfusionMatrix evaluate_forest(const Forest& forest, const std::vector<ManifestEntry>& test_set,
                                const EvalOptions& options) {
    std::vector<ConfusionMatrix> partials(test_set.size(), ConfusionMatrix(forest.class_count));
    parallel_for(test_set.size(), options.threads, [&](std::size_t i) {
        const DepthFrame depth = read_depth(test_set[i].depth_path);
        const LabelFrame truth = read_labels(test_set[i].label_path);
        const PosteriorVolume posteriors = predict(forest, depth, 1);
        LabelFrame pred;
        if (options.use_crf) {
            const CrfProblem problem =
                problem_from_posteriors(posteriors, options.lambda, options.neighborhood);
            pred = solve(problem, std::nullopt, options.max_sweeps).labels;
        } else {
            pred = argmax_labels(posteriors);
        }
        accumulate(partials[i], truth, pred);
    });
    ConfusionMatrix cm(forest.class_count);
    for (const auto& partial : partials) cm.merge(partial);
    return cm;
}

}  // namespace topseg
