#pragma once

#include <cstdint>
#include <string>

#include "topseg/features.hpp"
#include "topseg/forest.hpp"
#include "topseg/render.hpp"
#include "topseg/scene_sampler.hpp"

namespace topseg {

/// Everything the pipeline needs, loadable from a flat key=value file.
/// Defaults are the reference parameter setup: tree depth 19, 5 trees,
/// 300 features, 1600 frames/tree, sigma 0.15 m, theta_prime 0.30,
/// 640x480 frames, camera at 3.5 m.
struct PipelineConfig {
    // scene model
    float extent_w = 4.0f;
    float extent_h = 3.0f;
    float camera_height = 3.5f;
    float theta_prime = 0.30f;
    float rel_free = 0.40f;
    float rel_adjacent = 0.20f;
    float rel_partial = 0.20f;
    float rel_stacked = 0.10f;
    float rel_touch = 0.10f;
    float human_height_min = 1.60f;
    float human_height_max = 1.90f;
    float canonical_stand_height = 1.60f;
    float furniture_height_min = 0.70f;
    float furniture_height_max = 0.90f;
    float plant_height_min = 0.15f;
    float plant_height_max = 0.35f;
    int rejection_cap = 100;
    int max_humans = 1;
    CountRange mix_human{1, 1};
    CountRange mix_table{1, 2};
    CountRange mix_storage{1, 2};
    CountRange mix_chair{1, 2};
    CountRange mix_plant{1, 2};
    std::string pose_library = "data/poses.txt";

    // camera / noise
    int width = 640;
    int height = 480;
    Projection projection = Projection::orthographic;
    float fov_y_deg = 45.f;
    float sigma = 0.15f;

    // features
    int pc = 300;
    int patch_w = 64;
    int patch_h = 64;
    bool scaled_offsets = false;

    // forest
    int depth = 19;
    int trees = 5;
    int frames_per_tree = 1600;
    int thresholds_per_feature = 100;
    int response_samples = 100;
    float min_info_gain = 1e-4f;
    float bagging_fraction = 1.0f;
    float leaf_laplace = 1.0f;
    SplitKind split_kind = SplitKind::linear;
    int pixels_per_class = 32;

    // crf
    float lambda = 2.0f;
    int neighborhood = 4;
    int max_sweeps = 10;
    std::string lambda_grid = "0.5,1,2,4,8";

    // experiment scales
    int dataset_frames = 20000;
    int test_frames = 65;
    int val_frames = 20;
    std::string noise_sigmas = "0,0.05,0.10,0.15,0.30,0.50,1.00";
    std::string split_pcs = "75,150,300,400,500,600";
    std::string modeling_fs = "40,200,400,1200,1600,2400,4800";

    // execution
    unsigned threads = 0;
    std::uint64_t seed = 1;

    bool operator==(const PipelineConfig&) const = default;
};

/// Parses `key = value` lines ('#' comments and blank lines allowed). Unknown
/// keys raise ConfigError naming the key and line.
PipelineConfig parse_config_text(const std::string& text, const std::string& origin,
                                 PipelineConfig base = {});
PipelineConfig load_config(const std::string& path, PipelineConfig base = {});

/// Applies one "key=value" override in place.
void apply_config_override(PipelineConfig& config, const std::string& assignment);

/// Full key=value dump; parsing it back reproduces the config exactly.
std::string dump_config(const PipelineConfig& config);

/// Comma-separated list helpers for the experiment keys.
std::vector<float> parse_float_list(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);

SceneModelConfig scene_model_from(const PipelineConfig& config);
InteractionParams interaction_params_from(const PipelineConfig& config);
ClassMix class_mix_from(const PipelineConfig& config);
Camera camera_from(const PipelineConfig& config);
TrainConfig train_config_from(const PipelineConfig& config);

}  // namespace topseg
