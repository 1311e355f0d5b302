#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "topseg/config.hpp"
#include "topseg/crf.hpp"
#include "topseg/forest.hpp"
#include "topseg/metrics.hpp"
#include "topseg/raster_io.hpp"
#include "topseg/scene_sampler.hpp"

namespace topseg {

/// modeled: scenes drawn from the full interaction model. single_object: the
/// baseline style with exactly one instance per scene and no relationships.
enum class SceneStyle { modeled, single_object };

struct SynthesisRequest {
    int count = 0;
    std::string out_dir;
    SceneStyle style = SceneStyle::modeled;
    std::uint64_t scene_stream = stream::scene_train;
    float sigma = 0.15f;
    std::string prefix = "frame";
};

/// Renders `count` scenes to depth/label raster pairs plus a manifest.
/// Deterministic: frame i depends only on (config.seed, scene_stream, i).
/// Returns the manifest path.
std::string synthesize_dataset(const PipelineConfig& config, const PoseLibrary& poses,
                               const SynthesisRequest& request);

/// FrameSource streaming raster pairs from disk.
FrameSource manifest_frame_source(std::vector<ManifestEntry> entries);

Forest train_from_manifest(const PipelineConfig& config, const std::string& manifest_path);

struct EvalOptions {
    bool use_crf = false;
    float lambda = 2.0f;
    int neighborhood = 4;
    int max_sweeps = 10;
    unsigned threads = 0;
};

/// Predicts every manifest frame and tallies the confusion against ground
/// truth; frames run in parallel with per-worker matrices merged at the end.
ConfusionMatrix evaluate_forest(const Forest& forest, const std::vector<ManifestEntry>& test_set,
                                const EvalOptions& options);

}  // namespace topseg
