#pragma once

#include <cstdint>
#include <iosfwd>

#include "topseg/scene.hpp"
#include "topseg/skeleton.hpp"

namespace topseg {

struct CountRange {
    int min = 0;
    int max = 0;

    bool operator==(const CountRange&) const = default;
};

/// Instance-count ranges per placeable kind. Humans are placed as one
/// instance carrying all six body-part classes.
struct ClassMix {
    CountRange human{1, 1};
    CountRange table{1, 2};
    CountRange storage{1, 2};
    CountRange chair{1, 2};
    CountRange plant{1, 2};
};

struct SceneModelConfig {
    float extent_w = 4.0f;
    float extent_h = 3.0f;
    float camera_height = 3.5f;
    float human_height_min = 1.60f;
    float human_height_max = 1.90f;
    /// Standing height the bundled pose library is authored at; the sampled
    /// body scale is target height / canonical height.
    float canonical_stand_height = 1.60f;
    float furniture_height_min = 0.70f;
    float furniture_height_max = 0.90f;
    float plant_height_min = 0.15f;
    float plant_height_max = 0.35f;
    int rejection_cap = 100;  // placement attempts before an instance is dropped
    int max_humans = 1;
};

/// Draws scene configurations: per-instance heights, poses, positions and
/// orientations from their uniform laws, pairwise arrangements from the
/// relationship weights, all validated through check_interaction with
/// rejection resampling. Pure function of (config, params, mix, seed).
class SceneSampler {
public:
    SceneSampler(SceneModelConfig config, InteractionParams params, const PoseLibrary* poses);

    /// Samples one scene. Non-mandatory instances that exhaust the rejection
    /// budget are dropped (noted on drop_log when given); a mandatory one
    /// raises SceneError naming the failing class.
    SceneGraph sample(std::uint64_t seed, const ClassMix& mix, std::ostream* drop_log = nullptr) const;

    const SceneModelConfig& config() const { return config_; }
    const InteractionParams& params() const { return params_; }

private:
    SceneModelConfig config_;
    InteractionParams params_;
    const PoseLibrary* poses_;
};

}  // namespace topseg
