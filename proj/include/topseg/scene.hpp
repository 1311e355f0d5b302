#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "topseg/geometry.hpp"
#include "topseg/object_class.hpp"
#include "topseg/skeleton.hpp"

namespace topseg {

/// Pairwise arrangement kinds the sampler can draw for a new instance
/// relative to an already placed one.
enum class RelationKind : std::uint8_t {
    free_standing = 0,
    adjacent_contact = 1,
    partial_occlusion = 2,
    stacked_on_top = 3,
    human_touching_object = 4,
};

inline constexpr int kRelationKindCount = 5;

struct InteractionParams {
    /// Max allowed footprint-overlap fraction (intersection / smaller area).
    float theta_prime = 0.30f;
    /// Sampling weights per RelationKind, must sum to 1.
    std::array<float, kRelationKindCount> relationship_weights = {0.40f, 0.20f, 0.20f, 0.10f, 0.10f};
};

/// Solid with the pixel class it renders as. Furniture shapes all carry the
/// furniture class; human spheres carry their body-part class.
struct LabeledShape {
    Shape geom;
    ObjectClass label = ObjectClass::table;
};

/// One placed object. Shapes live in a local frame with the ground at z=0;
/// the world placement rotates by `orientation` about the vertical axis, then
/// translates by (position, base_z).
struct ObjectInstance {
    /// Furniture class, or ObjectClass::body for human instances (humans are
    /// labeled per sphere; pose_id >= 0 marks an instance as human).
    ObjectClass cls = ObjectClass::table;
    std::vector<LabeledShape> shapes;
    float height = 0.f;       // sampled overall height (standing height for humans)
    Vec2f position;           // scene-plane position, meters
    float orientation = 0.f;  // radians in [0, 2*pi)
    float base_z = 0.f;       // elevation of the local ground plane (stacking)
    int pose_id = -1;         // humans only
    int preset_id = -1;       // furniture only
    int id = -1;              // index within the owning scene
    RelationKind relation = RelationKind::free_standing;
    int relation_anchor = -1;  // id of the instance `relation` refers to
};

inline bool is_human(const ObjectInstance& inst) { return inst.pose_id >= 0; }

struct SceneGraph {
    std::vector<ObjectInstance> instances;
    float extent_w = 4.0f;
    float extent_h = 3.0f;
    float camera_height = 3.5f;
    std::uint64_t seed = 0;
};

/// Top-view footprint: the instance's local-frame bounding rectangle, rotated
/// and translated into the scene plane.
Polygon2 instance_footprint(const ObjectInstance& inst);

/// intersection area / smaller footprint area, in [0, 1].
double footprint_overlap_fraction(const ObjectInstance& a, const ObjectInstance& b);

/// Accepts the pair iff the overlap fraction is within theta_prime, or the
/// pair is a stacked-on-top relation whose vertical clearance holds (upper
/// base at or above the lower top surface).
bool check_interaction(const ObjectInstance& a, const ObjectInstance& b, const InteractionParams& params);

/// True when every instance pair of the scene passes check_interaction.
bool validate_scene(const SceneGraph& scene, const InteractionParams& params);

inline constexpr int kFurniturePresetCount = 4;

/// Parametric solid composition for a furniture class: preset picks one of
/// four fixed footprint variants, height stretches the build vertically so the
/// top lands at `height`. Throws std::invalid_argument for non-furniture.
std::vector<LabeledShape> make_furniture_shapes(ObjectClass cls, int preset, float height);

/// Sphere-set shapes for a scaled skeleton, labeled per body part.
std::vector<LabeledShape> make_human_shapes(const HumanSkeleton& skeleton);

}  // namespace topseg
