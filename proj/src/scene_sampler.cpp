#include "topseg/scene_sampler.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "topseg/errors.hpp"
#include "topseg/rng.hpp"

namespace topseg {

namespace {

constexpr float kTwoPi = 2.0f * std::numbers::pi_v<float>;

float uniform_in(Rng& rng, float lo, float hi) {
    return std::uniform_real_distribution<float>(lo, hi)(rng);
}

int uniform_count(Rng& rng, const CountRange& range) {
    if (range.max <= range.min) return range.min;
    return std::uniform_int_distribution<int>(range.min, range.max)(rng);
}

RelationKind draw_relation(Rng& rng, const InteractionParams& params) {
    const float u = uniform_in(rng, 0.f, 1.f);
    float acc = 0.f;
    for (int k = 0; k < kRelationKindCount; ++k) {
        acc += params.relationship_weights[k];
        if (u < acc) return static_cast<RelationKind>(k);
    }
    return RelationKind::free_standing;
}

struct LocalExtent {
    float cx, cy, hx, hy;
};

LocalExtent local_extent(const std::vector<LabeledShape>& shapes) {
    Bounds2 b = shape_footprint_bounds(shapes.front().geom);
    for (std::size_t i = 1; i < shapes.size(); ++i) {
        Bounds2 s = shape_footprint_bounds(shapes[i].geom);
        b.min_x = std::min(b.min_x, s.min_x);
        b.min_y = std::min(b.min_y, s.min_y);
        b.max_x = std::max(b.max_x, s.max_x);
        b.max_y = std::max(b.max_y, s.max_y);
    }
    return {0.5f * (b.min_x + b.max_x), 0.5f * (b.min_y + b.max_y),
            0.5f * (b.max_x - b.min_x), 0.5f * (b.max_y - b.min_y)};
}

float circumradius(const std::vector<LabeledShape>& shapes) {
    const LocalExtent e = local_extent(shapes);
    return std::hypot(e.hx, e.hy);
}

bool in_bounds(const Vec2f& p, const SceneModelConfig& cfg) {
    return p.x >= 0.f && p.x <= cfg.extent_w && p.y >= 0.f && p.y <= cfg.extent_h;
}

// Kinds queued for placement; anchors for later kinds exist by the time they
// are placed (furniture first, humans last).
struct PendingInstance {
    ObjectClass cls;       // placeable class; humans use ObjectClass::body
    bool human = false;
    bool mandatory = false;
};

}  // namespace

SceneSampler::SceneSampler(SceneModelConfig config, InteractionParams params, const PoseLibrary* poses)
    : config_(config), params_(params), poses_(poses) {
    float weight_sum = 0.f;
    for (float w : params_.relationship_weights) {
        if (w < 0.f) throw std::invalid_argument("relationship weights must be non-negative");
        weight_sum += w;
    }
    if (std::abs(weight_sum - 1.f) > 1e-4f)
        throw std::invalid_argument("relationship weights must sum to 1");
    if (params_.theta_prime < 0.f || params_.theta_prime > 1.f)
        throw std::invalid_argument("theta_prime must lie in [0, 1]");
}

SceneGraph SceneSampler::sample(std::uint64_t seed, const ClassMix& mix, std::ostream* drop_log) const {
    if (!(config_.extent_w > 0.f) || !(config_.extent_h > 0.f))
        throw std::invalid_argument("scene extent must be positive");

    Rng rng = make_rng(seed);
    SceneGraph scene;
    scene.extent_w = config_.extent_w;
    scene.extent_h = config_.extent_h;
    scene.camera_height = config_.camera_height;
    scene.seed = seed;

    std::vector<PendingInstance> queue;
    auto enqueue = [&](ObjectClass cls, bool human, const CountRange& range, int cap) {
        int count = uniform_count(rng, range);
        if (cap >= 0) count = std::min(count, cap);
        for (int i = 0; i < count; ++i) queue.push_back({cls, human, i < range.min});
    };
    enqueue(ObjectClass::table, false, mix.table, -1);
    enqueue(ObjectClass::storage, false, mix.storage, -1);
    enqueue(ObjectClass::chair, false, mix.chair, -1);
    enqueue(ObjectClass::plant, false, mix.plant, -1);
    enqueue(ObjectClass::body, true, mix.human, config_.max_humans);

    for (const PendingInstance& pending : queue) {
        ObjectInstance inst;
        inst.cls = pending.cls;
        if (pending.human) {
            if (!poses_ || poses_->size() == 0)
                throw std::invalid_argument("pose library required to place humans");
            inst.pose_id = std::uniform_int_distribution<int>(0, static_cast<int>(poses_->size()) - 1)(rng);
            const float target = uniform_in(rng, config_.human_height_min, config_.human_height_max);
            const double beta = double(target) / double(config_.canonical_stand_height);
            inst.shapes = make_human_shapes(apply_skeleton_scale(poses_->pose(inst.pose_id), beta));
            inst.height = target;
        } else {
            inst.preset_id = std::uniform_int_distribution<int>(0, kFurniturePresetCount - 1)(rng);
            const bool plant = pending.cls == ObjectClass::plant;
            inst.height = uniform_in(rng,
                                     plant ? config_.plant_height_min : config_.furniture_height_min,
                                     plant ? config_.plant_height_max : config_.furniture_height_max);
            inst.shapes = make_furniture_shapes(pending.cls, inst.preset_id, inst.height);
        }
        const float own_radius = circumradius(inst.shapes);

        bool placed = false;
        for (int attempt = 0; attempt < config_.rejection_cap && !placed; ++attempt) {
            inst.orientation = uniform_in(rng, 0.f, kTwoPi);
            inst.base_z = 0.f;
            inst.relation = RelationKind::free_standing;
            inst.relation_anchor = -1;

            RelationKind kind = scene.instances.empty() ? RelationKind::free_standing
                                                        : draw_relation(rng, params_);
            // Kinds that don't apply to this instance degrade to free placement.
            std::vector<int> anchors;
            if (kind == RelationKind::stacked_on_top) {
                if (pending.cls == ObjectClass::plant)
                    for (const auto& other : scene.instances)
                        if (other.cls == ObjectClass::table || other.cls == ObjectClass::storage)
                            anchors.push_back(other.id);
            } else if (kind == RelationKind::human_touching_object) {
                if (pending.human)
                    for (const auto& other : scene.instances)
                        if (!is_human(other)) anchors.push_back(other.id);
            } else if (kind != RelationKind::free_standing) {
                for (const auto& other : scene.instances) anchors.push_back(other.id);
            }
            if (anchors.empty()) kind = RelationKind::free_standing;

            if (kind == RelationKind::free_standing) {
                inst.position = {uniform_in(rng, 0.f, config_.extent_w),
                                 uniform_in(rng, 0.f, config_.extent_h)};
            } else {
                const int anchor_id =
                    anchors[std::uniform_int_distribution<std::size_t>(0, anchors.size() - 1)(rng)];
                const ObjectInstance& anchor = scene.instances[anchor_id];
                if (kind == RelationKind::stacked_on_top) {
                    const LocalExtent top = local_extent(anchor.shapes);
                    const float mx = std::max(0.f, top.hx - own_radius);
                    const float my = std::max(0.f, top.hy - own_radius);
                    const float lx = top.cx + uniform_in(rng, -mx, mx);
                    const float ly = top.cy + uniform_in(rng, -my, my);
                    const float c = std::cos(anchor.orientation), s = std::sin(anchor.orientation);
                    inst.position = {anchor.position.x + lx * c - ly * s,
                                     anchor.position.y + lx * s + ly * c};
                    inst.base_z = anchor.base_z + anchor.height;
                } else {
                    float lo = 1.00f, hi = 1.15f;  // adjacent-contact
                    if (kind == RelationKind::partial_occlusion) { lo = 0.55f; hi = 0.95f; }
                    if (kind == RelationKind::human_touching_object) { lo = 0.85f; hi = 1.05f; }
                    const float dist = (own_radius + circumradius(anchor.shapes)) * uniform_in(rng, lo, hi);
                    const float angle = uniform_in(rng, 0.f, kTwoPi);
                    inst.position = {anchor.position.x + dist * std::cos(angle),
                                     anchor.position.y + dist * std::sin(angle)};
                }
                inst.relation = kind;
                inst.relation_anchor = anchor_id;
            }

            if (!in_bounds(inst.position, config_)) continue;
            inst.id = static_cast<int>(scene.instances.size());
            bool ok = true;
            for (const auto& other : scene.instances)
                if (!check_interaction(inst, other, params_)) { ok = false; break; }
            if (!ok) continue;
            scene.instances.push_back(inst);
            placed = true;
        }

        if (!placed) {
            const std::string name(pending.human ? "human" : class_name(pending.cls));
            if (pending.mandatory)
                throw SceneError("could not place mandatory instance of class '" + name + "' within " +
                                     std::to_string(config_.rejection_cap) + " attempts",
                                 name);
            if (drop_log)
                *drop_log << "scene " << seed << ": dropped " << name << " after "
                          << config_.rejection_cap << " attempts\n";
        }
    }
    return scene;
}

}  // namespace topseg
