#include "topseg/scene.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace topseg {

Polygon2 instance_footprint(const ObjectInstance& inst) {
    if (inst.shapes.empty()) return {};
    Bounds2 b = shape_footprint_bounds(inst.shapes.front().geom);
    for (std::size_t i = 1; i < inst.shapes.size(); ++i) {
        Bounds2 s = shape_footprint_bounds(inst.shapes[i].geom);
        b.min_x = std::min(b.min_x, s.min_x);
        b.min_y = std::min(b.min_y, s.min_y);
        b.max_x = std::max(b.max_x, s.max_x);
        b.max_y = std::max(b.max_y, s.max_y);
    }
    const double cx = 0.5 * (b.min_x + b.max_x);
    const double cy = 0.5 * (b.min_y + b.max_y);
    const double hx = 0.5 * (b.max_x - b.min_x);
    const double hy = 0.5 * (b.max_y - b.min_y);
    // Rotate the local-frame center into the scene plane, then shift.
    const double c = std::cos(inst.orientation), s = std::sin(inst.orientation);
    const double wx = inst.position.x + cx * c - cy * s;
    const double wy = inst.position.y + cx * s + cy * c;
    return rect_polygon(wx, wy, hx, hy, inst.orientation);
}

double footprint_overlap_fraction(const ObjectInstance& a, const ObjectInstance& b) {
    const Polygon2 fa = instance_footprint(a);
    const Polygon2 fb = instance_footprint(b);
    const double area_a = polygon_area(fa);
    const double area_b = polygon_area(fb);
    const double smaller = std::min(area_a, area_b);
    if (smaller <= 0.0) return 0.0;
    return intersection_area(fa, fb) / smaller;
}

namespace {

bool stacked_clearance(const ObjectInstance& upper, const ObjectInstance& lower) {
    return upper.base_z >= lower.base_z + lower.height - 1e-6f;
}

}  // namespace

bool check_interaction(const ObjectInstance& a, const ObjectInstance& b, const InteractionParams& params) {
    if (a.relation == RelationKind::stacked_on_top && a.relation_anchor == b.id &&
        stacked_clearance(a, b))
        return true;
    if (b.relation == RelationKind::stacked_on_top && b.relation_anchor == a.id &&
        stacked_clearance(b, a))
        return true;
    return footprint_overlap_fraction(a, b) <= params.theta_prime + 1e-9;
}

bool validate_scene(const SceneGraph& scene, const InteractionParams& params) {
    for (std::size_t i = 0; i < scene.instances.size(); ++i)
        for (std::size_t j = i + 1; j < scene.instances.size(); ++j)
            if (!check_interaction(scene.instances[i], scene.instances[j], params)) return false;
    return true;
}

namespace {

void add_table_legs(std::vector<Shape>& shapes, float hx, float hy, float leg_top, float leg_half, float inset) {
    const float lx = hx - inset, ly = hy - inset;
    for (float sx : {-1.f, 1.f})
        for (float sy : {-1.f, 1.f})
            shapes.push_back(Shape::make_box({sx * lx, sy * ly, leg_top * 0.5f},
                                             {leg_half, leg_half, leg_top * 0.5f}));
}

std::vector<Shape> table_shapes(int preset, float h) {
    std::vector<Shape> shapes;
    const float slab = 0.04f;
    const float leg_top = h - slab;
    if (preset == 2) {
        // Round pedestal table.
        const float r = 0.50f;
        shapes.push_back(Shape::make_cylinder({0, 0, h - slab * 0.5f}, r, slab * 0.5f));
        shapes.push_back(Shape::make_cylinder({0, 0, leg_top * 0.5f}, 0.06f, leg_top * 0.5f));
        shapes.push_back(Shape::make_cylinder({0, 0, 0.02f}, 0.25f, 0.02f));
        return shapes;
    }
    float hx = 0.60f, hy = 0.40f;
    if (preset == 1) { hx = 0.80f; hy = 0.45f; }
    if (preset == 3) { hx = 0.40f; hy = 0.40f; }
    shapes.push_back(Shape::make_box({0, 0, h - slab * 0.5f}, {hx, hy, slab * 0.5f}));
    add_table_legs(shapes, hx, hy, leg_top, 0.025f, 0.06f);
    return shapes;
}

std::vector<Shape> chair_shapes(int preset, float h) {
    std::vector<Shape> shapes;
    // Seat pan at roughly mid height, backrest slab rising to h at the rear.
    float seat_hx = 0.225f, seat_hy = 0.225f;
    bool arms = (preset == 0 || preset == 2);
    if (preset == 2) { seat_hx = 0.275f; seat_hy = 0.25f; }
    if (preset == 3) { seat_hx = 0.20f; seat_hy = 0.20f; }
    const float seat_top = 0.52f * h;
    const float seat_thick = 0.05f;
    shapes.push_back(Shape::make_box({0, 0, seat_top - seat_thick * 0.5f},
                                     {seat_hx, seat_hy, seat_thick * 0.5f}));
    const float back_half = 0.5f * (h - seat_top);
    shapes.push_back(Shape::make_box({-(seat_hx - 0.025f), 0, seat_top + back_half},
                                     {0.025f, seat_hy, back_half}));
    const float leg_top = seat_top - seat_thick;
    add_table_legs(shapes, seat_hx, seat_hy, leg_top, 0.02f, 0.03f);
    if (arms) {
        const float arm_top = seat_top + 0.45f * (h - seat_top);
        for (float sy : {-1.f, 1.f})
            shapes.push_back(Shape::make_box({0, sy * (seat_hy + 0.03f), arm_top - 0.015f},
                                             {seat_hx, 0.02f, 0.015f}));
    }
    return shapes;
}

std::vector<Shape> storage_shapes(int preset, float h) {
    float hx = 0.40f, hy = 0.20f;
    if (preset == 1) { hx = 0.50f; hy = 0.25f; }
    if (preset == 2) { hx = 0.30f; hy = 0.30f; }
    if (preset == 3) { hx = 0.225f; hy = 0.225f; }
    return {Shape::make_box({0, 0, h * 0.5f}, {hx, hy, h * 0.5f})};
}

std::vector<Shape> plant_shapes(int preset, float h) {
    float pot_r = 0.10f, canopy_r = 0.15f;
    if (preset == 1) { pot_r = 0.12f; canopy_r = 0.20f; }
    if (preset == 2) { pot_r = 0.14f; canopy_r = 0.25f; }
    if (preset == 3) { pot_r = 0.08f; canopy_r = 0.12f; }
    const float pot_h = 0.40f * h;
    const float canopy_rz = 0.5f * (h - pot_h);
    std::vector<Shape> shapes;
    shapes.push_back(Shape::make_cylinder({0, 0, pot_h * 0.5f}, pot_r, pot_h * 0.5f));
    shapes.push_back(Shape::make_ellipsoid({0, 0, pot_h + canopy_rz}, {canopy_r, canopy_r, canopy_rz}));
    return shapes;
}

}  // namespace

std::vector<LabeledShape> make_furniture_shapes(ObjectClass cls, int preset, float height) {
    if (preset < 0 || preset >= kFurniturePresetCount)
        throw std::invalid_argument("furniture preset out of range");
    if (!(height > 0.f)) throw std::invalid_argument("furniture height must be positive");
    std::vector<Shape> solids;
    switch (cls) {
        case ObjectClass::table: solids = table_shapes(preset, height); break;
        case ObjectClass::chair: solids = chair_shapes(preset, height); break;
        case ObjectClass::storage: solids = storage_shapes(preset, height); break;
        case ObjectClass::plant: solids = plant_shapes(preset, height); break;
        default: throw std::invalid_argument("not a furniture class");
    }
    std::vector<LabeledShape> shapes;
    shapes.reserve(solids.size());
    for (const auto& s : solids) shapes.push_back({s, cls});
    return shapes;
}

std::vector<LabeledShape> make_human_shapes(const HumanSkeleton& skeleton) {
    std::vector<LabeledShape> shapes;
    shapes.reserve(skeleton.spheres.size());
    for (const auto& s : skeleton.spheres) {
        const Vec3f center{float(s.center.x), float(s.center.y), float(s.center.z)};
        shapes.push_back({Shape::make_sphere(center, float(s.radius)), s.part});
    }
    return shapes;
}

}  // namespace topseg
