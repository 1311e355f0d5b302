#pragma once

#include <cmath>
#include <limits>
#include <vector>

namespace topseg {

struct Vec2f {
    float x = 0.f;
    float y = 0.f;
};

struct Vec3f {
    float x = 0.f;
    float y = 0.f;
    float z = 0.f;
};

inline Vec3f operator*(const Vec3f& v, float s) { return {v.x * s, v.y * s, v.z * s}; }
inline Vec3f operator+(const Vec3f& a, const Vec3f& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3f operator-(const Vec3f& a, const Vec3f& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }

struct Vec2d {
    double x = 0.0;
    double y = 0.0;
};

struct Vec3d {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

inline Vec3d operator*(const Vec3d& v, double s) { return {v.x * s, v.y * s, v.z * s}; }

/// Convex polygon, vertices in counter-clockwise order.
using Polygon2 = std::vector<Vec2d>;

double polygon_area(const Polygon2& poly);

/// Clips `subject` against convex `clip` (Sutherland-Hodgman). Both must be
/// convex and CCW; the result is the (possibly empty) intersection polygon.
Polygon2 clip_convex(const Polygon2& subject, const Polygon2& clip);

double intersection_area(const Polygon2& a, const Polygon2& b);

/// CCW rectangle centered at (cx, cy), half extents (hx, hy), rotated by angle.
Polygon2 rect_polygon(double cx, double cy, double hx, double hy, double angle);

/// Parametric solid in instance-local coordinates. `extent` is interpreted per
/// kind: box = half extents, cylinder = (radius, radius, half height),
/// sphere = (r, r, r), ellipsoid = semi-axes.
struct Shape {
    enum class Kind { box, cylinder, sphere, ellipsoid };

    Kind kind = Kind::box;
    Vec3f center;
    Vec3f extent;

    static Shape make_box(Vec3f center, Vec3f half);
    static Shape make_cylinder(Vec3f center, float radius, float half_height);
    static Shape make_sphere(Vec3f center, float radius);
    static Shape make_ellipsoid(Vec3f center, Vec3f radii);
};

inline constexpr float kNoSurface = -std::numeric_limits<float>::infinity();

/// Height of the shape's top surface above the local ground plane at (lx, ly);
/// kNoSurface if the vertical line misses the shape.
float shape_top_z(const Shape& shape, float lx, float ly);

/// First intersection of the local-frame ray origin + t*dir with the shape,
/// t >= 0. Returns false on a miss.
bool shape_ray_hit(const Shape& shape, const Vec3f& origin, const Vec3f& dir, float& t_hit);

struct Bounds2 {
    float min_x = 0.f, min_y = 0.f, max_x = 0.f, max_y = 0.f;
};

/// Axis-aligned bounds of the shape's footprint in the local frame.
Bounds2 shape_footprint_bounds(const Shape& shape);

}  // namespace topseg
