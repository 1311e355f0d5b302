#include "topseg/geometry.hpp"

#include <algorithm>

namespace topseg {

double polygon_area(const Polygon2& poly) {
    if (poly.size() < 3) return 0.0;
    double twice = 0.0;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        twice += poly[j].x * poly[i].y - poly[i].x * poly[j].y;
    }
    return 0.5 * std::abs(twice);
}

namespace {

// Signed distance of p to the directed edge a->b; >= 0 means inside for CCW.
double edge_side(const Vec2d& a, const Vec2d& b, const Vec2d& p) {
    return (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
}

Vec2d line_intersect(const Vec2d& a, const Vec2d& b, const Vec2d& p, const Vec2d& q) {
    const double a1 = b.y - a.y, b1 = a.x - b.x, c1 = a1 * a.x + b1 * a.y;
    const double a2 = q.y - p.y, b2 = p.x - q.x, c2 = a2 * p.x + b2 * p.y;
    const double det = a1 * b2 - a2 * b1;
    if (std::abs(det) < 1e-300) return p;  // parallel; caller tolerates the degenerate vertex
    return {(b2 * c1 - b1 * c2) / det, (a1 * c2 - a2 * c1) / det};
}

}  // namespace

Polygon2 clip_convex(const Polygon2& subject, const Polygon2& clip) {
    Polygon2 output = subject;
    for (std::size_t i = 0, j = clip.size() - 1; i < clip.size() && !output.empty(); j = i++) {
        const Vec2d& a = clip[j];
        const Vec2d& b = clip[i];
        Polygon2 input;
        input.swap(output);
        for (std::size_t k = 0, m = input.size() - 1; k < input.size(); m = k++) {
            const Vec2d& prev = input[m];
            const Vec2d& cur = input[k];
            const bool cur_in = edge_side(a, b, cur) >= 0.0;
            const bool prev_in = edge_side(a, b, prev) >= 0.0;
            if (cur_in) {
                if (!prev_in) output.push_back(line_intersect(a, b, prev, cur));
                output.push_back(cur);
            } else if (prev_in) {
                output.push_back(line_intersect(a, b, prev, cur));
            }
        }
    }
    return output;
}

double intersection_area(const Polygon2& a, const Polygon2& b) {
    if (a.size() < 3 || b.size() < 3) return 0.0;
    return polygon_area(clip_convex(a, b));
}

Polygon2 rect_polygon(double cx, double cy, double hx, double hy, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    auto corner = [&](double dx, double dy) -> Vec2d {
        return {cx + dx * c - dy * s, cy + dx * s + dy * c};
    };
    return {corner(-hx, -hy), corner(hx, -hy), corner(hx, hy), corner(-hx, hy)};
}

Shape Shape::make_box(Vec3f center, Vec3f half) { return {Kind::box, center, half}; }

Shape Shape::make_cylinder(Vec3f center, float radius, float half_height) {
    return {Kind::cylinder, center, {radius, radius, half_height}};
}

Shape Shape::make_sphere(Vec3f center, float radius) {
    return {Kind::sphere, center, {radius, radius, radius}};
}

Shape Shape::make_ellipsoid(Vec3f center, Vec3f radii) { return {Kind::ellipsoid, center, radii}; }

float shape_top_z(const Shape& shape, float lx, float ly) {
    const float dx = lx - shape.center.x;
    const float dy = ly - shape.center.y;
    switch (shape.kind) {
        case Shape::Kind::box:
            if (std::abs(dx) <= shape.extent.x && std::abs(dy) <= shape.extent.y)
                return shape.center.z + shape.extent.z;
            return kNoSurface;
        case Shape::Kind::cylinder: {
            const float r = shape.extent.x;
            if (dx * dx + dy * dy <= r * r) return shape.center.z + shape.extent.z;
            return kNoSurface;
        }
        case Shape::Kind::sphere: {
            const float r = shape.extent.x;
            const float d2 = dx * dx + dy * dy;
            if (d2 > r * r) return kNoSurface;
            return shape.center.z + std::sqrt(std::max(0.f, r * r - d2));
        }
        case Shape::Kind::ellipsoid: {
            const float nx = dx / shape.extent.x;
            const float ny = dy / shape.extent.y;
            const float q = 1.f - nx * nx - ny * ny;
            if (q < 0.f) return kNoSurface;
            return shape.center.z + shape.extent.z * std::sqrt(q);
        }
    }
    return kNoSurface;
}

namespace {

// Unit-sphere ray intersection in a scaled frame shared by sphere/ellipsoid.
bool scaled_sphere_hit(const Vec3f& rel, const Vec3f& dir, const Vec3f& radii, float& t_hit) {
    const double ox = rel.x / radii.x, oy = rel.y / radii.y, oz = rel.z / radii.z;
    const double dx = dir.x / radii.x, dy = dir.y / radii.y, dz = dir.z / radii.z;
    const double a = dx * dx + dy * dy + dz * dz;
    const double b = 2.0 * (ox * dx + oy * dy + oz * dz);
    const double c = ox * ox + oy * oy + oz * oz - 1.0;
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0 || a == 0.0) return false;
    const double sq = std::sqrt(disc);
    double t = (-b - sq) / (2.0 * a);
    if (t < 0.0) t = (-b + sq) / (2.0 * a);
    if (t < 0.0) return false;
    t_hit = static_cast<float>(t);
    return true;
}

}  // namespace

bool shape_ray_hit(const Shape& shape, const Vec3f& origin, const Vec3f& dir, float& t_hit) {
    const Vec3f rel = origin - shape.center;
    switch (shape.kind) {
        case Shape::Kind::box: {
            // Slab test.
            double t0 = 0.0, t1 = std::numeric_limits<double>::infinity();
            const float o[3] = {rel.x, rel.y, rel.z};
            const float d[3] = {dir.x, dir.y, dir.z};
            const float h[3] = {shape.extent.x, shape.extent.y, shape.extent.z};
            for (int axis = 0; axis < 3; ++axis) {
                if (std::abs(d[axis]) < 1e-12f) {
                    if (std::abs(o[axis]) > h[axis]) return false;
                    continue;
                }
                double ta = (-h[axis] - o[axis]) / d[axis];
                double tb = (h[axis] - o[axis]) / d[axis];
                if (ta > tb) std::swap(ta, tb);
                t0 = std::max(t0, ta);
                t1 = std::min(t1, tb);
                if (t0 > t1) return false;
            }
            t_hit = static_cast<float>(t0);
            return true;
        }
        case Shape::Kind::cylinder: {
            const double r = shape.extent.x, hh = shape.extent.z;
            double best = std::numeric_limits<double>::infinity();
            const double a = double(dir.x) * dir.x + double(dir.y) * dir.y;
            if (a > 1e-12) {
                const double b = 2.0 * (double(rel.x) * dir.x + double(rel.y) * dir.y);
                const double c = double(rel.x) * rel.x + double(rel.y) * rel.y - r * r;
                const double disc = b * b - 4.0 * a * c;
                if (disc >= 0.0) {
                    const double sq = std::sqrt(disc);
                    for (double t : {(-b - sq) / (2 * a), (-b + sq) / (2 * a)}) {
                        if (t < 0.0 || t >= best) continue;
                        const double z = rel.z + t * dir.z;
                        if (std::abs(z) <= hh) best = t;
                    }
                }
            }
            if (std::abs(dir.z) > 1e-12f) {
                for (double cap : {hh, -hh}) {
                    const double t = (cap - rel.z) / dir.z;
                    if (t < 0.0 || t >= best) continue;
                    const double x = rel.x + t * dir.x, y = rel.y + t * dir.y;
                    if (x * x + y * y <= r * r) best = t;
                }
            }
            if (!std::isfinite(best)) return false;
            t_hit = static_cast<float>(best);
            return true;
        }
        case Shape::Kind::sphere:
        case Shape::Kind::ellipsoid:
            return scaled_sphere_hit(rel, dir, shape.extent, t_hit);
    }
    return false;
}

Bounds2 shape_footprint_bounds(const Shape& shape) {
    return {shape.center.x - shape.extent.x, shape.center.y - shape.extent.y,
            shape.center.x + shape.extent.x, shape.center.y + shape.extent.y};
}

}  // namespace topseg
