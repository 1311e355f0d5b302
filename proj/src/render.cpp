#include "topseg/render.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "topseg/rng.hpp"

namespace topseg {

namespace {

struct Hit {
    float z = -1.f;  // world height of the surface; floor is 0
    std::uint8_t label = kBackgroundId;
};

// Highest surface of one instance pierced by the vertical line through
// world-plane point (wx, wy); false if the line misses every solid.
bool instance_top(const ObjectInstance& inst, float wx, float wy, Hit& hit) {
    const float c = std::cos(inst.orientation), s = std::sin(inst.orientation);
    const float dx = wx - inst.position.x, dy = wy - inst.position.y;
    const float lx = dx * c + dy * s;
    const float ly = -dx * s + dy * c;
    float best = kNoSurface;
    std::uint8_t label = kBackgroundId;
    for (const auto& shape : inst.shapes) {
        const float top = shape_top_z(shape.geom, lx, ly);
        if (top > best || (top == best && static_cast<std::uint8_t>(shape.label) < label)) {
            best = top;
            label = static_cast<std::uint8_t>(shape.label);
        }
    }
    if (best == kNoSurface) return false;
    hit.z = inst.base_z + best;
    hit.label = label;
    return true;
}

// First solid of one instance along a world ray; the ray is rotated into the
// instance frame (rotation about z maps rays to rays).
bool instance_ray(const ObjectInstance& inst, Vec3f origin, Vec3f dir, Hit& hit) {
    const float c = std::cos(inst.orientation), s = std::sin(inst.orientation);
    auto to_local = [&](float x, float y) -> Vec2f { return {x * c + y * s, -x * s + y * c}; };
    const Vec2f o2 = to_local(origin.x - inst.position.x, origin.y - inst.position.y);
    const Vec2f d2 = to_local(dir.x, dir.y);
    const Vec3f lo{o2.x, o2.y, origin.z - inst.base_z};
    const Vec3f ld{d2.x, d2.y, dir.z};
    float best_t = std::numeric_limits<float>::infinity();
    std::uint8_t label = kBackgroundId;
    for (const auto& shape : inst.shapes) {
        float t;
        if (!shape_ray_hit(shape.geom, lo, ld, t)) continue;
        if (t < best_t || (t == best_t && static_cast<std::uint8_t>(shape.label) < label)) {
            best_t = t;
            label = static_cast<std::uint8_t>(shape.label);
        }
    }
    if (!std::isfinite(best_t)) return false;
    hit.z = origin.z + best_t * dir.z;
    hit.label = label;
    return true;
}

struct WorldBounds {
    float min_x, min_y, max_x, max_y, max_z;
};

WorldBounds instance_world_bounds(const ObjectInstance& inst) {
    Bounds2 b = shape_footprint_bounds(inst.shapes.front().geom);
    float top = inst.shapes.front().geom.center.z + inst.shapes.front().geom.extent.z;
    for (std::size_t i = 1; i < inst.shapes.size(); ++i) {
        const Bounds2 s = shape_footprint_bounds(inst.shapes[i].geom);
        b.min_x = std::min(b.min_x, s.min_x);
        b.min_y = std::min(b.min_y, s.min_y);
        b.max_x = std::max(b.max_x, s.max_x);
        b.max_y = std::max(b.max_y, s.max_y);
        top = std::max(top, inst.shapes[i].geom.center.z + inst.shapes[i].geom.extent.z);
    }
    // Rotated local box -> conservative world AABB.
    const float c = std::cos(inst.orientation), s = std::sin(inst.orientation);
    const float cx = 0.5f * (b.min_x + b.max_x), cy = 0.5f * (b.min_y + b.max_y);
    const float hx = 0.5f * (b.max_x - b.min_x), hy = 0.5f * (b.max_y - b.min_y);
    const float rx = std::abs(c) * hx + std::abs(s) * hy;
    const float ry = std::abs(s) * hx + std::abs(c) * hy;
    const float wx = inst.position.x + cx * c - cy * s;
    const float wy = inst.position.y + cx * s + cy * c;
    return {wx - rx, wy - ry, wx + rx, wy + ry, inst.base_z + top};
}

}  // namespace

RenderResult render(const SceneGraph& scene, const Camera& camera) {
    if (camera.width <= 0 || camera.height <= 0)
        throw std::invalid_argument("camera dimensions must be positive");
    if (!(scene.extent_w > 0.f) || !(scene.extent_h > 0.f))
        throw std::invalid_argument("scene extent must be positive");
    if (camera.projection == Projection::pinhole &&
        !(camera.fov_y_deg > 0.f && camera.fov_y_deg < 180.f))
        throw std::invalid_argument("pinhole field of view must lie in (0, 180) degrees");

    const int w = camera.width, h = camera.height;
    RenderResult out;
    out.depth = DepthFrame(w, h, scene.camera_height);
    out.labels = LabelFrame(w, h, kBackgroundId);

    const float sx = scene.extent_w / w;  // meters per pixel
    const float sy = scene.extent_h / h;

    std::vector<float> top_z(std::size_t(w) * h, 0.f);

    if (camera.projection == Projection::orthographic) {
        for (const auto& inst : scene.instances) {
            if (inst.shapes.empty()) continue;
            const WorldBounds wb = instance_world_bounds(inst);
            const int x0 = std::max(0, int(std::floor(wb.min_x / sx)));
            const int x1 = std::min(w - 1, int(std::floor(wb.max_x / sx)));
            const int y0 = std::max(0, int(std::floor(wb.min_y / sy)));
            const int y1 = std::min(h - 1, int(std::floor(wb.max_y / sy)));
            for (int py = y0; py <= y1; ++py) {
                const float wy = (py + 0.5f) * sy;
                for (int px = x0; px <= x1; ++px) {
                    const float wx = (px + 0.5f) * sx;
                    Hit hit;
                    if (!instance_top(inst, wx, wy, hit)) continue;
                    const std::size_t idx = std::size_t(py) * w + px;
                    if (hit.z > top_z[idx] ||
                        (hit.z == top_z[idx] && hit.label < out.labels.labels[idx])) {
                        top_z[idx] = hit.z;
                        out.labels.labels[idx] = hit.label;
                    }
                }
            }
        }
    } else {
        const Vec3f eye{0.5f * scene.extent_w, 0.5f * scene.extent_h, scene.camera_height};
        const float focal =
            0.5f * h / std::tan(0.5f * camera.fov_y_deg * std::numbers::pi_v<float> / 180.f);
        const float cx = 0.5f * w, cy = 0.5f * h;
        for (const auto& inst : scene.instances) {
            if (inst.shapes.empty()) continue;
            const WorldBounds wb = instance_world_bounds(inst);
            // Project the instance box corners at ground and top height; the
            // pixel hull of those eight points bounds every solid surface.
            float px0 = float(w), px1 = 0.f, py0 = float(h), py1 = 0.f;
            for (float bx : {wb.min_x, wb.max_x})
                for (float by : {wb.min_y, wb.max_y})
                    for (float bz : {0.f, wb.max_z}) {
                        const float denom = std::max(0.05f, scene.camera_height - bz);
                        const float u = cx + focal * (bx - eye.x) / denom;
                        const float v = cy + focal * (by - eye.y) / denom;
                        px0 = std::min(px0, u);
                        px1 = std::max(px1, u);
                        py0 = std::min(py0, v);
                        py1 = std::max(py1, v);
                    }
            const int x0 = std::max(0, int(std::floor(px0 - 1.f)));
            const int x1 = std::min(w - 1, int(std::ceil(px1 + 1.f)));
            const int y0 = std::max(0, int(std::floor(py0 - 1.f)));
            const int y1 = std::min(h - 1, int(std::ceil(py1 + 1.f)));
            for (int py = y0; py <= y1; ++py) {
                for (int px = x0; px <= x1; ++px) {
                    Vec3f dir{(px + 0.5f - cx) / focal, (py + 0.5f - cy) / focal, -1.f};
                    const float inv = 1.f / std::sqrt(dir.x * dir.x + dir.y * dir.y + 1.f);
                    dir = dir * inv;
                    Hit hit;
                    if (!instance_ray(inst, eye, dir, hit)) continue;
                    const std::size_t idx = std::size_t(py) * w + px;
                    if (hit.z > top_z[idx] ||
                        (hit.z == top_z[idx] && hit.label < out.labels.labels[idx])) {
                        top_z[idx] = hit.z;
                        out.labels.labels[idx] = hit.label;
                    }
                }
            }
        }
    }

    for (std::size_t i = 0; i < top_z.size(); ++i)
        out.depth.depth[i] = scene.camera_height - top_z[i];
    return out;
}

DepthFrame add_noise(const DepthFrame& frame, const NoiseParams& params, float camera_height) {
    if (params.sigma < 0.f) throw std::invalid_argument("noise sigma must be non-negative");
    if (params.sigma == 0.f) return frame;
    DepthFrame out = frame;
    Rng rng = make_rng(params.seed);
    std::normal_distribution<float> gauss(0.f, params.sigma);
    const float hi = camera_height + 3.f * params.sigma;
    for (auto& v : out.depth) {
        if (!std::isfinite(v)) continue;
        v = std::clamp(v + gauss(rng), 1e-6f, hi);
    }
    return out;
}

}  // namespace topseg
