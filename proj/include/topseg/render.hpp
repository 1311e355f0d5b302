#pragma once

#include <cstdint>

#include "topseg/frame.hpp"
#include "topseg/scene.hpp"

namespace topseg {

enum class Projection : std::uint8_t { orthographic, pinhole };

/// Top-view camera over the scene extent. Orthographic covers the extent one
/// pixel per cell; pinhole sits centered above the extent looking straight
/// down with the given vertical field of view.
struct Camera {
    int width = 640;
    int height = 480;
    Projection projection = Projection::orthographic;
    float fov_y_deg = 45.f;
};

struct RenderResult {
    DepthFrame depth;
    LabelFrame labels;
};

/// Rasterizes the nearest surface per pixel: depth below the camera and the
/// class of the owning solid. Pixels covering no instance read the floor
/// (depth = camera height, background label). Deterministic, order
/// independent in the instance list.
RenderResult render(const SceneGraph& scene, const Camera& camera);

struct NoiseParams {
    float sigma = 0.15f;  // meters
    std::uint64_t seed = 0;
};

/// Adds per-pixel zero-mean Gaussian noise to the depth values and clamps to
/// (0, camera_height + 3*sigma]. Labels are not touched.
DepthFrame add_noise(const DepthFrame& frame, const NoiseParams& params, float camera_height = 3.5f);

}  // namespace topseg
