#pragma once

#include <cstdint>
#include <vector>

namespace topseg {

/// Dense top-view depth raster, meters below the camera. Row-major, NaN for
/// invalid measurements.
struct DepthFrame {
    int width = 0;
    int height = 0;
    std::vector<float> depth;

    DepthFrame() = default;
    DepthFrame(int w, int h, float fill = 0.f) : width(w), height(h), depth(std::size_t(w) * h, fill) {}

    float at(int x, int y) const { return depth[std::size_t(y) * width + x]; }
    float& at(int x, int y) { return depth[std::size_t(y) * width + x]; }
    bool contains(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
    std::size_t pixel_count() const { return std::size_t(width) * height; }
};

/// Per-pixel class ids aligned with a DepthFrame.
struct LabelFrame {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> labels;

    LabelFrame() = default;
    LabelFrame(int w, int h, std::uint8_t fill = 0) : width(w), height(h), labels(std::size_t(w) * h, fill) {}

    std::uint8_t at(int x, int y) const { return labels[std::size_t(y) * width + x]; }
    std::uint8_t& at(int x, int y) { return labels[std::size_t(y) * width + x]; }
    std::size_t pixel_count() const { return std::size_t(width) * height; }
};

}  // namespace topseg
