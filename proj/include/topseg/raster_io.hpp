#pragma once

#include <string>
#include <utility>
#include <vector>

#include "topseg/frame.hpp"

namespace topseg {

// Depth raster file: magic "DPTH", little-endian u32 width, u32 height, then
// width*height little-endian f32. Label raster: magic "LBLS", u32 width,
// u32 height, then width*height bytes.

void write_depth(const std::string& path, const DepthFrame& frame);
DepthFrame read_depth(const std::string& path);

void write_labels(const std::string& path, const LabelFrame& frame);
LabelFrame read_labels(const std::string& path);

struct ManifestEntry {
    std::string depth_path;
    std::string label_path;
};

/// Dataset manifest: one "<depth-path> <label-path>" pair per line. Relative
/// paths are resolved against the manifest's directory on read.
void write_manifest(const std::string& path, const std::vector<ManifestEntry>& entries);
std::vector<ManifestEntry> read_manifest(const std::string& path);

}  // namespace topseg
