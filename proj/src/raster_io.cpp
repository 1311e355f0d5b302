#include "topseg/raster_io.hpp"

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "topseg/errors.hpp"

namespace topseg {

namespace {

void put_u32le(std::ostream& out, std::uint32_t v) {
    const unsigned char bytes[4] = {static_cast<unsigned char>(v & 0xff),
                                    static_cast<unsigned char>((v >> 8) & 0xff),
                                    static_cast<unsigned char>((v >> 16) & 0xff),
                                    static_cast<unsigned char>((v >> 24) & 0xff)};
    out.write(reinterpret_cast<const char*>(bytes), 4);
}

std::uint32_t get_u32le(std::istream& in, const std::string& path) {
    unsigned char bytes[4];
    if (!in.read(reinterpret_cast<char*>(bytes), 4)) throw IoError("truncated raster file: " + path);
    return std::uint32_t(bytes[0]) | (std::uint32_t(bytes[1]) << 8) |
           (std::uint32_t(bytes[2]) << 16) | (std::uint32_t(bytes[3]) << 24);
}

void put_f32le(std::ostream& out, float v) { put_u32le(out, std::bit_cast<std::uint32_t>(v)); }

float get_f32le(std::istream& in, const std::string& path) {
    return std::bit_cast<float>(get_u32le(in, path));
}

void check_magic(std::istream& in, const char* magic, const std::string& path) {
    char buf[4];
    if (!in.read(buf, 4) || std::memcmp(buf, magic, 4) != 0)
        throw IoError("bad magic in raster file (expected " + std::string(magic) + "): " + path);
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write file: " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path);
    return in;
}

}  // namespace

void write_depth(const std::string& path, const DepthFrame& frame) {
    auto out = open_out(path);
    out.write("DPTH", 4);
    put_u32le(out, static_cast<std::uint32_t>(frame.width));
    put_u32le(out, static_cast<std::uint32_t>(frame.height));
    for (float v : frame.depth) put_f32le(out, v);
    if (!out) throw IoError("write failed: " + path);
}

DepthFrame read_depth(const std::string& path) {
    auto in = open_in(path);
    check_magic(in, "DPTH", path);
    const std::uint32_t w = get_u32le(in, path);
    const std::uint32_t h = get_u32le(in, path);
    DepthFrame frame(static_cast<int>(w), static_cast<int>(h));
    for (auto& v : frame.depth) v = get_f32le(in, path);
    return frame;
}

void write_labels(const std::string& path, const LabelFrame& frame) {
    auto out = open_out(path);
    out.write("LBLS", 4);
    put_u32le(out, static_cast<std::uint32_t>(frame.width));
    put_u32le(out, static_cast<std::uint32_t>(frame.height));
    out.write(reinterpret_cast<const char*>(frame.labels.data()),
              static_cast<std::streamsize>(frame.labels.size()));
    if (!out) throw IoError("write failed: " + path);
}

LabelFrame read_labels(const std::string& path) {
    auto in = open_in(path);
    check_magic(in, "LBLS", path);
    const std::uint32_t w = get_u32le(in, path);
    const std::uint32_t h = get_u32le(in, path);
    LabelFrame frame(static_cast<int>(w), static_cast<int>(h));
    if (!in.read(reinterpret_cast<char*>(frame.labels.data()),
                 static_cast<std::streamsize>(frame.labels.size())))
        throw IoError("truncated raster file: " + path);
    return frame;
}

void write_manifest(const std::string& path, const std::vector<ManifestEntry>& entries) {
    auto out = open_out(path);
    for (const auto& e : entries) out << e.depth_path << ' ' << e.label_path << '\n';
    if (!out) throw IoError("write failed: " + path);
}

std::vector<ManifestEntry> read_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest: " + path);
    const std::filesystem::path base = std::filesystem::path(path).parent_path();
    std::vector<ManifestEntry> entries;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        ManifestEntry e;
        if (!(ls >> e.depth_path >> e.label_path)) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            throw IoError(path + ":" + std::to_string(line_no) + ": malformed manifest line");
        }
        auto resolve = [&](const std::string& p) {
            std::filesystem::path fp(p);
            return fp.is_absolute() ? fp.string() : (base / fp).string();
        };
        entries.push_back({resolve(e.depth_path), resolve(e.label_path)});
    }
    return entries;
}

}  // namespace topseg
