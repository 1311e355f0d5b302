#pragma once

#include <cstdint>
#include <random>

namespace topseg {

/// splitmix64 step; used to derive independent stream seeds from one base seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Seed for the i-th item of a named stream (scene 7 of "train", tree 2, ...).
/// Streams with distinct tags never collide for practical purposes.
inline std::uint64_t stream_seed(std::uint64_t base, std::uint64_t stream_tag, std::uint64_t index) {
    return splitmix64(splitmix64(base ^ stream_tag) + index);
}

// Stream tags for the pipeline's independent random streams.
namespace stream {
inline constexpr std::uint64_t scene_train = 0x7363656e5f747231ull;
inline constexpr std::uint64_t scene_test = 0x7363656e5f747374ull;
inline constexpr std::uint64_t scene_val = 0x7363656e5f76616cull;
inline constexpr std::uint64_t noise = 0x6e6f697365000000ull;
inline constexpr std::uint64_t tree = 0x7472656500000000ull;
inline constexpr std::uint64_t feature_spec = 0x66737065'63000000ull;
inline constexpr std::uint64_t pixel_sample = 0x7078736d'70000000ull;
}  // namespace stream

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

}  // namespace topseg
