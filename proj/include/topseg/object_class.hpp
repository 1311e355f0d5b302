#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace topseg {

/// Pixel / instance classes. Ids 0-5 are the human body parts, 6-9 the
/// furniture classes, 10 the floor. The body-part ids are a contiguous block
/// so part-of-human checks are range tests.
enum class ObjectClass : std::uint8_t {
    head = 0,
    body = 1,
    upper_arm = 2,
    lower_arm = 3,
    hand = 4,
    legs = 5,
    chair = 6,
    plant = 7,
    storage = 8,
    table = 9,
    background = 10,
};

inline constexpr int kClassCount = 11;
inline constexpr int kForegroundClassCount = 10;
inline constexpr std::uint8_t kBackgroundId = 10;

inline constexpr bool is_body_part(ObjectClass c) {
    return static_cast<int>(c) <= static_cast<int>(ObjectClass::legs);
}

inline constexpr bool is_furniture(ObjectClass c) {
    return static_cast<int>(c) >= static_cast<int>(ObjectClass::chair) &&
           static_cast<int>(c) <= static_cast<int>(ObjectClass::table);
}

inline constexpr std::array<std::string_view, kClassCount> kClassNames = {
    "head", "body", "upper-arm", "lower-arm", "hand", "legs",
    "chair", "plant", "storage", "table", "background",
};

inline constexpr std::string_view class_name(ObjectClass c) {
    return kClassNames[static_cast<int>(c)];
}

}  // namespace topseg
