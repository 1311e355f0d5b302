#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>

#include "test_support.hpp"
#include "topseg/features.hpp"

using namespace topseg;

TEST_CASE("make_spec is deterministic and stays inside the patch") {
    const FeatureSpec a = make_spec(300, 64, 64, 11);
    const FeatureSpec b = make_spec(300, 64, 64, 11);
    REQUIRE(a.offsets.size() == 300);
    for (std::size_t i = 0; i < a.offsets.size(); ++i) {
        CHECK(a.offsets[i].ux == b.offsets[i].ux);
        CHECK(a.offsets[i].vy == b.offsets[i].vy);
        for (int v : {int(a.offsets[i].ux), int(a.offsets[i].uy), int(a.offsets[i].vx),
                      int(a.offsets[i].vy)}) {
            CHECK(v >= -32);
            CHECK(v <= 32);
        }
    }
    const FeatureSpec c = make_spec(300, 64, 64, 12);
    bool same = true;
    for (std::size_t i = 0; i < a.offsets.size() && same; ++i)
        same = a.offsets[i].ux == c.offsets[i].ux && a.offsets[i].uy == c.offsets[i].uy;
    CHECK_FALSE(same);

    CHECK(make_spec(1, 8, 8, 0).offsets.size() == 1);
    CHECK_THROWS_AS(make_spec(0, 8, 8, 0), std::invalid_argument);
    CHECK_THROWS_AS(make_spec(10, 0, 8, 0), std::invalid_argument);
}

TEST_CASE("responses are plain depth differences") {
    // 3x3 frame, hand-filled
    DepthFrame frame = test_support::make_frame(3, 3,
                                                {3.5f, 3.5f, 3.5f,
                                                 3.5f, 2.7f, 3.5f,
                                                 3.5f, 3.5f, 2.7f});
    SUBCASE("identical offsets cancel exactly") {
        const OffsetPair same{1, 1, 1, 1};
        CHECK(eval_feature(frame, 1, 1, same, 3.5f) == 0.f);
    }
    SUBCASE("hand-computed difference") {
        // u reads the center (2.7), v reads a floor pixel (3.5)
        const OffsetPair pair{0, 0, -1, 0};
        CHECK(eval_feature(frame, 1, 1, pair, 3.5f) == doctest::Approx(-0.8f));
    }
}

TEST_CASE("constant frames respond zero for every pair") {
    const DepthFrame flat(5, 5, 2.5f);
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const OffsetPair pair{std::int16_t(rng() % 7 - 3), std::int16_t(rng() % 7 - 3),
                              std::int16_t(rng() % 7 - 3), std::int16_t(rng() % 7 - 3)};
        // sentinel equal to the constant keeps borders flat too
        CHECK(eval_feature(flat, int(rng() % 5), int(rng() % 5), pair, 2.5f) == 0.f);
    }
}

TEST_CASE("out-of-frame reads use the sentinel and never fault") {
    DepthFrame frame = test_support::make_frame(2, 2, {1.f, 2.f, 3.f, 4.f});
    const OffsetPair far{100, 100, -100, -100};
    CHECK(eval_feature(frame, 0, 0, far, 3.5f) == 0.f);  // both reads hit the sentinel
    const OffsetPair half{100, 0, 0, 0};
    CHECK(eval_feature(frame, 0, 0, half, 3.5f) == doctest::Approx(3.5f - 1.f));
    // non-finite depths read as sentinel as well
    frame.at(1, 1) = std::numeric_limits<float>::quiet_NaN();
    const OffsetPair at_nan{1, 1, 0, 0};
    CHECK(eval_feature(frame, 0, 0, at_nan, 3.5f) == doctest::Approx(3.5f - 1.f));
}

TEST_CASE("responses are translation consistent away from borders") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<float> depth(1.f, 3.f);
    // a 5x5 pattern stamped at two offsets inside a large flat frame
    std::vector<float> pattern(25);
    for (auto& v : pattern) v = depth(rng);
    auto stamped = [&](int ox, int oy) {
        DepthFrame f(32, 32, 2.f);
        for (int y = 0; y < 5; ++y)
            for (int x = 0; x < 5; ++x) f.at(ox + x, oy + y) = pattern[y * 5 + x];
        return f;
    };
    const DepthFrame a = stamped(8, 9);
    const DepthFrame b = stamped(13, 15);  // shifted by (5, 6)
    for (int trial = 0; trial < 100; ++trial) {
        const OffsetPair pair{std::int16_t(rng() % 9 - 4), std::int16_t(rng() % 9 - 4),
                              std::int16_t(rng() % 9 - 4), std::int16_t(rng() % 9 - 4)};
        const float ra = eval_feature(a, 10, 11, pair, 3.5f);
        const float rb = eval_feature(b, 15, 17, pair, 3.5f);
        CHECK(ra == rb);
    }
}

TEST_CASE("adding a constant to all depths leaves responses unchanged") {
    // exactly representable values so the shift is lossless
    DepthFrame frame = test_support::make_frame(3, 3,
                                                {1.0f, 1.25f, 1.5f,
                                                 2.0f, 2.25f, 2.5f,
                                                 3.0f, 3.25f, 3.5f});
    DepthFrame shifted = frame;
    for (auto& v : shifted.depth) v += 0.5f;
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        const OffsetPair pair{std::int16_t(rng() % 3 - 1), std::int16_t(rng() % 3 - 1),
                              std::int16_t(rng() % 3 - 1), std::int16_t(rng() % 3 - 1)};
        // shift the sentinel alongside so border reads move with the frame
        CHECK(eval_feature(frame, 1, 1, pair, 3.0f) == eval_feature(shifted, 1, 1, pair, 3.5f));
    }
}

TEST_CASE("scaled offsets shrink with the center depth") {
    // depth 2 at the center halves the effective offsets
    DepthFrame frame(9, 9, 3.f);
    frame.at(4, 4) = 2.f;   // center
    frame.at(6, 4) = 1.0f;  // read by the unscaled offset
    frame.at(5, 4) = 1.5f;  // read by the halved offset
    const OffsetPair pair{2, 0, 0, 0};
    CHECK(eval_feature(frame, 4, 4, pair, 3.5f, false) == doctest::Approx(1.0f - 2.0f));
    CHECK(eval_feature(frame, 4, 4, pair, 3.5f, true) == doctest::Approx(1.5f - 2.0f));
}

TEST_CASE("pixel sampling honors quotas and exhausts small classes") {
    LabelFrame labels(20, 10, 0);
    // 10 pixels of class 1, the rest class 0
    for (int x = 0; x < 10; ++x) labels.at(x, 0) = 1;

    SUBCASE("quota zero yields nothing") {
        CHECK(sample_training_pixels(labels, 0, 1, 2).empty());
    }
    SUBCASE("small classes contribute every pixel") {
        const auto samples = sample_training_pixels(labels, 50, 1, 2);
        int ones = 0;
        for (const auto& s : samples) ones += s.label == 1;
        CHECK(ones == 10);
    }
    SUBCASE("large classes contribute exactly the quota, without replacement") {
        const auto samples = sample_training_pixels(labels, 20, 1, 2);
        std::set<std::pair<int, int>> seen;
        int zeros = 0, ones = 0;
        for (const auto& s : samples) {
            CHECK(labels.at(s.x, s.y) == s.label);
            CHECK(seen.emplace(s.x, s.y).second);  // unique pixels
            (s.label == 0 ? zeros : ones)++;
        }
        CHECK(zeros == 20);
        CHECK(ones == 10);
    }
    SUBCASE("deterministic under the seed") {
        const auto a = sample_training_pixels(labels, 5, 9, 2);
        const auto b = sample_training_pixels(labels, 5, 9, 2);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].x == b[i].x);
            CHECK(a[i].y == b[i].y);
        }
    }
}
