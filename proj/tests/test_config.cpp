#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "test_support.hpp"
#include "topseg/config.hpp"
#include "topseg/errors.hpp"

using namespace topseg;

TEST_CASE("defaults dump and reload to the identical config") {
    const PipelineConfig config;
    const PipelineConfig reloaded = parse_config_text(dump_config(config), "mem");
    CHECK(reloaded == config);
}

TEST_CASE("a modified config survives the round trip") {
    PipelineConfig config;
    config.seed = 123456789012345ull;
    config.sigma = 0.275f;
    config.split_kind = SplitKind::axis_aligned;
    config.projection = Projection::pinhole;
    config.mix_plant = {0, 3};
    config.scaled_offsets = true;
    config.pose_library = "somewhere/else.txt";
    config.min_info_gain = 3.25e-5f;
    const PipelineConfig reloaded = parse_config_text(dump_config(config), "mem");
    CHECK(reloaded == config);
}

TEST_CASE("unknown keys are rejected with the offending name") {
    CHECK_THROWS_AS(parse_config_text("no_such_key = 3\n", "mem"), ConfigError);
    try {
        parse_config_text("theta_prime = 0.2\nwat = 1\n", "mem");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("wat") != std::string::npos);
        CHECK(std::string(e.what()).find("mem:2") != std::string::npos);
    }
}

TEST_CASE("values are validated per key") {
    CHECK_THROWS_AS(parse_config_text("width = abc\n", "mem"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("sigma = 0.1x\n", "mem"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("mix_table = 3\n", "mem"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("mix_table = 4:2\n", "mem"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("split_kind = diagonal\n", "mem"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("projection = fisheye\n", "mem"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("scaled_offsets = maybe\n", "mem"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("theta_prime\n", "mem"), ConfigError);
}

TEST_CASE("comments, blanks and spacing are tolerated") {
    const PipelineConfig config = parse_config_text(
        "# a comment\n"
        "\n"
        "  theta_prime =   0.25   # trailing note\n"
        "trees= 7\n",
        "mem");
    CHECK(config.theta_prime == doctest::Approx(0.25f));
    CHECK(config.trees == 7);
}

TEST_CASE("overrides apply on top of file values") {
    PipelineConfig config = parse_config_text("trees = 7\n", "mem");
    apply_config_override(config, "trees=9");
    apply_config_override(config, "lambda = 4.5");
    CHECK(config.trees == 9);
    CHECK(config.lambda == doctest::Approx(4.5f));
    CHECK_THROWS_AS(apply_config_override(config, "nope=1"), ConfigError);
    CHECK_THROWS_AS(apply_config_override(config, "trees"), ConfigError);
}

TEST_CASE("list keys parse into numeric vectors") {
    const auto floats = parse_float_list("0, 0.05,0.15 , 1.0");
    REQUIRE(floats.size() == 4);
    CHECK(floats[1] == doctest::Approx(0.05f));
    const auto ints = parse_int_list("75,300");
    REQUIRE(ints.size() == 2);
    CHECK(ints[0] == 75);
    CHECK(ints[1] == 300);
}

TEST_CASE("derived sub-configs mirror the pipeline values") {
    PipelineConfig config;
    config.theta_prime = 0.22f;
    config.rel_free = 1.f;
    config.rel_adjacent = config.rel_partial = config.rel_stacked = config.rel_touch = 0.f;
    config.depth = 11;
    config.trees = 4;
    config.width = 111;

    const InteractionParams params = interaction_params_from(config);
    CHECK(params.theta_prime == doctest::Approx(0.22f));
    CHECK(params.relationship_weights[0] == doctest::Approx(1.f));

    const TrainConfig train = train_config_from(config);
    CHECK(train.max_depth == 11);
    CHECK(train.tree_count == 4);

    CHECK(camera_from(config).width == 111);
    CHECK(scene_model_from(config).camera_height == config.camera_height);
}

TEST_CASE("the shipped example configs load") {
    const PipelineConfig paper = load_config(test_support::repo_path("configs/paper.cfg"));
    CHECK(paper.width == 640);
    CHECK(paper.depth == 19);
    const PipelineConfig desk = load_config(test_support::repo_path("configs/desk.cfg"));
    CHECK(desk.width == 160);
    CHECK(desk.height == 120);
    CHECK(desk.trees == 3);
    CHECK(desk.depth == 14);
    CHECK(desk.frames_per_tree == 200);
}
