#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "test_support.hpp"
#include "topseg/raster_io.hpp"

namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string(TOPSEG_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string tiny_overrides() {
    return "--set width=64 --set height=48 --set pc=60 --set trees=2 --set depth=8"
           " --set frames_per_tree=8 --set pixels_per_class=8 --set threads=2 --set pose_library=" +
           test_support::repo_path("data/poses.txt");
}

}  // namespace

TEST_CASE("usage errors exit with code 1") {
    CHECK(run_cli("") == 1);
    CHECK(run_cli("frobnicate") == 1);
    CHECK(run_cli("synth --out /tmp/x") == 1);            // missing --count
    CHECK(run_cli("experiment nonsense --out /tmp/x") == 1);
    CHECK(run_cli("--help") == 0);
}

TEST_CASE("config problems exit with code 1, runtime failures with 2") {
    test_support::TempDir dir("cli_err");
    std::ofstream bad(dir.str() + "/bad.cfg");
    bad << "unknown_key = 5\n";
    bad.close();
    CHECK(run_cli("synth --count 1 --out " + dir.str() + " --config " + dir.str() + "/bad.cfg") == 1);
    CHECK(run_cli("synth --count 1 --out " + dir.str() + " --set nope=1") == 1);
    CHECK(run_cli("train --manifest " + dir.str() + "/missing.txt --out " + dir.str() + "/m.rdf " +
                  tiny_overrides()) == 2);
    CHECK(run_cli("predict --model " + dir.str() + "/no.rdf --depth " + dir.str() +
                  "/no.dpth --out " + dir.str() + "/out.lbls") == 2);
}

TEST_CASE("synth, train and predict chain deterministically") {
    test_support::TempDir dir("cli_chain");
    const std::string overrides = tiny_overrides();

    REQUIRE(run_cli("synth --count 8 --out " + dir.str() + "/a " + overrides) == 0);
    REQUIRE(run_cli("synth --count 8 --out " + dir.str() + "/b " + overrides) == 0);
    CHECK(file_bytes(dir.str() + "/a/frame_000003.dpth") ==
          file_bytes(dir.str() + "/b/frame_000003.dpth"));
    CHECK(file_bytes(dir.str() + "/a/frame_000003.lbls") ==
          file_bytes(dir.str() + "/b/frame_000003.lbls"));

    REQUIRE(run_cli("train --manifest " + dir.str() + "/a/manifest.txt --out " + dir.str() +
                    "/m1.rdf " + overrides) == 0);
    REQUIRE(run_cli("train --manifest " + dir.str() + "/a/manifest.txt --out " + dir.str() +
                    "/m2.rdf " + overrides) == 0);
    CHECK(file_bytes(dir.str() + "/m1.rdf") == file_bytes(dir.str() + "/m2.rdf"));

    REQUIRE(run_cli("predict --model " + dir.str() + "/m1.rdf --depth " + dir.str() +
                    "/a/frame_000001.dpth --out " + dir.str() + "/p1.lbls --posteriors " +
                    dir.str() + "/post.txt " + overrides) == 0);
    REQUIRE(run_cli("predict --model " + dir.str() + "/m1.rdf --depth " + dir.str() +
                    "/a/frame_000001.dpth --out " + dir.str() + "/p2.lbls " + overrides) == 0);
    CHECK(file_bytes(dir.str() + "/p1.lbls") == file_bytes(dir.str() + "/p2.lbls"));

    // posterior dump rows sum to one
    std::ifstream post(dir.str() + "/post.txt");
    int w, h, classes;
    post >> w >> h >> classes;
    CHECK(w == 64);
    CHECK(classes == 11);
    for (int i = 0; i < 32; ++i) {
        double sum = 0.0, p;
        for (int c = 0; c < classes; ++c) {
            post >> p;
            sum += p;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-5));
    }

    // a zero-weight smoothing pass must reproduce the forest labels
    REQUIRE(run_cli("predict --model " + dir.str() + "/m1.rdf --depth " + dir.str() +
                    "/a/frame_000001.dpth --out " + dir.str() + "/crf0.lbls --crf --lambda 0 " +
                    overrides) == 0);
    CHECK(file_bytes(dir.str() + "/crf0.lbls") == file_bytes(dir.str() + "/p1.lbls"));

    // effective config is echoed for provenance
    CHECK(std::ifstream(dir.str() + "/a/config.effective.cfg").good());
    CHECK(std::ifstream(dir.str() + "/m1.rdf.cfg").good());

    // eval emits a per-class table
    REQUIRE(run_cli("eval --model " + dir.str() + "/m1.rdf --manifest " + dir.str() +
                    "/a/manifest.txt --out " + dir.str() + "/report.tsv " + overrides) == 0);
    std::ifstream rep(dir.str() + "/report.tsv");
    std::string header;
    std::getline(rep, header);
    CHECK(header.find("recall") != std::string::npos);
}

TEST_CASE("the experiment command writes plot-ready tables") {
    test_support::TempDir dir("cli_experiment");
    const std::string overrides = tiny_overrides() +
                                  " --set dataset_frames=6 --set test_frames=3 --set trees=1"
                                  " --set depth=6 --set modeling_fs=4,8";
    REQUIRE(run_cli("experiment modeling --out " + dir.str() + "/m --emit-plot-data " +
                    overrides) == 0);

    std::ifstream table(dir.str() + "/m/modeling.tsv");
    REQUIRE(table.good());
    std::string line;
    std::getline(table, line);
    CHECK(line == "F\tcondition\tmAR\tmAP");
    int rows = 0, modeled = 0, baseline = 0;
    while (std::getline(table, line)) {
        ++rows;
        if (line.find("\tmodeled\t") != std::string::npos) ++modeled;
        if (line.find("non-modeled") != std::string::npos) ++baseline;
    }
    CHECK(rows == 4);  // two budgets, both conditions each
    CHECK(modeled == 2);
    CHECK(baseline == 2);
    CHECK(std::ifstream(dir.str() + "/m/modeling_plot.tsv").good());
    CHECK(std::ifstream(dir.str() + "/m/config.effective.cfg").good());
}
