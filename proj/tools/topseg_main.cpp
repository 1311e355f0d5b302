// Command-line front end: dataset synthesis, forest training, prediction,
// evaluation, and the ablation experiments.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "topseg/config.hpp"
#include "topseg/crf.hpp"
#include "topseg/errors.hpp"
#include "topseg/experiments.hpp"
#include "topseg/pipeline.hpp"

namespace fs = std::filesystem;
using namespace topseg;

namespace {

struct CommonOpts {
    std::string config_path;
    std::vector<std::string> overrides;
};

PipelineConfig resolve_config(const CommonOpts& opts) {
    PipelineConfig config;
    if (!opts.config_path.empty()) config = load_config(opts.config_path);
    for (const auto& assignment : opts.overrides) apply_config_override(config, assignment);
    return config;
}

void echo_config(const PipelineConfig& config, const fs::path& where) {
    std::ofstream out(where);
    if (!out) throw IoError("cannot write config echo: " + where.string());
    out << dump_config(config);
}

PoseLibrary load_poses(const PipelineConfig& config) { return PoseLibrary::load(config.pose_library); }

double ms_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "config file (flat key = value)");
    cmd->add_option("--set", opts.overrides, "override a config key, e.g. --set seed=7")
        ->type_name("KEY=VALUE");
}

void write_report_table(const std::string& path, const MetricsReport& rep) {
    std::vector<std::vector<std::string>> rows;
    auto fmt = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.4f", v);
        return std::string(buf);
    };
    for (int c = 0; c < int(rep.per_class.size()); ++c) {
        const auto& m = rep.per_class[c];
        rows.push_back({std::string(kClassNames[c]), fmt(m.recall), fmt(m.precision), fmt(m.f1),
                        m.present ? "yes" : "no"});
    }
    rows.push_back({"macro-mAR", fmt(rep.mean_recall), "", "", ""});
    rows.push_back({"macro-mAP", "", fmt(rep.mean_precision), "", ""});
    rows.push_back({"macro-meanF1", "", "", fmt(rep.mean_f1), ""});
    write_table(path, {"class", "recall", "precision", "f1", "present"}, rows);
}

int run_synth(const CommonOpts& common, int count, const std::string& out_dir,
              const std::string& style) {
    const PipelineConfig config = resolve_config(common);
    const PoseLibrary poses = load_poses(config);
    SynthesisRequest req;
    req.count = count;
    req.out_dir = out_dir;
    req.style = style == "single" ? SceneStyle::single_object : SceneStyle::modeled;
    req.sigma = config.sigma;
    const std::string manifest = synthesize_dataset(config, poses, req);
    echo_config(config, fs::path(out_dir) / "config.effective.cfg");
    std::cout << "wrote " << count << " frame pairs, manifest: " << manifest << "\n";
    return 0;
}

int run_train(const CommonOpts& common, const std::string& manifest, const std::string& model_out) {
    const PipelineConfig config = resolve_config(common);
    const Forest forest = train_from_manifest(config, manifest);
    save_forest(model_out, forest);
    echo_config(config, model_out + ".cfg");
    for (std::size_t t = 0; t < forest.stats.size(); ++t) {
        const auto& s = forest.stats[t];
        std::cout << "tree " << t << ": samples " << s.sample_count << ", nodes " << s.node_count
                  << ", leaves " << s.leaf_count << ", max depth " << s.max_depth << "\n";
    }
    std::cout << "model written: " << model_out << "\n";
    return 0;
}

int run_predict(const CommonOpts& common, const std::string& model_path,
                const std::string& depth_path, const std::string& out_path, bool use_crf,
                float lambda_override, bool timings, const std::string& posterior_path) {
    const PipelineConfig config = resolve_config(common);
    const float lambda = lambda_override >= 0.f ? lambda_override : config.lambda;

    auto t0 = std::chrono::steady_clock::now();
    const Forest forest = load_forest(model_path, config.camera_height);
    const DepthFrame depth = read_depth(depth_path);
    const double load_ms = ms_since(t0);

    t0 = std::chrono::steady_clock::now();
    const PosteriorVolume posteriors = predict(forest, depth, config.threads);
    LabelFrame labels = argmax_labels(posteriors);
    const double forest_ms = ms_since(t0);

    double crf_ms = 0.0;
    if (use_crf) {
        t0 = std::chrono::steady_clock::now();
        const CrfProblem problem =
            problem_from_posteriors(posteriors, lambda, config.neighborhood);
        labels = solve(problem, std::move(labels), config.max_sweeps).labels;
        crf_ms = ms_since(t0);
    }
    write_labels(out_path, labels);

    if (!posterior_path.empty()) {
        std::ofstream out(posterior_path);
        if (!out) throw IoError("cannot write posteriors: " + posterior_path);
        out << posteriors.width << ' ' << posteriors.height << ' ' << posteriors.class_count << '\n';
        out.precision(6);
        for (int y = 0; y < posteriors.height; ++y)
            for (int x = 0; x < posteriors.width; ++x) {
                const float* p = posteriors.at(x, y);
                for (int c = 0; c < posteriors.class_count; ++c) out << (c ? " " : "") << p[c];
                out << '\n';
            }
    }
    if (timings)
        std::cout << "load ms " << load_ms << ", forest ms " << forest_ms << ", crf ms " << crf_ms
                  << "\n";
    std::cout << "labels written: " << out_path << "\n";
    return 0;
}

int run_eval(const CommonOpts& common, const std::string& model_path, const std::string& manifest,
             const std::string& out_path, bool use_crf, float lambda_override) {
    const PipelineConfig config = resolve_config(common);
    const Forest forest = load_forest(model_path, config.camera_height);
    EvalOptions opts;
    opts.use_crf = use_crf;
    opts.lambda = lambda_override >= 0.f ? lambda_override : config.lambda;
    opts.neighborhood = config.neighborhood;
    opts.max_sweeps = config.max_sweeps;
    opts.threads = config.threads;
    const ConfusionMatrix cm = evaluate_forest(forest, read_manifest(manifest), opts);
    const MetricsReport rep = report(cm, kBackgroundId);
    write_report_table(out_path, rep);
    echo_config(config, out_path + ".cfg");
    std::cout << "mAR " << rep.mean_recall << ", mAP " << rep.mean_precision << ", mean F1 "
              << rep.mean_f1 << "\n";
    std::cout << "report written: " << out_path << "\n";
    return 0;
}

int run_experiment(const CommonOpts& common, const std::string& name, const std::string& out_dir,
                   bool emit_plot_data) {
    if (name != "noise" && name != "split" && name != "modeling") {
        std::cerr << "unknown experiment '" << name << "'; valid names: noise, split, modeling\n";
        return 1;
    }
    const PipelineConfig config = resolve_config(common);
    const PoseLibrary poses = load_poses(config);
    fs::create_directories(out_dir);
    echo_config(config, fs::path(out_dir) / "config.effective.cfg");
    if (name == "noise") {
        run_noise_sweep(config, poses, parse_float_list(config.noise_sigmas), out_dir,
                        emit_plot_data);
    } else if (name == "split") {
        run_split_comparison(config, poses, parse_int_list(config.split_pcs), out_dir,
                             emit_plot_data);
    } else {
        run_modeling_comparison(config, poses, parse_int_list(config.modeling_fs), out_dir,
                                emit_plot_data);
    }
    std::cout << "experiment tables written under " << out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"top-view depth segmentation pipeline"};
    app.require_subcommand(1);

    CommonOpts synth_common, train_common, predict_common, eval_common, exp_common;

    auto* synth = app.add_subcommand("synth", "render a synthetic dataset");
    int synth_count = 0;
    std::string synth_out, synth_style = "modeled";
    add_common(synth, synth_common);
    synth->add_option("--count", synth_count, "number of frames")->required();
    synth->add_option("--out", synth_out, "output directory")->required();
    synth->add_option("--style", synth_style, "modeled | single")
        ->check(CLI::IsMember({"modeled", "single"}));

    auto* train = app.add_subcommand("train", "train a decision forest");
    std::string train_manifest, train_model;
    add_common(train, train_common);
    train->add_option("--manifest", train_manifest, "training manifest")->required();
    train->add_option("--out", train_model, "model file to write")->required();

    auto* predict_cmd = app.add_subcommand("predict", "label one depth raster");
    std::string pr_model, pr_depth, pr_out, pr_posteriors;
    bool pr_crf = false, pr_timings = false;
    float pr_lambda = -1.f;
    add_common(predict_cmd, predict_common);
    predict_cmd->add_option("--model", pr_model, "model file")->required();
    predict_cmd->add_option("--depth", pr_depth, "input depth raster")->required();
    predict_cmd->add_option("--out", pr_out, "output label raster")->required();
    predict_cmd->add_flag("--crf", pr_crf, "smooth with the pairwise model");
    predict_cmd->add_option("--lambda", pr_lambda, "Potts weight override");
    predict_cmd->add_flag("--timings", pr_timings, "print per-stage milliseconds");
    predict_cmd->add_option("--posteriors", pr_posteriors, "dump per-pixel posteriors (text)");

    auto* eval_cmd = app.add_subcommand("eval", "evaluate a model on a labeled split");
    std::string ev_model, ev_manifest, ev_out;
    bool ev_crf = false;
    float ev_lambda = -1.f;
    add_common(eval_cmd, eval_common);
    eval_cmd->add_option("--model", ev_model, "model file")->required();
    eval_cmd->add_option("--manifest", ev_manifest, "test manifest")->required();
    eval_cmd->add_option("--out", ev_out, "report TSV to write")->required();
    eval_cmd->add_flag("--crf", ev_crf, "smooth with the pairwise model");
    eval_cmd->add_option("--lambda", ev_lambda, "Potts weight override");

    auto* exp = app.add_subcommand("experiment", "run a named ablation experiment");
    std::string exp_name, exp_out;
    bool exp_plot = false;
    add_common(exp, exp_common);
    exp->add_option("name", exp_name, "noise | split | modeling")->required();
    exp->add_option("--out", exp_out, "output directory")->required();
    exp->add_flag("--emit-plot-data", exp_plot, "also write (x, y, series) triples");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (synth->parsed()) return run_synth(synth_common, synth_count, synth_out, synth_style);
        if (train->parsed()) return run_train(train_common, train_manifest, train_model);
        if (predict_cmd->parsed())
            return run_predict(predict_common, pr_model, pr_depth, pr_out, pr_crf, pr_lambda,
                               pr_timings, pr_posteriors);
        if (eval_cmd->parsed())
            return run_eval(eval_common, ev_model, ev_manifest, ev_out, ev_crf, ev_lambda);
        if (exp->parsed()) return run_experiment(exp_common, exp_name, exp_out, exp_plot);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
