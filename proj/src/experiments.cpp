#include "topseg/experiments.hpp"

#include <array>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "topseg/errors.hpp"
#include "topseg/parallel.hpp"

namespace topseg {

namespace fs = std::filesystem;

MetricPoint metric_point(const MetricsReport& report) {
    return {report.mean_recall, report.mean_precision, report.mean_f1};
}

void write_table(const std::string& path, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write table: " + path);
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "\t" : "") << header[i];
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "\t" : "") << row[i];
        out << '\n';
    }
}

namespace {

std::string fmt(double v) {
    std::ostringstream out;
    out.precision(4);
    out << std::fixed << v;
    return out.str();
}

std::vector<ManifestEntry> make_test_split(const PipelineConfig& config, const PoseLibrary& poses,
                                           const std::string& work_dir) {
    SynthesisRequest req;
    req.count = config.test_frames;
    req.out_dir = (fs::path(work_dir) / "test").string();
    req.style = SceneStyle::modeled;
    req.scene_stream = stream::scene_test;
    req.sigma = config.sigma;
    return read_manifest(synthesize_dataset(config, poses, req));
}

Forest train_on(const PipelineConfig& config, const std::string& manifest_path) {
    return train_from_manifest(config, manifest_path);
}

MetricPoint eval_point(const Forest& forest, const std::vector<ManifestEntry>& test,
                       const PipelineConfig& config) {
    EvalOptions opts;
    opts.threads = config.threads;
    const ConfusionMatrix cm = evaluate_forest(forest, test, opts);
    return metric_point(report(cm, kBackgroundId));
}

void write_plot_triples(const std::string& path,
                        const std::vector<std::array<std::string, 3>>& triples) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(triples.size());
    for (const auto& t : triples) rows.push_back({t[0], t[1], t[2]});
    write_table(path, {"x", "y", "series"}, rows);
}

}  // namespace

std::vector<NoiseSweepRow> run_noise_sweep(const PipelineConfig& config, const PoseLibrary& poses,
                                           const std::vector<float>& sigmas,
                                           const std::string& work_dir, bool emit_plot_data) {
    const auto test = make_test_split(config, poses, work_dir);

    std::vector<NoiseSweepRow> rows;
    for (std::size_t i = 0; i < sigmas.size(); ++i) {
        SynthesisRequest req;
        req.count = config.dataset_frames;
        req.out_dir = (fs::path(work_dir) / ("train_noise_" + std::to_string(i))).string();
        req.scene_stream = stream::scene_train;  // same scenes for every sigma
        req.sigma = sigmas[i];
        const std::string manifest = synthesize_dataset(config, poses, req);
        const Forest forest = train_on(config, manifest);
        rows.push_back({sigmas[i], eval_point(forest, test, config)});
    }

    std::vector<std::vector<std::string>> table;
    std::vector<std::array<std::string, 3>> triples;
    for (const auto& r : rows) {
        table.push_back({fmt(r.sigma), fmt(r.metrics.mar), fmt(r.metrics.map)});
        triples.push_back({fmt(r.sigma), fmt(r.metrics.mar), "mAR"});
        triples.push_back({fmt(r.sigma), fmt(r.metrics.map), "mAP"});
    }
    write_table((fs::path(work_dir) / "noise.tsv").string(), {"sigma", "mAR", "mAP"}, table);
    if (emit_plot_data)
        write_plot_triples((fs::path(work_dir) / "noise_plot.tsv").string(), triples);
    return rows;
}

std::vector<SplitComparisonRow> run_split_comparison(const PipelineConfig& config,
                                                     const PoseLibrary& poses,
                                                     const std::vector<int>& pcs,
                                                     const std::string& work_dir,
                                                     bool emit_plot_data) {
    const auto test = make_test_split(config, poses, work_dir);

    SynthesisRequest req;
    req.count = config.dataset_frames;
    req.out_dir = (fs::path(work_dir) / "train").string();
    req.sigma = config.sigma;
    const std::string manifest = synthesize_dataset(config, poses, req);

    std::vector<SplitComparisonRow> rows;
    for (int pc : pcs) {
        for (SplitKind kind : {SplitKind::linear, SplitKind::axis_aligned}) {
            PipelineConfig variant = config;
            variant.pc = pc;
            variant.split_kind = kind;
            const Forest forest = train_on(variant, manifest);
            rows.push_back({pc, kind, eval_point(forest, test, config)});
        }
    }

    std::vector<std::vector<std::string>> table;
    std::vector<std::array<std::string, 3>> triples;
    for (const auto& r : rows) {
        const std::string kind = r.kind == SplitKind::linear ? "linear" : "axis";
        table.push_back({std::to_string(r.pc), kind, fmt(r.metrics.mar), fmt(r.metrics.map)});
        triples.push_back({std::to_string(r.pc), fmt(r.metrics.mar), kind + "-mAR"});
        triples.push_back({std::to_string(r.pc), fmt(r.metrics.map), kind + "-mAP"});
    }
    write_table((fs::path(work_dir) / "split.tsv").string(), {"PC", "kind", "mAR", "mAP"}, table);
    if (emit_plot_data)
        write_plot_triples((fs::path(work_dir) / "split_plot.tsv").string(), triples);
    return rows;
}

std::vector<ModelingComparisonRow> run_modeling_comparison(const PipelineConfig& config,
                                                           const PoseLibrary& poses,
                                                           const std::vector<int>& frame_budgets,
                                                           const std::string& work_dir,
                                                           bool emit_plot_data) {
    const auto test = make_test_split(config, poses, work_dir);

    SynthesisRequest modeled;
    modeled.count = config.dataset_frames;
    modeled.out_dir = (fs::path(work_dir) / "train_modeled").string();
    modeled.sigma = config.sigma;
    const std::string modeled_manifest = synthesize_dataset(config, poses, modeled);

    SynthesisRequest baseline = modeled;
    baseline.out_dir = (fs::path(work_dir) / "train_single").string();
    baseline.style = SceneStyle::single_object;
    const std::string baseline_manifest = synthesize_dataset(config, poses, baseline);

    std::vector<ModelingComparisonRow> rows;
    for (int budget : frame_budgets) {
        for (SceneStyle condition : {SceneStyle::modeled, SceneStyle::single_object}) {
            PipelineConfig variant = config;
            variant.frames_per_tree = budget;
            const std::string& manifest =
                condition == SceneStyle::modeled ? modeled_manifest : baseline_manifest;
            const Forest forest = train_on(variant, manifest);
            rows.push_back({budget, condition, eval_point(forest, test, config)});
        }
    }

    std::vector<std::vector<std::string>> table;
    std::vector<std::array<std::string, 3>> triples;
    for (const auto& r : rows) {
        const std::string cond = r.condition == SceneStyle::modeled ? "modeled" : "non-modeled";
        table.push_back(
            {std::to_string(r.frames_per_tree), cond, fmt(r.metrics.mar), fmt(r.metrics.map)});
        triples.push_back({std::to_string(r.frames_per_tree), fmt(r.metrics.mar), cond + "-mAR"});
        triples.push_back({std::to_string(r.frames_per_tree), fmt(r.metrics.map), cond + "-mAP"});
    }
    write_table((fs::path(work_dir) / "modeling.tsv").string(), {"F", "condition", "mAR", "mAP"},
                table);
    if (emit_plot_data)
        write_plot_triples((fs::path(work_dir) / "modeling_plot.tsv").string(), triples);
    return rows;
}

CrfComparisonOutcome run_crf_comparison(const PipelineConfig& config, const PoseLibrary& poses,
                                        const std::vector<float>& lambda_grid,
                                        const std::string& work_dir) {
    if (lambda_grid.empty()) throw std::invalid_argument("lambda grid is empty");
    const auto test = make_test_split(config, poses, work_dir);

    SynthesisRequest val;
    val.count = config.val_frames;
    val.out_dir = (fs::path(work_dir) / "val").string();
    val.scene_stream = stream::scene_val;
    val.sigma = config.sigma;
    const auto val_set = read_manifest(synthesize_dataset(config, poses, val));

    SynthesisRequest train;
    train.count = config.dataset_frames;
    train.out_dir = (fs::path(work_dir) / "train").string();
    train.sigma = config.sigma;
    const Forest forest = train_on(config, synthesize_dataset(config, poses, train));

    CrfComparisonOutcome outcome;
    double best_f1 = -1.0;
    for (float lambda : lambda_grid) {
        EvalOptions opts;
        opts.use_crf = true;
        opts.lambda = lambda;
        opts.neighborhood = config.neighborhood;
        opts.max_sweeps = config.max_sweeps;
        opts.threads = config.threads;
        const MetricsReport rep = report(evaluate_forest(forest, val_set, opts), kBackgroundId);
        if (rep.mean_f1 > best_f1) {
            best_f1 = rep.mean_f1;
            outcome.best_lambda = lambda;
        }
    }

    EvalOptions plain;
    plain.threads = config.threads;
    outcome.forest_report = report(evaluate_forest(forest, test, plain), kBackgroundId);

    EvalOptions smoothed = plain;
    smoothed.use_crf = true;
    smoothed.lambda = outcome.best_lambda;
    smoothed.neighborhood = config.neighborhood;
    smoothed.max_sweeps = config.max_sweeps;
    outcome.crf_report = report(evaluate_forest(forest, test, smoothed), kBackgroundId);

    std::vector<std::vector<std::string>> table;
    table.push_back({"forest", fmt(outcome.forest_report.mean_recall),
                     fmt(outcome.forest_report.mean_precision), fmt(outcome.forest_report.mean_f1)});
    table.push_back({"crf(lambda=" + fmt(outcome.best_lambda) + ")",
                     fmt(outcome.crf_report.mean_recall), fmt(outcome.crf_report.mean_precision),
                     fmt(outcome.crf_report.mean_f1)});
    write_table((fs::path(work_dir) / "crf.tsv").string(), {"stage", "mAR", "mAP", "meanF1"}, table);
    return outcome;
}

}  // namespace topseg
