#pragma once

#include <string>
#include <vector>

#include "topseg/metrics.hpp"
#include "topseg/pipeline.hpp"

namespace topseg {

struct MetricPoint {
    double mar = 0.0;
    double map = 0.0;
    double mean_f1 = 0.0;
};

MetricPoint metric_point(const MetricsReport& report);

struct NoiseSweepRow {
    float sigma;
    MetricPoint metrics;
};

/// Trains one forest per training-noise sigma (same scenes throughout) and
/// evaluates all of them on a shared test split whose noise stays at
/// config.sigma. Writes noise.tsv under work_dir.
std::vector<NoiseSweepRow> run_noise_sweep(const PipelineConfig& config, const PoseLibrary& poses,
                                           const std::vector<float>& sigmas,
                                           const std::string& work_dir, bool emit_plot_data = false);

struct SplitComparisonRow {
    int pc;
    SplitKind kind;
    MetricPoint metrics;
};

/// Axis-aligned vs linear split functions over a grid of feature counts, one
/// shared train and test split. Writes split.tsv.
std::vector<SplitComparisonRow> run_split_comparison(const PipelineConfig& config,
                                                     const PoseLibrary& poses,
                                                     const std::vector<int>& pcs,
                                                     const std::string& work_dir,
                                                     bool emit_plot_data = false);

struct ModelingComparisonRow {
    int frames_per_tree;
    SceneStyle condition;
    MetricPoint metrics;
};

/// Interaction-modeled training scenes vs the single-object baseline,
/// evaluated on a common multi-object test split, per frames-per-tree budget.
/// Writes modeling.tsv.
std::vector<ModelingComparisonRow> run_modeling_comparison(const PipelineConfig& config,
                                                           const PoseLibrary& poses,
                                                           const std::vector<int>& frame_budgets,
                                                           const std::string& work_dir,
                                                           bool emit_plot_data = false);

struct CrfComparisonOutcome {
    float best_lambda = 0.f;
    MetricsReport forest_report;  // test split, forest argmax
    MetricsReport crf_report;     // test split, expansion-smoothed labels
};

/// Calibrates the Potts weight on a validation split (best mean F1), then
/// compares smoothed against raw forest labels on the test split.
CrfComparisonOutcome run_crf_comparison(const PipelineConfig& config, const PoseLibrary& poses,
                                        const std::vector<float>& lambda_grid,
                                        const std::string& work_dir);

/// Plain TSV with a header row.
void write_table(const std::string& path, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows);

}  // namespace topseg
