#pragma once

#include <cstdint>
#include <vector>

#include "topseg/frame.hpp"

namespace topseg {

/// Rows are ground truth, columns predictions.
class ConfusionMatrix {
public:
    explicit ConfusionMatrix(int class_count)
        : class_count_(class_count), counts_(std::size_t(class_count) * class_count, 0) {}

    std::uint64_t at(int truth, int pred) const {
        return counts_[std::size_t(truth) * class_count_ + pred];
    }
    void add(int truth, int pred, std::uint64_t n = 1) {
        counts_[std::size_t(truth) * class_count_ + pred] += n;
    }
    void merge(const ConfusionMatrix& other);

    std::uint64_t row_sum(int truth) const;
    std::uint64_t col_sum(int pred) const;
    std::uint64_t total() const;
    int class_count() const { return class_count_; }

private:
    int class_count_;
    std::vector<std::uint64_t> counts_;
};

/// Per-pixel tally of truth vs prediction. Throws on dimension mismatch.
void accumulate(ConfusionMatrix& cm, const LabelFrame& truth, const LabelFrame& pred);

struct ClassMetrics {
    double recall = 0.0;
    double precision = 0.0;
    double f1 = 0.0;
    bool present = false;  // appears in truth or predictions
};

struct MetricsReport {
    std::vector<ClassMetrics> per_class;
    double mean_recall = 0.0;     // mAR, macro over included classes
    double mean_precision = 0.0;  // mAP
    double mean_f1 = 0.0;
};

/// Macro averages exclude `background_id` (pass -1 to include every class)
/// and classes absent from both truth and predictions. Per-class rates are 0
/// when their denominator is 0; F1 is 0 when precision and recall both are.
MetricsReport report(const ConfusionMatrix& cm, int background_id = -1);

}  // namespace topseg
