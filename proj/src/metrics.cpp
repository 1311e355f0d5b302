#include "topseg/metrics.hpp"

#include <stdexcept>

namespace topseg {

void ConfusionMatrix::merge(const ConfusionMatrix& other) {
    if (other.class_count_ != class_count_)
        throw std::invalid_argument("confusion matrix class counts differ");
    for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
}

std::uint64_t ConfusionMatrix::row_sum(int truth) const {
    std::uint64_t sum = 0;
    for (int c = 0; c < class_count_; ++c) sum += at(truth, c);
    return sum;
}

std::uint64_t ConfusionMatrix::col_sum(int pred) const {
    std::uint64_t sum = 0;
    for (int r = 0; r < class_count_; ++r) sum += at(r, pred);
    return sum;
}

std::uint64_t ConfusionMatrix::total() const {
    std::uint64_t sum = 0;
    for (int r = 0; r < class_count_; ++r) sum += row_sum(r);
    return sum;
}

void accumulate(ConfusionMatrix& cm, const LabelFrame& truth, const LabelFrame& pred) {
    if (truth.width != pred.width || truth.height != pred.height)
        throw std::invalid_argument("label frame dimensions do not match");
    for (std::size_t i = 0; i < truth.labels.size(); ++i) {
        const int t = truth.labels[i], p = pred.labels[i];
        if (t < cm.class_count() && p < cm.class_count()) cm.add(t, p);
    }
}

MetricsReport report(const ConfusionMatrix& cm, int background_id) {
    MetricsReport rep;
    rep.per_class.resize(cm.class_count());
    double sum_r = 0.0, sum_p = 0.0, sum_f = 0.0;
    int included = 0;
    for (int c = 0; c < cm.class_count(); ++c) {
        ClassMetrics& m = rep.per_class[c];
        const std::uint64_t row = cm.row_sum(c);
        const std::uint64_t col = cm.col_sum(c);
        const std::uint64_t tp = cm.at(c, c);
        m.present = row > 0 || col > 0;
        m.recall = row > 0 ? double(tp) / double(row) : 0.0;
        m.precision = col > 0 ? double(tp) / double(col) : 0.0;
        m.f1 = (m.precision + m.recall) > 0.0
                   ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                   : 0.0;
        if (c == background_id || !m.present) continue;
        sum_r += m.recall;
        sum_p += m.precision;
        sum_f += m.f1;
        ++included;
    }
    if (included > 0) {
        rep.mean_recall = sum_r / included;
        rep.mean_precision = sum_p / included;
        rep.mean_f1 = sum_f / included;
    }
    return rep;
}

}  // namespace topseg
