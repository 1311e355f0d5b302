#pragma once

#include <optional>
#include <vector>

#include "topseg/forest.hpp"
#include "topseg/frame.hpp"

namespace topseg {

/// Pairwise Potts model over the pixel grid: per-pixel per-class costs plus
/// a constant penalty for unequal neighbor labels.
struct CrfProblem {
    int width = 0;
    int height = 0;
    int class_count = 0;
    std::vector<float> unary;  // pixel-major costs, typically -log posterior
    float potts_weight = 2.0f;
    int neighborhood = 4;  // 4 or 8 connected

    const float* unary_at(int x, int y) const {
        return unary.data() + (std::size_t(y) * width + x) * class_count;
    }
    float* unary_at(int x, int y) {
        return unary.data() + (std::size_t(y) * width + x) * class_count;
    }
};

/// Builds the unary volume as -log of the (already smoothed) posteriors.
CrfProblem problem_from_posteriors(const PosteriorVolume& posteriors, float potts_weight,
                                   int neighborhood = 4);

/// E(x) = sum_i unary(i, x_i) + potts_weight * #{neighbor pairs with x_i != x_j}.
double crf_energy(const CrfProblem& problem, const LabelFrame& labels);

LabelFrame unary_argmin(const CrfProblem& problem);

/// Optimal single expansion move: every pixel keeps its label or switches to
/// alpha, decided by one min cut. Never increases the energy.
LabelFrame expand(const CrfProblem& problem, const LabelFrame& current, int alpha);

struct SolveResult {
    LabelFrame labels;
    double energy = 0.0;
    /// Energy after the initial labeling and after every expansion move.
    std::vector<double> energy_trace;
    int sweeps = 0;
};

/// Cycles expansion moves over all classes until a sweep yields no decrease
/// (or max_sweeps). Classes are swept in order of ascending total unary cost,
/// a key that is a function of the cost columns only, so relabeling classes
/// permutes the result exactly. Starts from the unary argmin when no initial
/// labeling is given.
SolveResult solve(const CrfProblem& problem, std::optional<LabelFrame> init = std::nullopt,
                  int max_sweeps = 10);

}  // namespace topseg
