#pragma once

// Brute-force reference implementations for the test suites. These share no
// code with the library: energies, flows and entropies are recomputed from
// first principles so disagreements point at real defects.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace oracle {

/// Enumerable Potts problem: grid up to 3x3, up to 3 classes.
struct TinyProblem {
    int width = 0;
    int height = 0;
    int class_count = 0;
    std::vector<double> unary;  // pixel-major [pixel][class]
    double lambda = 0.0;
    int neighborhood = 4;

    double unary_cost(int pixel, int label) const { return unary[pixel * class_count + label]; }
    int pixels() const { return width * height; }
};

struct TinySolution {
    std::vector<int> labels;
    double energy = 0.0;
};

double tiny_energy(const TinyProblem& problem, const std::vector<int>& labels);

/// Global minimum by enumerating every labeling. Refuses label spaces beyond
/// 2^20.
TinySolution exhaustive_min(const TinyProblem& problem);

/// Dense-capacity max flow (shortest augmenting paths). Nodes 0..n-1 plus
/// explicit source/sink arcs.
class NaiveFlowNetwork {
public:
    explicit NaiveFlowNetwork(int nodes);

    void add_edge(int u, int v, double cap, double rev_cap);
    void add_terminal(int v, double cap_source, double cap_sink);
    double max_flow();

private:
    int n_;  // interior nodes; source = n_, sink = n_ + 1
    std::vector<std::vector<double>> cap_;
};

/// Direct Shannon entropy in nats.
double entropy_nats(std::span<const std::uint32_t> histogram);

}  // namespace oracle
