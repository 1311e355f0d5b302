#include "oracles.hpp"

#include <cmath>
#include <deque>
#include <limits>

namespace oracle {

double tiny_energy(const TinyProblem& problem, const std::vector<int>& labels) {
    double energy = 0.0;
    for (int p = 0; p < problem.pixels(); ++p) energy += problem.unary_cost(p, labels[p]);
    const int w = problem.width, h = problem.height;
    const int dx[4] = {1, 0, 1, -1};
    const int dy[4] = {0, 1, 1, 1};
    const int span = problem.neighborhood == 8 ? 4 : 2;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int k = 0; k < span; ++k) {
                const int nx = x + dx[k], ny = y + dy[k];
                if (nx < 0 || nx >= w || ny >= h) continue;
                if (labels[y * w + x] != labels[ny * w + nx]) energy += problem.lambda;
            }
    return energy;
}

TinySolution exhaustive_min(const TinyProblem& problem) {
    const int n = problem.pixels();
    double combos = std::pow(double(problem.class_count), double(n));
    if (combos > double(1 << 20)) throw std::invalid_argument("label space too large to enumerate");

    std::vector<int> labels(n, 0);
    TinySolution best;
    best.labels = labels;
    best.energy = std::numeric_limits<double>::infinity();
    while (true) {
        const double e = tiny_energy(problem, labels);
        if (e < best.energy) {
            best.energy = e;
            best.labels = labels;
        }
        int i = 0;
        for (; i < n; ++i) {
            if (++labels[i] < problem.class_count) break;
            labels[i] = 0;
        }
        if (i == n) break;
    }
    return best;
}

NaiveFlowNetwork::NaiveFlowNetwork(int nodes)
    : n_(nodes), cap_(nodes + 2, std::vector<double>(nodes + 2, 0.0)) {}

void NaiveFlowNetwork::add_edge(int u, int v, double cap, double rev_cap) {
    cap_[u][v] += cap;
    cap_[v][u] += rev_cap;
}

void NaiveFlowNetwork::add_terminal(int v, double cap_source, double cap_sink) {
    cap_[n_][v] += cap_source;
    cap_[v][n_ + 1] += cap_sink;
}

double NaiveFlowNetwork::max_flow() {
    const int source = n_, sink = n_ + 1, total = n_ + 2;
    double flow = 0.0;
    while (true) {
        // BFS for a shortest augmenting path.
        std::vector<int> parent(total, -1);
        parent[source] = source;
        std::deque<int> queue{source};
        while (!queue.empty() && parent[sink] == -1) {
            const int u = queue.front();
            queue.pop_front();
            for (int v = 0; v < total; ++v)
                if (parent[v] == -1 && cap_[u][v] > 0.0) {
                    parent[v] = u;
                    queue.push_back(v);
                }
        }
        if (parent[sink] == -1) return flow;
        double bottleneck = std::numeric_limits<double>::infinity();
        for (int v = sink; v != source; v = parent[v])
            bottleneck = std::min(bottleneck, cap_[parent[v]][v]);
        for (int v = sink; v != source; v = parent[v]) {
            cap_[parent[v]][v] -= bottleneck;
            cap_[v][parent[v]] += bottleneck;
        }
        flow += bottleneck;
    }
}

double entropy_nats(std::span<const std::uint32_t> histogram) {
    double total = 0.0;
    for (auto c : histogram) total += c;
    if (total <= 0.0) return 0.0;
    double h = 0.0;
    for (auto c : histogram) {
        if (c == 0) continue;
        const double p = double(c) / total;
        h -= p * std::log(p);
    }
    return h;
}

}  // namespace oracle
