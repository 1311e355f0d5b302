#include "topseg/crf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "topseg/maxflow.hpp"

namespace topseg {

namespace {

// Neighbor offsets: 4-connected uses the first two (right, down), 8-connected
// adds the two down diagonals. Each unordered pair is visited once.
constexpr int kNeighborDx[4] = {1, 0, 1, -1};
constexpr int kNeighborDy[4] = {0, 1, 1, 1};

int neighbor_span(const CrfProblem& problem) {
    if (problem.neighborhood == 4) return 2;
    if (problem.neighborhood == 8) return 4;
    throw std::invalid_argument("neighborhood must be 4 or 8 connected");
}

void check_dims(const CrfProblem& problem, const LabelFrame& labels) {
    if (labels.width != problem.width || labels.height != problem.height)
        throw std::invalid_argument("labeling dimensions do not match the problem");
}

}  // namespace

CrfProblem problem_from_posteriors(const PosteriorVolume& posteriors, float potts_weight,
                                   int neighborhood) {
    if (potts_weight < 0.f) throw std::invalid_argument("potts weight must be non-negative");
    CrfProblem problem;
    problem.width = posteriors.width;
    problem.height = posteriors.height;
    problem.class_count = posteriors.class_count;
    problem.potts_weight = potts_weight;
    problem.neighborhood = neighborhood;
    problem.unary.resize(posteriors.values.size());
    for (std::size_t i = 0; i < posteriors.values.size(); ++i)
        problem.unary[i] = -std::log(std::max(posteriors.values[i], 1e-30f));
    return problem;
}

double crf_energy(const CrfProblem& problem, const LabelFrame& labels) {
    check_dims(problem, labels);
    const int span = neighbor_span(problem);
    double energy = 0.0;
    std::size_t unequal = 0;
    for (int y = 0; y < problem.height; ++y)
        for (int x = 0; x < problem.width; ++x) {
            const std::uint8_t l = labels.at(x, y);
            energy += problem.unary_at(x, y)[l];
            for (int k = 0; k < span; ++k) {
                const int nx = x + kNeighborDx[k], ny = y + kNeighborDy[k];
                if (nx < 0 || nx >= problem.width || ny >= problem.height) continue;
                if (labels.at(nx, ny) != l) ++unequal;
            }
        }
    return energy + double(problem.potts_weight) * double(unequal);
}

LabelFrame unary_argmin(const CrfProblem& problem) {
    LabelFrame labels(problem.width, problem.height);
    for (int y = 0; y < problem.height; ++y)
        for (int x = 0; x < problem.width; ++x) {
            const float* u = problem.unary_at(x, y);
            int best = 0;
            for (int c = 1; c < problem.class_count; ++c)
                if (u[c] < u[best]) best = c;
            labels.at(x, y) = std::uint8_t(best);
        }
    return labels;
}

namespace {

struct ExpandScratch {
    FlowNetwork net;
    std::vector<std::int32_t> node_of;
};

LabelFrame expand_with(const CrfProblem& problem, const LabelFrame& current, int alpha,
                       ExpandScratch& scratch) {
    check_dims(problem, current);
    if (alpha < 0 || alpha >= problem.class_count)
        throw std::invalid_argument("expansion class out of range");
    const int w = problem.width, h = problem.height;
    const int span = neighbor_span(problem);
    const double lambda = problem.potts_weight;
    const std::size_t pixels = std::size_t(w) * h;

    // Binary move graph over the pixels not already labeled alpha (those can
    // only stay alpha). Source side = take alpha, sink side = keep: keeping
    // pays the source arc, taking alpha pays the sink arc.
    std::vector<std::int32_t>& node_of = scratch.node_of;
    node_of.assign(pixels, -1);
    std::int32_t movable = 0;
    for (std::size_t i = 0; i < pixels; ++i)
        if (current.labels[i] != alpha) node_of[i] = movable++;

    FlowNetwork& net = scratch.net;
    net.reset();
    const std::size_t pair_budget = pixels * std::size_t(span);
    net.reserve(std::size_t(movable) + pair_budget, 3 * pair_budget);
    net.add_nodes(std::size_t(movable));
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const std::int32_t p = node_of[std::size_t(y) * w + x];
            if (p < 0) continue;
            const float* u = problem.unary_at(x, y);
            net.add_terminal(p, u[current.at(x, y)], u[alpha]);
        }

    // Pairwise Potts terms. Equal-label pairs need one edge; unequal pairs
    // get the auxiliary-node gadget (edge costs to alpha on each side, the
    // old-boundary cost on the auxiliary's source arc). A pair with one pixel
    // fixed at alpha charges the movable side for keeping its label.
    if (lambda > 0.0) {
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                const std::size_t i = std::size_t(y) * w + x;
                const std::int32_t p = node_of[i];
                const int lp = current.labels[i];
                for (int k = 0; k < span; ++k) {
                    const int nx = x + kNeighborDx[k], ny = y + kNeighborDy[k];
                    if (nx < 0 || nx >= w || ny >= h) continue;
                    const std::size_t j = std::size_t(ny) * w + nx;
                    const std::int32_t q = node_of[j];
                    const int lq = current.labels[j];
                    if (p < 0 && q < 0) continue;  // both fixed at alpha
                    if (p < 0) {
                        net.add_terminal(q, lambda, 0.0);
                        continue;
                    }
                    if (q < 0) {
                        net.add_terminal(p, lambda, 0.0);
                        continue;
                    }
                    if (lp == lq) {
                        net.add_edge(p, q, lambda, lambda);
                        continue;
                    }
                    const FlowNetwork::NodeId aux = net.add_node();
                    net.add_terminal(aux, lambda, 0.0);  // both keep: the old boundary
                    net.add_edge(p, aux, lambda, lambda);
                    net.add_edge(aux, q, lambda, lambda);
                }
            }
    }

    net.solve();
    LabelFrame next = current;
    for (std::size_t i = 0; i < pixels; ++i)
        if (node_of[i] >= 0 && net.source_side(node_of[i])) next.labels[i] = std::uint8_t(alpha);
    return next;
}

// Energy change from `before` to `after`, touching only changed pixels.
double energy_delta(const CrfProblem& problem, const LabelFrame& before, const LabelFrame& after) {
    const int w = problem.width, h = problem.height;
    const int span = neighbor_span(problem);
    const double lambda = problem.potts_weight;
    double delta = 0.0;
    long pair_delta = 0;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const std::size_t i = std::size_t(y) * w + x;
            const int oldl = before.labels[i], newl = after.labels[i];
            if (oldl == newl) continue;
            const float* u = problem.unary_at(x, y);
            delta += double(u[newl]) - double(u[oldl]);
            // all four/eight neighbors; pairs of two changed pixels are seen
            // from both ends, so count those at half weight via canonical order
            for (int k = 0; k < span; ++k) {
                for (int sign : {1, -1}) {
                    const int nx = x + sign * kNeighborDx[k], ny = y + sign * kNeighborDy[k];
                    if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                    const std::size_t j = std::size_t(ny) * w + nx;
                    const bool j_changed = before.labels[j] != after.labels[j];
                    if (j_changed && j < i) continue;  // counted from the other end
                    pair_delta += int(after.labels[j] != newl) - int(before.labels[j] != oldl);
                }
            }
        }
    return delta + lambda * double(pair_delta);
}

}  // namespace

LabelFrame expand(const CrfProblem& problem, const LabelFrame& current, int alpha) {
    ExpandScratch scratch;
    return expand_with(problem, current, alpha, scratch);
}

namespace {

// Sweep order keyed by the unary columns themselves, never the class index:
// ascending total cost, full column comparison on ties. Identical columns are
// interchangeable classes, so index order between them is immaterial.
std::vector<int> sweep_order(const CrfProblem& problem) {
    const std::size_t pixels = std::size_t(problem.width) * problem.height;
    std::vector<double> totals(problem.class_count, 0.0);
    for (std::size_t i = 0; i < pixels; ++i)
        for (int c = 0; c < problem.class_count; ++c)
            totals[c] += problem.unary[i * problem.class_count + c];

    std::vector<int> order(problem.class_count);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (totals[a] != totals[b]) return totals[a] < totals[b];
        for (std::size_t i = 0; i < pixels; ++i) {
            const float ua = problem.unary[i * problem.class_count + a];
            const float ub = problem.unary[i * problem.class_count + b];
            if (ua != ub) return ua < ub;
        }
        return a < b;
    });
    return order;
}

}  // namespace

SolveResult solve(const CrfProblem& problem, std::optional<LabelFrame> init, int max_sweeps) {
    SolveResult result;
    result.labels = init ? std::move(*init) : unary_argmin(problem);
    check_dims(problem, result.labels);
    result.energy = crf_energy(problem, result.labels);
    result.energy_trace.push_back(result.energy);

    const std::vector<int> order = sweep_order(problem);
    // expand() is a pure function of (problem, labels, alpha); re-running a
    // class against an unchanged labeling is a no-op and can be skipped.
    std::vector<std::uint64_t> attempted_at(problem.class_count, 0);
    std::uint64_t version = 1;
    ExpandScratch scratch;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        const double sweep_start = result.energy;
        for (int alpha : order) {
            if (attempted_at[alpha] == version) continue;
            LabelFrame moved = expand_with(problem, result.labels, alpha, scratch);
            attempted_at[alpha] = version;
            const double e = result.energy + energy_delta(problem, result.labels, moved);
            if (e < result.energy) {
                result.labels = std::move(moved);
                result.energy = e;
                attempted_at[alpha] = ++version;
            }
            result.energy_trace.push_back(result.energy);
        }
        result.sweeps = sweep + 1;
        if (!(result.energy < sweep_start)) break;
    }
    return result;
}

}  // namespace topseg
