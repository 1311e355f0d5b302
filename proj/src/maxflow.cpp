#include "topseg/maxflow.hpp"

#include <algorithm>
#include <cassert>
#include <limits>

namespace topseg {

FlowNetwork::NodeId FlowNetwork::add_node() {
    nodes_.emplace_back();
    return NodeId(nodes_.size() - 1);
}

void FlowNetwork::add_nodes(std::size_t n) { nodes_.resize(nodes_.size() + n); }

void FlowNetwork::reserve(std::size_t nodes, std::size_t arc_pairs) {
    nodes_.reserve(nodes_.size() + nodes);
    arcs_.reserve(arcs_.size() + 2 * arc_pairs);
}

void FlowNetwork::reset() {
    nodes_.clear();
    arcs_.clear();
    active_queue_.clear();
    active_head_ = 0;
    orphans_.clear();
    flow_ = 0.0;
    time_ = 0;
    solved_ = false;
}

void FlowNetwork::add_edge(NodeId u, NodeId v, double cap, double rev_cap) {
    assert(u >= 0 && std::size_t(u) < nodes_.size());
    assert(v >= 0 && std::size_t(v) < nodes_.size());
    if (cap <= 0.0 && rev_cap <= 0.0) return;
    const std::int32_t a = std::int32_t(arcs_.size());
    arcs_.push_back({v, nodes_[u].first_arc, cap});
    arcs_.push_back({u, nodes_[v].first_arc, rev_cap});
    nodes_[u].first_arc = a;
    nodes_[v].first_arc = a + 1;
}

void FlowNetwork::add_terminal(NodeId v, double cap_source, double cap_sink) {
    // Fold the two terminal arcs into one excess; the unavoidable min flows
    // immediately.
    const double excess = nodes_[v].excess;
    if (excess > 0.0)
        cap_source += excess;
    else
        cap_sink -= excess;
    flow_ += std::min(cap_source, cap_sink);
    nodes_[v].excess = cap_source - cap_sink;
}

void FlowNetwork::set_active(NodeId v) {
    if (nodes_[v].active) return;
    nodes_[v].active = true;
    active_queue_.push_back(v);
}

FlowNetwork::NodeId FlowNetwork::next_active() {
    while (active_head_ < active_queue_.size()) {
        const NodeId v = active_queue_[active_head_++];
        nodes_[v].active = false;
        if (nodes_[v].side != Side::free_node) return v;
        // Queue compaction once the consumed prefix dominates.
        if (active_head_ > 4096 && active_head_ * 2 > active_queue_.size()) {
            active_queue_.erase(active_queue_.begin(),
                                active_queue_.begin() + std::ptrdiff_t(active_head_));
            active_head_ = 0;
        }
    }
    return -1;
}

double FlowNetwork::tree_residual(const Node& node, std::int32_t arc) const {
    // Residual available for growing the node's tree across `arc`.
    return node.side == Side::source ? arcs_[arc].r_cap : arcs_[arc ^ 1].r_cap;
}

bool FlowNetwork::rooted(NodeId start) {
    // Walk the parent chain; stamps are only trusted within the current
    // adoption scan (time_ bumps before each orphan is examined).
    NodeId v = start;
    std::uint32_t steps = 0;
    while (true) {
        if (nodes_[v].timestamp == time_) break;
        const std::int32_t pa = nodes_[v].parent_arc;
        if (pa == kTerminal) break;
        if (pa == kNoParent) return false;
        v = arcs_[pa].head;
        if (++steps > nodes_.size()) return false;  // defensive; chains are acyclic
    }
    for (NodeId u = start; nodes_[u].timestamp != time_;) {
        nodes_[u].timestamp = time_;
        const std::int32_t pa = nodes_[u].parent_arc;
        if (pa == kTerminal) break;
        u = arcs_[pa].head;
    }
    return true;
}

void FlowNetwork::augment(std::int32_t connector) {
    // connector runs from a source-tree node to a sink-tree node.
    const NodeId u = arcs_[connector ^ 1].head;
    const NodeId w = arcs_[connector].head;

    double bottleneck = arcs_[connector].r_cap;
    for (NodeId v = u;;) {
        const std::int32_t pa = nodes_[v].parent_arc;
        if (pa == kTerminal) {
            bottleneck = std::min(bottleneck, nodes_[v].excess);
            break;
        }
        bottleneck = std::min(bottleneck, arcs_[pa ^ 1].r_cap);
        v = arcs_[pa].head;
    }
    for (NodeId v = w;;) {
        const std::int32_t pa = nodes_[v].parent_arc;
        if (pa == kTerminal) {
            bottleneck = std::min(bottleneck, -nodes_[v].excess);
            break;
        }
        bottleneck = std::min(bottleneck, arcs_[pa].r_cap);
        v = arcs_[pa].head;
    }

    arcs_[connector].r_cap -= bottleneck;
    arcs_[connector ^ 1].r_cap += bottleneck;

    for (NodeId v = u;;) {
        const std::int32_t pa = nodes_[v].parent_arc;
        if (pa == kTerminal) {
            nodes_[v].excess -= bottleneck;
            if (nodes_[v].excess <= 0.0) {
                nodes_[v].parent_arc = kNoParent;
                orphans_.push_back(v);
            }
            break;
        }
        arcs_[pa ^ 1].r_cap -= bottleneck;
        arcs_[pa].r_cap += bottleneck;
        const NodeId parent = arcs_[pa].head;
        if (arcs_[pa ^ 1].r_cap <= 0.0) {
            nodes_[v].parent_arc = kNoParent;
            orphans_.push_back(v);
        }
        v = parent;
    }
    for (NodeId v = w;;) {
        const std::int32_t pa = nodes_[v].parent_arc;
        if (pa == kTerminal) {
            nodes_[v].excess += bottleneck;
            if (nodes_[v].excess >= 0.0) {
                nodes_[v].parent_arc = kNoParent;
                orphans_.push_back(v);
            }
            break;
        }
        arcs_[pa].r_cap -= bottleneck;
        arcs_[pa ^ 1].r_cap += bottleneck;
        const NodeId parent = arcs_[pa].head;
        if (arcs_[pa].r_cap <= 0.0) {
            nodes_[v].parent_arc = kNoParent;
            orphans_.push_back(v);
        }
        v = parent;
    }

    flow_ += bottleneck;
}

void FlowNetwork::process_orphans() {
    while (!orphans_.empty()) {
        const NodeId o = orphans_.back();
        orphans_.pop_back();
        Node& node = nodes_[o];
        if (node.side == Side::free_node) continue;
        ++time_;

        std::int32_t best_arc = kNoParent;
        std::uint32_t best_dist = std::numeric_limits<std::uint32_t>::max();
        for (std::int32_t a = node.first_arc; a != -1; a = arcs_[a].next) {
            // The prospective parent must feed this node (source tree) or
            // drain it (sink tree).
            const double residual =
                node.side == Side::source ? arcs_[a ^ 1].r_cap : arcs_[a].r_cap;
            if (residual <= 0.0) continue;
            const NodeId q = arcs_[a].head;
            if (nodes_[q].side != node.side) continue;
            if (!rooted(q)) continue;
            if (nodes_[q].dist < best_dist) {
                best_dist = nodes_[q].dist;
                best_arc = a;
            }
        }

        if (best_arc != kNoParent) {
            node.parent_arc = best_arc;
            node.dist = best_dist + 1;
            node.timestamp = time_;
            continue;
        }

        // No new parent: free the node, wake neighbors that may reclaim it,
        // and cascade to its children.
        for (std::int32_t a = node.first_arc; a != -1; a = arcs_[a].next) {
            const NodeId q = arcs_[a].head;
            if (nodes_[q].side != node.side) continue;
            if (tree_residual(nodes_[q], a ^ 1) > 0.0) set_active(q);
            if (nodes_[q].parent_arc == (a ^ 1)) {
                nodes_[q].parent_arc = kNoParent;
                orphans_.push_back(q);
            }
        }
        node.side = Side::free_node;
    }
}

double FlowNetwork::solve() {
    if (solved_) return flow_;
    for (NodeId v = 0; std::size_t(v) < nodes_.size(); ++v) {
        if (nodes_[v].excess > 0.0) {
            nodes_[v].side = Side::source;
            nodes_[v].parent_arc = kTerminal;
            nodes_[v].dist = 1;
            set_active(v);
        } else if (nodes_[v].excess < 0.0) {
            nodes_[v].side = Side::sink;
            nodes_[v].parent_arc = kTerminal;
            nodes_[v].dist = 1;
            set_active(v);
        }
    }

    for (NodeId v; (v = next_active()) != -1;) {
        if (nodes_[v].parent_arc == kNoParent && nodes_[v].side != Side::free_node) {
            // Orphaned but never freed; should not happen, skip defensively.
            continue;
        }
        for (std::int32_t a = nodes_[v].first_arc; a != -1; a = arcs_[a].next) {
            if (tree_residual(nodes_[v], a) <= 0.0) continue;
            const NodeId q = arcs_[a].head;
            if (nodes_[q].side == Side::free_node) {
                nodes_[q].side = nodes_[v].side;
                nodes_[q].parent_arc = a ^ 1;
                nodes_[q].dist = nodes_[v].dist + 1;
                nodes_[q].timestamp = nodes_[v].timestamp;
                set_active(q);
            } else if (nodes_[q].side != nodes_[v].side) {
                const std::int32_t connector = nodes_[v].side == Side::source ? a : (a ^ 1);
                augment(connector);
                process_orphans();
                if (nodes_[v].side == Side::free_node) break;
                set_active(v);  // rescan remaining arcs in a later pass
                break;
            }
        }
    }

    solved_ = true;
    return flow_;
}

bool FlowNetwork::source_side(NodeId v) const { return nodes_[v].side == Side::source; }

}  // namespace topseg
