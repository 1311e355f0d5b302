#pragma once

#include <cstdint>
#include <vector>

namespace topseg {

/// s-t max-flow / min-cut on a sparse graph, augmenting-path style with
/// source and sink search trees that persist across augmentations (the usual
/// arrangement for vision grid graphs). Terminal capacities are folded into
/// per-node excesses. One-shot: build, solve once, read the cut sides.
class FlowNetwork {
public:
    using NodeId = std::int32_t;

    NodeId add_node();
    void add_nodes(std::size_t n);
    void reserve(std::size_t nodes, std::size_t arc_pairs);

    /// Clears the network for a fresh build, keeping allocated capacity.
    void reset();

    /// Directed residual pair u->v with `cap` and v->u with `rev_cap`.
    void add_edge(NodeId u, NodeId v, double cap, double rev_cap);

    /// Arc source->v with cap_source and v->sink with cap_sink. Repeated
    /// calls accumulate.
    void add_terminal(NodeId v, double cap_source, double cap_sink);

    /// Runs max-flow and returns its value (min-cut capacity).
    double solve();

    /// After solve: true when v sits on the source side of the min cut.
    bool source_side(NodeId v) const;

    std::size_t node_count() const { return nodes_.size(); }

private:
    enum class Side : std::uint8_t { free_node, source, sink };

    struct Node {
        std::int32_t first_arc = -1;
        std::int32_t parent_arc = kNoParent;  // arc from this node to its tree parent
        double excess = 0.0;                  // >0 source surplus, <0 sink demand
        std::uint32_t timestamp = 0;
        std::uint32_t dist = 0;
        Side side = Side::free_node;
        bool active = false;
    };

    struct Arc {
        NodeId head = 0;
        std::int32_t next = -1;
        double r_cap = 0.0;
    };

    static constexpr std::int32_t kNoParent = -1;
    static constexpr std::int32_t kTerminal = -2;  // parent arc value for tree roots

    void set_active(NodeId v);
    NodeId next_active();
    void augment(std::int32_t connector);
    void process_orphans();
    bool rooted(NodeId v);
    double tree_residual(const Node& node, std::int32_t arc) const;

    std::vector<Node> nodes_;
    std::vector<Arc> arcs_;
    std::vector<NodeId> active_queue_;
    std::size_t active_head_ = 0;
    std::vector<NodeId> orphans_;
    double flow_ = 0.0;
    std::uint32_t time_ = 0;
    bool solved_ = false;
};

}  // namespace topseg
