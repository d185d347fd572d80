// SPDX-FileCopyrightText: (c) 2026 The multiscopic authors
//
// SPDX-License-Identifier: Apache-2.0

#include "multiscopic/maxflow.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <limits>
#include <string>

#include "multiscopic/error.hpp"

namespace multiscopic {

FlowGraph::FlowGraph(int node_count, int source, int sink)
    : node_count_(node_count), source_(source), sink_(sink) {
    if (node_count < 2) {
        throw ArgumentError("flow graph needs at least the two terminals");
    }
    if (source < 0 || source >= node_count || sink < 0 || sink >= node_count || source == sink) {
        throw ArgumentError("source and sink must be distinct nodes of the graph");
    }
}

void FlowGraph::add_arc(int from, int to, Capacity capacity, Capacity reverse_capacity) {
    if (from < 0 || from >= node_count_ || to < 0 || to >= node_count_) {
        throw ArgumentError("arc endpoint " + std::to_string(from) + "->" + std::to_string(to) +
                            " outside the graph");
    }
    if (capacity < 0 || reverse_capacity < 0) {
        throw ArgumentError("arc capacities must be non-negative");
    }
    arcs_.push_back(FlowArc{from, to, capacity, reverse_capacity});
}

namespace {

constexpr int kNoParent = -1;
constexpr int kTerminal = -2;
constexpr int kOrphan = -3;
constexpr int kNoArc = -1;
constexpr int kInfiniteDistance = std::numeric_limits<int>::max();

// Terminal arcs are folded into a signed per-node residual `terminal_`
// (positive: from the source, negative: to the sink); only arcs between
// non-terminal nodes are stored explicitly, in sister pairs.
class TreeReuseSolver {
public:
    explicit TreeReuseSolver(const FlowGraph& graph) : graph_(graph) {
        const auto n = static_cast<std::size_t>(graph.node_count());
        first_.assign(n, kNoArc);
        terminal_.assign(n, 0);
        parent_.assign(n, kNoParent);
        in_sink_tree_.assign(n, 0);
        active_.assign(n, 0);
        timestamp_.assign(n, 0);
        distance_.assign(n, 0);

        std::vector<Capacity> from_source(n, 0);
        std::vector<Capacity> to_sink(n, 0);
        auto piece = [&](int a, int b, Capacity c) {
            if (c == 0 || a == b) {
                return;
            }
            if (a == graph.source() && b == graph.sink()) {
                flow_ += c;
            } else if (a == graph.source()) {
                from_source[b] += c;
            } else if (b == graph.sink()) {
                to_sink[a] += c;
            }
            // Arcs into the source or out of the sink never carry s-t flow.
        };
        for (const FlowArc& arc : graph.arcs()) {
            if (is_terminal(arc.from) || is_terminal(arc.to)) {
                piece(arc.from, arc.to, arc.capacity);
                piece(arc.to, arc.from, arc.reverse_capacity);
            } else if (arc.from != arc.to) {
                add_pair(arc.from, arc.to, arc.capacity, arc.reverse_capacity);
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            flow_ += std::min(from_source[i], to_sink[i]);
            terminal_[i] = from_source[i] - to_sink[i];
        }
    }

    Capacity solve() {
        const int n = graph_.node_count();
        for (int i = 0; i < n; ++i) {
            if (is_terminal(i) || terminal_[i] == 0) {
                continue;
            }
            in_sink_tree_[i] = terminal_[i] < 0;
            parent_[i] = kTerminal;
            timestamp_[i] = 0;
            distance_[i] = 1;
            set_active(i);
        }

        int current = -1;
        while (true) {
            int i = -1;
            if (current >= 0) {
                active_[current] = 0;
                if (parent_[current] != kNoParent) {
                    i = current;
                }
            }
            if (i < 0 && (i = next_active()) < 0) {
                break;
            }

            const int bridge = grow(i);
            ++time_;
            if (bridge != kNoArc) {
                active_[i] = 1; // keep i out of the queue while it stays current
                current = i;
                augment(bridge);
                adopt_orphans();
            } else {
                current = -1;
            }
        }
        return flow_;
    }

    bool on_sink_side(int node) const noexcept {
        return parent_[node] != kNoParent && in_sink_tree_[node] != 0;
    }

private:
    bool is_terminal(int node) const noexcept {
        return node == graph_.source() || node == graph_.sink();
    }

    void add_pair(int u, int v, Capacity forward, Capacity backward) {
        const int a = static_cast<int>(head_.size());
        head_.push_back(v);
        residual_.push_back(forward);
        sister_.push_back(a + 1);
        next_.push_back(first_[u]);
        first_[u] = a;

        head_.push_back(u);
        residual_.push_back(backward);
        sister_.push_back(a);
        next_.push_back(first_[v]);
        first_[v] = a + 1;
    }

    void set_active(int i) {
        if (!active_[i]) {
            active_[i] = 1;
            queue_.push_back(i);
        }
    }

    int next_active() {
        while (!queue_.empty()) {
            const int i = queue_.front();
            queue_.pop_front();
            active_[i] = 0;
            if (parent_[i] != kNoParent) {
                return i;
            }
        }
        return -1;
    }

    // Expands the tree owning i by one layer. Returns an arc from the source
    // tree into the sink tree when the trees touch.
    int grow(int i) {
        if (!in_sink_tree_[i]) {
            for (int a = first_[i]; a != kNoArc; a = next_[a]) {
                if (residual_[a] == 0) {
                    continue;
                }
                const int j = head_[a];
                if (parent_[j] == kNoParent) {
                    adopt(j, i, sister_[a], false);
                } else if (in_sink_tree_[j]) {
                    return a;
                } else if (timestamp_[j] <= timestamp_[i] && distance_[j] > distance_[i]) {
                    parent_[j] = sister_[a];
                    timestamp_[j] = timestamp_[i];
                    distance_[j] = distance_[i] + 1;
                }
            }
        } else {
            for (int a = first_[i]; a != kNoArc; a = next_[a]) {
                if (residual_[sister_[a]] == 0) {
                    continue;
                }
                const int j = head_[a];
                if (parent_[j] == kNoParent) {
                    adopt(j, i, sister_[a], true);
                } else if (!in_sink_tree_[j]) {
                    return sister_[a];
                } else if (timestamp_[j] <= timestamp_[i] && distance_[j] > distance_[i]) {
                    parent_[j] = sister_[a];
                    timestamp_[j] = timestamp_[i];
                    distance_[j] = distance_[i] + 1;
                }
            }
        }
        return kNoArc;
    }

    void adopt(int child, int parent_node, int arc_to_parent, bool sink_tree) {
        in_sink_tree_[child] = sink_tree ? 1 : 0;
        parent_[child] = arc_to_parent;
        timestamp_[child] = timestamp_[parent_node];
        distance_[child] = distance_[parent_node] + 1;
        set_active(child);
    }

    // Parent arcs point from a node to its parent. In the source tree flow
    // runs parent -> node (the sister arc), in the sink tree node -> parent.
    void augment(int bridge) {
        Capacity bottleneck = residual_[bridge];
        int i = head_[sister_[bridge]];
        for (int a = parent_[i]; a != kTerminal; a = parent_[i]) {
            bottleneck = std::min(bottleneck, residual_[sister_[a]]);
            i = head_[a];
        }
        bottleneck = std::min(bottleneck, terminal_[i]);
        i = head_[bridge];
        for (int a = parent_[i]; a != kTerminal; a = parent_[i]) {
            bottleneck = std::min(bottleneck, residual_[a]);
            i = head_[a];
        }
        bottleneck = std::min(bottleneck, -terminal_[i]);

        residual_[sister_[bridge]] += bottleneck;
        residual_[bridge] -= bottleneck;
        i = head_[sister_[bridge]];
        for (int a = parent_[i]; a != kTerminal; a = parent_[i]) {
            residual_[a] += bottleneck;
            residual_[sister_[a]] -= bottleneck;
            const int up = head_[a];
            if (residual_[sister_[a]] == 0) {
                make_orphan_front(i);
            }
            i = up;
        }
        terminal_[i] -= bottleneck;
        if (terminal_[i] == 0) {
            make_orphan_front(i);
        }
        i = head_[bridge];
        for (int a = parent_[i]; a != kTerminal; a = parent_[i]) {
            residual_[sister_[a]] += bottleneck;
            residual_[a] -= bottleneck;
            const int up = head_[a];
            if (residual_[a] == 0) {
                make_orphan_front(i);
            }
            i = up;
        }
        terminal_[i] += bottleneck;
        if (terminal_[i] == 0) {
            make_orphan_front(i);
        }
        flow_ += bottleneck;
    }

    void make_orphan_front(int i) {
        parent_[i] = kOrphan;
        orphans_.push_front(i);
    }
    void make_orphan_rear(int i) {
        parent_[i] = kOrphan;
        orphans_.push_back(i);
    }

    void adopt_orphans() {
        while (!orphans_.empty()) {
            const int i = orphans_.front();
            orphans_.pop_front();
            process_orphan(i, in_sink_tree_[i] != 0);
        }
    }

    // Residual capacity usable to hang `i` below the tree node at the other
    // end of arc a0 (a0 leaves i).
    Capacity link_residual(int a0, bool sink_tree) const noexcept {
        return sink_tree ? residual_[a0] : residual_[sister_[a0]];
    }

    void process_orphan(int i, bool sink_tree) {
        int best_arc = kNoArc;
        int best_distance = kInfiniteDistance;
        for (int a0 = first_[i]; a0 != kNoArc; a0 = next_[a0]) {
            if (link_residual(a0, sink_tree) == 0) {
                continue;
            }
            int j = head_[a0];
            if ((in_sink_tree_[j] != 0) != sink_tree || parent_[j] == kNoParent) {
                continue;
            }
            // Walk towards the root to see whether j still hangs off a terminal.
            int d = 0;
            while (true) {
                if (timestamp_[j] == time_) {
                    d += distance_[j];
                    break;
                }
                const int a = parent_[j];
                ++d;
                if (a == kTerminal) {
                    timestamp_[j] = time_;
                    distance_[j] = 1;
                    break;
                }
                if (a == kOrphan) {
                    d = kInfiniteDistance;
                    break;
                }
                j = head_[a];
            }
            if (d == kInfiniteDistance) {
                continue;
            }
            if (d < best_distance) {
                best_arc = a0;
                best_distance = d;
            }
            for (j = head_[a0]; timestamp_[j] != time_; j = head_[parent_[j]]) {
                timestamp_[j] = time_;
                distance_[j] = d--;
            }
        }

        if (best_arc != kNoArc) {
            parent_[i] = best_arc;
            timestamp_[i] = time_;
            distance_[i] = best_distance + 1;
            return;
        }

        parent_[i] = kNoParent;
        for (int a0 = first_[i]; a0 != kNoArc; a0 = next_[a0]) {
            const int j = head_[a0];
            if ((in_sink_tree_[j] != 0) != sink_tree || parent_[j] == kNoParent) {
                continue;
            }
            if (link_residual(a0, sink_tree) != 0) {
                set_active(j);
            }
            const int a = parent_[j];
            if (a != kTerminal && a != kOrphan && head_[a] == i) {
                make_orphan_rear(j);
            }
        }
    }

    const FlowGraph& graph_;
    Capacity flow_ = 0;
    long long time_ = 0;

    std::vector<int> first_;
    std::vector<Capacity> terminal_;
    std::vector<int> parent_;
    std::vector<std::uint8_t> in_sink_tree_;
    std::vector<std::uint8_t> active_;
    std::vector<long long> timestamp_;
    std::vector<int> distance_;

    std::vector<int> head_;
    std::vector<int> next_;
    std::vector<int> sister_;
    std::vector<Capacity> residual_;

    std::deque<int> queue_;
    std::deque<int> orphans_;
};

} // namespace

MinCut max_flow(const FlowGraph& graph) {
    TreeReuseSolver solver(graph);
    MinCut cut;
    cut.flow = solver.solve();
    cut.source_side.assign(static_cast<std::size_t>(graph.node_count()), 1);
    for (int i = 0; i < graph.node_count(); ++i) {
        if (i == graph.sink() || (i != graph.source() && solver.on_sink_side(i))) {
            cut.source_side[i] = 0;
        }
    }
    assert(cut.flow == cut_capacity(graph, cut.source_side));
    return cut;
}

Capacity cut_capacity(const FlowGraph& graph, std::span<const std::uint8_t> source_side) {
    if (source_side.size() != static_cast<std::size_t>(graph.node_count())) {
        throw ArgumentError("partition size does not match the graph");
    }
    Capacity total = 0;
    for (const FlowArc& arc : graph.arcs()) {
        if (source_side[arc.from] && !source_side[arc.to]) {
            total += arc.capacity;
        } else if (source_side[arc.to] && !source_side[arc.from]) {
            total += arc.reverse_capacity;
        }
    }
    return total;
}

} // namespace multiscopic
