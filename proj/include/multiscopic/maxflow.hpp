// SPDX-FileCopyrightText: (c) 2026 The multiscopic authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace multiscopic {

using Capacity = std::int64_t;

struct FlowArc {
    int from;
    int to;
    Capacity capacity;
    /// Capacity of the paired arc to -> from.
    Capacity reverse_capacity;
};

/// Directed graph with integer capacities and designated terminals. Node
/// ids are dense in [0, node_count).
class FlowGraph {
public:
    FlowGraph(int node_count, int source, int sink);

    /// Throws ArgumentError on unknown nodes or negative capacities.
    void add_arc(int from, int to, Capacity capacity, Capacity reverse_capacity = 0);

    int node_count() const noexcept { return node_count_; }
    int source() const noexcept { return source_; }
    int sink() const noexcept { return sink_; }
    const std::vector<FlowArc>& arcs() const noexcept { return arcs_; }

private:
    int node_count_;
    int source_;
    int sink_;
    std::vector<FlowArc> arcs_;
};

struct MinCut {
    Capacity flow = 0;
    /// 1 for nodes on the source side. Nodes that can reach neither
    /// terminal in the final residual graph are put on the source side.
    std::vector<std::uint8_t> source_side;
};

/// Exact s-t maximum flow and a minimum cut, using augmenting paths on two
/// search trees that are reused between augmentations. Deterministic for a
/// fixed arc insertion order.
MinCut max_flow(const FlowGraph& graph);

/// Total capacity of arcs leaving the source side.
Capacity cut_capacity(const FlowGraph& graph, std::span<const std::uint8_t> source_side);

} // namespace multiscopic
