#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ntnorch/policy.hpp"
#include "ntnorch/topology.hpp"

namespace ntnorch {

// A simple path from source to destination with cached metrics.
struct Route {
    std::vector<int> node_seq;  // node indices, source first
    std::vector<int> edge_seq;  // edge indices, one fewer than nodes
    double latency_s = 0.0;
    int hops = 0;
    int inter_op = 0;
};

Route make_route(const Snapshot& s, std::vector<int> node_seq, std::vector<int> edge_seq);

std::vector<std::string> route_node_ids(const Snapshot& s, const Route& r);

// True iff the satellites of the route span at most one operator.
bool is_single_operator_route(const Snapshot& s, const Route& r);

// One maximal run of an operator's nodes along a route, with the links that
// enter and leave it. A run touching a single node has an empty segment.
struct Occurrence {
    std::optional<int> in_edge;
    std::optional<int> out_edge;
    std::vector<int> segment_edges;
    std::vector<int> segment_nodes;
};

// All of one operator's occurrences in one route; empty when absent.
struct OperatorSegments {
    std::vector<Occurrence> occurrences;
    bool empty() const { return occurrences.empty(); }
};

// Everything the orchestrator hands operator i: one entry per candidate
// route, aligned by route index across operators, plus the index list of the
// nonempty entries.
struct PresentationSet {
    std::vector<OperatorSegments> entries;
    std::vector<std::size_t> nonempty_indices;
};

// All simple source-dest paths satisfying the step-1 policy, ordered by the
// step-3 objective (ties by node-id sequence). The policy must carry at least
// one bound constraint unless a cap is given; single-operator routes are
// dropped when excluded. Throws std::invalid_argument on bad requests.
std::vector<Route> enumerate_candidates(const Snapshot& s, int source, int dest,
                                        const Policy& step1_policy,
                                        const PolicyLeaf& step3_objective,
                                        std::optional<std::size_t> cap,
                                        bool exclude_single_operator);

OperatorSegments decompose(const Snapshot& s, const Route& r, int op);

std::vector<PresentationSet> presentation_sets(const Snapshot& s, const std::vector<Route>& routes,
                                               int operator_count);

// End-to-end quantities of a route.
RouteView route_metrics(const Snapshot& s, const Route& r);

// The quantities operator `op` sees in its share of a route: hop count and
// latency of its own segments, inter-operator links incident to them, and the
// nodes visible to it (segment nodes plus boundary-link endpoints).
RouteView operator_view(const Snapshot& s, const OperatorSegments& segs, int op);

// Objective value of a preference leaf on a route (end-to-end scope).
double objective_value(const Snapshot& s, const PolicyLeaf& objective, const Route& r);

// Lexicographic node-id sequence order.
bool node_seq_less(const Snapshot& s, const Route& a, const Route& b);

// Deterministic route order: objective value, then node-id sequence.
bool route_less(const Snapshot& s, const PolicyLeaf& objective, const Route& a, const Route& b);

// CSV dump, one route per line: node ids, then latency_ms, hops, inter_op.
void export_routes_csv(const Snapshot& s, const std::vector<Route>& routes,
                       const std::string& path);

}  // namespace ntnorch
