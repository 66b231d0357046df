#include "ntnorch/routing.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <limits>
#include <queue>
#include <set>
#include <stdexcept>

namespace ntnorch {

Route make_route(const Snapshot& s, std::vector<int> node_seq, std::vector<int> edge_seq) {
    Route r;
    r.node_seq = std::move(node_seq);
    r.edge_seq = std::move(edge_seq);
    for (int e : r.edge_seq) {
        r.latency_s += s.edges[e].latency_s;
        if (s.edges[e].cls == EdgeClass::inter) ++r.inter_op;
    }
    r.hops = static_cast<int>(r.edge_seq.size());
    return r;
}

std::vector<std::string> route_node_ids(const Snapshot& s, const Route& r) {
    std::vector<std::string> ids;
    ids.reserve(r.node_seq.size());
    for (int v : r.node_seq) ids.push_back(s.nodes[v].id);
    return ids;
}

bool is_single_operator_route(const Snapshot& s, const Route& r) {
    int seen_owner = -1;
    for (int v : r.node_seq) {
        const auto& owner = s.nodes[v].owner;
        if (!owner) continue;
        if (seen_owner < 0) {
            seen_owner = *owner;
        } else if (*owner != seen_owner) {
            return false;
        }
    }
    return true;
}

RouteView route_metrics(const Snapshot& s, const Route& r) {
    RouteView v;
    v.latency_s = r.latency_s;
    v.hops = r.hops;
    v.inter_op = r.inter_op;
    v.nodes = route_node_ids(s, r);
    std::sort(v.nodes.begin(), v.nodes.end());
    v.scope = RouteView::Scope::end_to_end;
    return v;
}

OperatorSegments decompose(const Snapshot& s, const Route& r, int op) {
    OperatorSegments out;
    const auto& seq = r.node_seq;
    std::size_t i = 0;
    while (i < seq.size()) {
        const auto& owner = s.nodes[seq[i]].owner;
        if (!owner || *owner != op) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < seq.size()) {
            const auto& next = s.nodes[seq[j + 1]].owner;
            if (next && *next == op)
                ++j;
            else
                break;
        }
        Occurrence occ;
        if (i > 0) occ.in_edge = r.edge_seq[i - 1];
        if (j + 1 < seq.size()) occ.out_edge = r.edge_seq[j];
        occ.segment_nodes.assign(seq.begin() + i, seq.begin() + j + 1);
        occ.segment_edges.assign(r.edge_seq.begin() + i, r.edge_seq.begin() + j);
        out.occurrences.push_back(std::move(occ));
        i = j + 1;
    }
    return out;
}

std::vector<PresentationSet> presentation_sets(const Snapshot& s, const std::vector<Route>& routes,
                                               int operator_count) {
    std::vector<PresentationSet> out(operator_count);
    for (int op = 0; op < operator_count; ++op) {
        out[op].entries.reserve(routes.size());
        for (std::size_t l = 0; l < routes.size(); ++l) {
            out[op].entries.push_back(decompose(s, routes[l], op));
            if (!out[op].entries.back().empty()) out[op].nonempty_indices.push_back(l);
        }
    }
    return out;
}

RouteView operator_view(const Snapshot& s, const OperatorSegments& segs, int op) {
    RouteView v;
    v.scope = RouteView::Scope::operator_segment;
    v.scope_operator = op;
    std::vector<int> boundary;
    std::vector<int> nodes;
    for (const auto& occ : segs.occurrences) {
        v.hops += static_cast<int>(occ.segment_edges.size());
        for (int e : occ.segment_edges) v.latency_s += s.edges[e].latency_s;
        for (int n : occ.segment_nodes) nodes.push_back(n);
        if (occ.in_edge) boundary.push_back(*occ.in_edge);
        if (occ.out_edge) boundary.push_back(*occ.out_edge);
    }
    std::sort(boundary.begin(), boundary.end());
    boundary.erase(std::unique(boundary.begin(), boundary.end()), boundary.end());
    for (int e : boundary) {
        if (s.edges[e].cls == EdgeClass::inter) ++v.inter_op;
        nodes.push_back(s.edges[e].from);
        nodes.push_back(s.edges[e].to);
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    v.nodes.reserve(nodes.size());
    for (int n : nodes) v.nodes.push_back(s.nodes[n].id);
    std::sort(v.nodes.begin(), v.nodes.end());
    return v;
}

double objective_value(const Snapshot& s, const PolicyLeaf& objective, const Route& r) {
    switch (objective.kind) {
        case LeafKind::min_latency:
            return r.latency_s;
        case LeafKind::min_hops:
            return r.hops;
        case LeafKind::min_inter_op:
            return r.inter_op;
        default:
            return evaluate(objective, route_metrics(s, r));
    }
}

bool node_seq_less(const Snapshot& s, const Route& a, const Route& b) {
    std::size_t n = std::min(a.node_seq.size(), b.node_seq.size());
    for (std::size_t i = 0; i < n; ++i) {
        const std::string& ia = s.nodes[a.node_seq[i]].id;
        const std::string& ib = s.nodes[b.node_seq[i]].id;
        if (ia != ib) return ia < ib;
    }
    return a.node_seq.size() < b.node_seq.size();
}

bool route_less(const Snapshot& s, const PolicyLeaf& objective, const Route& a, const Route& b) {
    double va = objective_value(s, objective, a);
    double vb = objective_value(s, objective, b);
    if (va != vb) return va < vb;
    return node_seq_less(s, a, b);
}

namespace {

struct Bounds {
    double max_latency = std::numeric_limits<double>::infinity();
    int max_hops = std::numeric_limits<int>::max();
    int max_inter_op = std::numeric_limits<int>::max();
    std::vector<char> avoided;  // per node index
};

Bounds extract_bounds(const Snapshot& s, const Policy& p) {
    Bounds b;
    b.avoided.assign(s.nodes.size(), 0);
    for (const auto& leaf : p.leaves) {
        switch (leaf.kind) {
            case LeafKind::max_latency:
                b.max_latency = std::min(b.max_latency, leaf.bound);
                break;
            case LeafKind::max_hops:
                b.max_hops = std::min(b.max_hops, static_cast<int>(leaf.bound));
                break;
            case LeafKind::max_inter_op:
                b.max_inter_op = std::min(b.max_inter_op, static_cast<int>(leaf.bound));
                break;
            case LeafKind::avoid_nodes:
                if (leaf.weights.empty())
                    for (const auto& id : leaf.avoid) {
                        int idx = s.node_index(id);
                        if (idx >= 0) b.avoided[idx] = 1;
                    }
                break;
            default:
                break;
        }
    }
    return b;
}

// Reverse-BFS hop distances to dest (INT_MAX when unreachable).
std::vector<int> hops_to_dest(const Snapshot& s, int dest) {
    std::vector<std::vector<int>> in_adj(s.nodes.size());
    for (const auto& e : s.edges) in_adj[e.to].push_back(e.from);
    std::vector<int> dist(s.nodes.size(), std::numeric_limits<int>::max());
    std::deque<int> queue{dest};
    dist[dest] = 0;
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int u : in_adj[v]) {
            if (dist[u] == std::numeric_limits<int>::max()) {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }
    return dist;
}

// Reverse-Dijkstra latency lower bounds to dest.
std::vector<double> latency_to_dest(const Snapshot& s, int dest) {
    std::vector<std::vector<std::pair<int, double>>> in_adj(s.nodes.size());
    for (const auto& e : s.edges) in_adj[e.to].push_back({e.from, e.latency_s});
    std::vector<double> dist(s.nodes.size(), std::numeric_limits<double>::infinity());
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[dest] = 0.0;
    heap.push({0.0, dest});
    while (!heap.empty()) {
        auto [d, v] = heap.top();
        heap.pop();
        if (d > dist[v]) continue;
        for (auto [u, w] : in_adj[v]) {
            if (dist[v] + w < dist[u]) {
                dist[u] = dist[v] + w;
                heap.push({dist[u], u});
            }
        }
    }
    return dist;
}

struct Enumerator {
    const Snapshot& snap;
    const Policy& policy;
    int dest;
    bool exclude_single_operator;
    Bounds bounds;
    std::vector<int> hop_lb{};
    std::vector<double> lat_lb{};
    bool use_lat_lb = false;

    std::vector<int> node_stack{};
    std::vector<int> edge_stack{};
    std::vector<char> on_path{};
    double latency = 0.0;
    int inter_op = 0;

    std::vector<Route> found{};

    void dfs(int v) {
        if (v == dest) {
            Route r = make_route(snap, node_stack, edge_stack);
            if (exclude_single_operator && is_single_operator_route(snap, r)) return;
            if (!satisfies(policy, route_metrics(snap, r))) return;
            found.push_back(std::move(r));
            return;
        }
        int depth = static_cast<int>(edge_stack.size());
        for (int e : snap.out_edges[v]) {
            const EdgeRecord& edge = snap.edges[e];
            int w = edge.to;
            if (on_path[w] || bounds.avoided[w]) continue;
            if (hop_lb[w] == std::numeric_limits<int>::max()) continue;
            if (depth + 1 + hop_lb[w] > bounds.max_hops) continue;
            int io = inter_op + (edge.cls == EdgeClass::inter ? 1 : 0);
            if (io > bounds.max_inter_op) continue;
            double lat = latency + edge.latency_s;
            // Lower-bound pruning with a whisper of slack so float rounding
            // can never discard a boundary-feasible route.
            if (use_lat_lb
                && lat + lat_lb[w] > bounds.max_latency * (1.0 + 1e-12) + 1e-12)
                continue;

            on_path[w] = 1;
            node_stack.push_back(w);
            edge_stack.push_back(e);
            double saved_lat = latency;
            int saved_io = inter_op;
            latency = lat;
            inter_op = io;

            dfs(w);

            latency = saved_lat;
            inter_op = saved_io;
            edge_stack.pop_back();
            node_stack.pop_back();
            on_path[w] = 0;
        }
    }
};

}  // namespace

std::vector<Route> enumerate_candidates(const Snapshot& s, int source, int dest,
                                        const Policy& step1_policy,
                                        const PolicyLeaf& step3_objective,
                                        std::optional<std::size_t> cap,
                                        bool exclude_single_operator) {
    if (source < 0 || source >= static_cast<int>(s.nodes.size()) || dest < 0
        || dest >= static_cast<int>(s.nodes.size()))
        throw std::invalid_argument("enumerate_candidates: source/dest not in snapshot");
    if (source == dest)
        throw std::invalid_argument("enumerate_candidates: source and destination coincide");
    bool bounded = std::any_of(step1_policy.leaves.begin(), step1_policy.leaves.end(),
                               [](const PolicyLeaf& l) {
                                   return l.kind == LeafKind::max_hops
                                          || l.kind == LeafKind::max_latency
                                          || l.kind == LeafKind::max_inter_op;
                               });
    if (!bounded && !cap)
        throw std::invalid_argument(
            "enumerate_candidates: refusing unbounded enumeration (no bound constraint, no cap)");

    Enumerator en{s, step1_policy, dest, exclude_single_operator, extract_bounds(s, step1_policy),
                  hops_to_dest(s, dest)};
    if (en.bounds.max_latency < std::numeric_limits<double>::infinity()) {
        en.lat_lb = latency_to_dest(s, dest);
        en.use_lat_lb = true;
    }
    if (en.bounds.avoided[source] || en.bounds.avoided[dest]) return {};

    en.on_path.assign(s.nodes.size(), 0);
    en.on_path[source] = 1;
    en.node_stack.push_back(source);
    en.dfs(source);

    std::vector<double> value(en.found.size());
    for (std::size_t i = 0; i < en.found.size(); ++i)
        value[i] = objective_value(s, step3_objective, en.found[i]);
    std::vector<std::size_t> order(en.found.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (value[a] != value[b]) return value[a] < value[b];
        return node_seq_less(s, en.found[a], en.found[b]);
    });
    std::vector<Route> out;
    out.reserve(cap ? std::min(*cap, order.size()) : order.size());
    for (std::size_t i : order) {
        if (cap && out.size() == *cap) break;
        out.push_back(std::move(en.found[i]));
    }
    return out;
}

void export_routes_csv(const Snapshot& s, const std::vector<Route>& routes,
                       const std::string& path) {
    std::ofstream out(path);
    for (const auto& r : routes) {
        for (int v : r.node_seq) out << s.nodes[v].id << ',';
        out << fmt_fixed(r.latency_s * 1000.0, 6) << ',' << r.hops << ',' << r.inter_op << '\n';
    }
}

}  // namespace ntnorch
