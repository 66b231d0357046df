#include <doctest.h>

#include <algorithm>
#include <set>

#include "ntnorch/routing.hpp"
#include "support/synthetic.hpp"

using namespace ntnorch;
using namespace ntnorch::testing;

namespace {

// user(0), dn(1), a(2), b(3): diamond user->{a,b}->dn.
Snapshot diamond(double lat_a = 0.003, double lat_b = 0.005) {
    return make_snapshot(
        {
            {"User", NodeKind::user, std::nullopt},
            {"DN", NodeKind::dn, std::nullopt},
            {"A1", NodeKind::leo, 0},
            {"B1", NodeKind::leo, 1},
        },
        {{0, 2, 0.001}, {0, 3, 0.001}, {2, 1, lat_a}, {3, 1, lat_b}, {2, 3, 0.001}});
}

std::set<std::vector<int>> node_seq_set(const std::vector<Route>& routes) {
    std::set<std::vector<int>> out;
    for (const auto& r : routes) out.insert(r.node_seq);
    return out;
}

}  // namespace

TEST_CASE("diamond graph enumeration") {
    Snapshot s = diamond();
    auto routes = enumerate_candidates(s, 0, 1, Policy::max_hops(2),
                                       PolicyLeaf{LeafKind::min_latency}, std::nullopt, false);
    CHECK(routes.size() == 2);
    // Ascending objective order.
    CHECK(routes[0].latency_s <= routes[1].latency_s);
    for (const auto& r : routes) {
        CHECK(r.hops == 2);
        CHECK(r.node_seq.front() == 0);
        CHECK(r.node_seq.back() == 1);
    }

    // Hop bound 3 admits the two 3-hop detours as well.
    auto more = enumerate_candidates(s, 0, 1, Policy::max_hops(3),
                                     PolicyLeaf{LeafKind::min_latency}, std::nullopt, false);
    CHECK(more.size() == 4);
}

TEST_CASE("single-operator exclusion") {
    Snapshot s = make_snapshot(
        {
            {"User", NodeKind::user, std::nullopt},
            {"DN", NodeKind::dn, std::nullopt},
            {"A1", NodeKind::leo, 0},
            {"A2", NodeKind::leo, 0},
        },
        {{0, 2, 0.001}, {2, 3, 0.001}, {3, 1, 0.001}});
    auto without = enumerate_candidates(s, 0, 1, Policy::max_hops(5),
                                        PolicyLeaf{LeafKind::min_latency}, std::nullopt, true);
    CHECK(without.empty());
    auto with = enumerate_candidates(s, 0, 1, Policy::max_hops(5),
                                     PolicyLeaf{LeafKind::min_latency}, std::nullopt, false);
    CHECK(with.size() == 1);
}

TEST_CASE("enumeration rejects bad requests") {
    Snapshot s = diamond();
    // Coincident endpoints.
    CHECK_THROWS_AS(enumerate_candidates(s, 0, 0, Policy::max_hops(3),
                                         PolicyLeaf{LeafKind::min_latency}, std::nullopt, false),
                    std::invalid_argument);
    // Unbounded: no bound constraint and no cap.
    CHECK_THROWS_AS(enumerate_candidates(s, 0, 1, Policy::phi(),
                                         PolicyLeaf{LeafKind::min_latency}, std::nullopt, false),
                    std::invalid_argument);
    // A cap alone makes the request acceptable.
    CHECK_NOTHROW(enumerate_candidates(s, 0, 1, Policy::phi(),
                                       PolicyLeaf{LeafKind::min_latency}, std::size_t{10}, false));
    // Missing nodes.
    CHECK_THROWS_AS(enumerate_candidates(s, 0, 99, Policy::max_hops(3),
                                         PolicyLeaf{LeafKind::min_latency}, std::nullopt, false),
                    std::invalid_argument);
}

TEST_CASE("cap keeps the objective-best routes") {
    Snapshot s = diamond();
    auto capped = enumerate_candidates(s, 0, 1, Policy::max_hops(3),
                                       PolicyLeaf{LeafKind::min_latency}, std::size_t{2}, false);
    auto full = enumerate_candidates(s, 0, 1, Policy::max_hops(3),
                                     PolicyLeaf{LeafKind::min_latency}, std::nullopt, false);
    REQUIRE(capped.size() == 2);
    CHECK(capped[0].node_seq == full[0].node_seq);
    CHECK(capped[1].node_seq == full[1].node_seq);
}

TEST_CASE("oracle equivalence on random graphs") {
    SplitMix64 rng(1234);
    for (int instance = 0; instance < 30; ++instance) {
        int sats = 4 + static_cast<int>(rng.next_below(7));
        double density = 0.3 + 0.4 * rng.next_double();
        Snapshot s = random_snapshot(rng, sats, 2 + static_cast<int>(rng.next_below(2)), density);
        int max_hops = 3 + static_cast<int>(rng.next_below(4));
        bool exclude = rng.next() % 2 == 0;
        Policy policy = Policy::max_hops(max_hops);

        auto got = enumerate_candidates(s, 0, 1, policy, PolicyLeaf{LeafKind::min_latency},
                                        std::nullopt, exclude);
        auto want = oracle_simple_paths(s, 0, 1, policy, exclude);
        std::set<std::vector<int>> want_set(want.begin(), want.end());
        CHECK(node_seq_set(got) == want_set);
    }
}

TEST_CASE("oracle equivalence with latency and avoid constraints") {
    SplitMix64 rng(777);
    for (int instance = 0; instance < 30; ++instance) {
        Snapshot s = random_snapshot(rng, 8, 2, 0.5);
        Policy policy = Policy::max_hops(5)
                            .and_with(Policy::max_latency(0.02 + 0.03 * rng.next_double()))
                            .and_with(Policy::avoid({"S0", "S3"}));
        auto got = enumerate_candidates(s, 0, 1, policy, PolicyLeaf{LeafKind::min_latency},
                                        std::nullopt, true);
        auto want = oracle_simple_paths(s, 0, 1, policy, true);
        std::set<std::vector<int>> want_set(want.begin(), want.end());
        CHECK(node_seq_set(got) == want_set);
    }
}

TEST_CASE("hop-bound monotonicity") {
    SplitMix64 rng(555);
    for (int instance = 0; instance < 20; ++instance) {
        Snapshot s = random_snapshot(rng, 8, 2, 0.5);
        auto small = node_seq_set(enumerate_candidates(
            s, 0, 1, Policy::max_hops(4), PolicyLeaf{LeafKind::min_latency}, std::nullopt, false));
        auto large = node_seq_set(enumerate_candidates(
            s, 0, 1, Policy::max_hops(5), PolicyLeaf{LeafKind::min_latency}, std::nullopt, false));
        for (const auto& r : small) CHECK(large.count(r) == 1);
    }
}

TEST_CASE("decomposition of a two-operator route") {
    // User -> B1 -> A1 -> A2 -> A3 -> OGS -> DN
    Snapshot s = make_snapshot(
        {
            {"User", NodeKind::user, std::nullopt},
            {"OGS", NodeKind::ogs, std::nullopt},
            {"DN", NodeKind::dn, std::nullopt},
            {"B1", NodeKind::leo, 1},
            {"A1", NodeKind::leo, 0},
            {"A2", NodeKind::leo, 0},
            {"A3", NodeKind::leo, 0},
        },
        {{0, 3, 0.001}, {3, 4, 0.002}, {4, 5, 0.003}, {5, 6, 0.004}, {6, 1, 0.005}, {1, 2, 0.0}});

    std::vector<int> nodes{0, 3, 4, 5, 6, 1, 2};
    std::vector<int> edges;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        bool found = false;
        for (int e : s.out_edges[nodes[i]])
            if (s.edges[e].to == nodes[i + 1]) {
                edges.push_back(e);
                found = true;
                break;
            }
        REQUIRE(found);
    }
    Route r = make_route(s, nodes, edges);
    CHECK(r.hops == 6);
    CHECK(r.inter_op == 1);  // B1 -> A1

    OperatorSegments a = decompose(s, r, 0);
    REQUIRE(a.occurrences.size() == 1);
    const auto& occ = a.occurrences[0];
    REQUIRE(occ.in_edge.has_value());
    CHECK(s.edges[*occ.in_edge].from == 3);  // B1 -> A1
    CHECK(occ.segment_edges.size() == 2);    // A1->A2, A2->A3
    REQUIRE(occ.out_edge.has_value());
    CHECK(s.edges[*occ.out_edge].to == 1);   // A3 -> OGS

    OperatorSegments b = decompose(s, r, 1);
    REQUIRE(b.occurrences.size() == 1);
    CHECK(b.occurrences[0].segment_edges.empty());  // single node: empty segment
    CHECK(b.occurrences[0].segment_nodes.size() == 1);

    // Operator views.
    RouteView va = operator_view(s, a, 0);
    CHECK(va.hops == 2);
    CHECK(va.latency_s == doctest::Approx(0.007));
    CHECK(va.inter_op == 1);
    RouteView vb = operator_view(s, b, 1);
    CHECK(vb.hops == 0);
    CHECK(vb.inter_op == 1);
}

TEST_CASE("multiple occurrences reconstruct the route") {
    // User -> A1 -> B1 -> A2 -> B2 -> OGS -> DN : A and B occur twice each.
    Snapshot s = make_snapshot(
        {
            {"User", NodeKind::user, std::nullopt},
            {"OGS", NodeKind::ogs, std::nullopt},
            {"DN", NodeKind::dn, std::nullopt},
            {"A1", NodeKind::leo, 0},
            {"B1", NodeKind::leo, 1},
            {"A2", NodeKind::leo, 0},
            {"B2", NodeKind::leo, 1},
        },
        {{0, 3, 0.001}, {3, 4, 0.001}, {4, 5, 0.001}, {5, 6, 0.001}, {6, 1, 0.001}, {1, 2, 0.0}});
    auto routes = enumerate_candidates(s, 0, 2, Policy::max_hops(6),
                                       PolicyLeaf{LeafKind::min_latency}, std::nullopt, true);
    REQUIRE(routes.size() == 1);
    const Route& r = routes[0];
    CHECK(r.inter_op == 3);

    OperatorSegments a = decompose(s, r, 0);
    CHECK(a.occurrences.size() == 2);
    OperatorSegments b = decompose(s, r, 1);
    CHECK(b.occurrences.size() == 2);

    // Stitching all operators' occurrences in route order reproduces the
    // route's satellite positions exactly.
    std::vector<char> covered(r.node_seq.size(), 0);
    covered.front() = covered.back() = 1;  // user / dn endpoints
    for (std::size_t i = 0; i < r.node_seq.size(); ++i)
        if (!s.nodes[r.node_seq[i]].owner) covered[i] = 1;
    for (int op : {0, 1})
        for (const auto& occ : decompose(s, r, op).occurrences)
            for (int v : occ.segment_nodes)
                for (std::size_t i = 0; i < r.node_seq.size(); ++i)
                    if (r.node_seq[i] == v) covered[i] = 1;
    CHECK(std::all_of(covered.begin(), covered.end(), [](char c) { return c == 1; }));

    // Inter-operator boundary links counted once across operators equal the
    // route's inter-op metric.
    std::set<int> inter_links;
    for (int op : {0, 1})
        for (const auto& occ : decompose(s, r, op).occurrences) {
            if (occ.in_edge && s.edges[*occ.in_edge].cls == EdgeClass::inter)
                inter_links.insert(*occ.in_edge);
            if (occ.out_edge && s.edges[*occ.out_edge].cls == EdgeClass::inter)
                inter_links.insert(*occ.out_edge);
        }
    CHECK(static_cast<int>(inter_links.size()) == r.inter_op);
}

TEST_CASE("presentation sets align by route index") {
    Snapshot s = diamond();
    auto routes = enumerate_candidates(s, 0, 1, Policy::max_hops(2),
                                       PolicyLeaf{LeafKind::min_latency}, std::nullopt, false);
    REQUIRE(routes.size() == 2);
    auto pres = presentation_sets(s, routes, 2);
    REQUIRE(pres.size() == 2);
    CHECK(pres[0].entries.size() == 2);
    CHECK(pres[1].entries.size() == 2);
    // Each 2-hop route passes through exactly one satellite, so each operator
    // is present in exactly one of them.
    CHECK(pres[0].nonempty_indices.size() == 1);
    CHECK(pres[1].nonempty_indices.size() == 1);

    auto empty = presentation_sets(s, {}, 2);
    CHECK(empty[0].entries.empty());
    CHECK(empty[1].entries.empty());
}

TEST_CASE("route metrics") {
    Snapshot s = diamond();
    auto routes = enumerate_candidates(s, 0, 1, Policy::max_hops(2),
                                       PolicyLeaf{LeafKind::min_latency}, std::nullopt, false);
    RouteView v = route_metrics(s, routes[0]);
    CHECK(v.hops == 2);
    CHECK(v.inter_op == 0);
    CHECK(v.latency_s == doctest::Approx(0.004));
    CHECK(v.nodes.size() == 3);
    CHECK(v.scope == RouteView::Scope::end_to_end);

    // Property: random-route metrics equal recomputation from edges.
    SplitMix64 rng(9);
    for (int i = 0; i < 20; ++i) {
        Snapshot g = random_snapshot(rng, 8, 3, 0.5);
        auto rs = enumerate_candidates(g, 0, 1, Policy::max_hops(5),
                                       PolicyLeaf{LeafKind::min_latency}, std::nullopt, false);
        for (const auto& r : rs) {
            double lat = 0.0;
            int inter = 0;
            for (int e : r.edge_seq) {
                lat += g.edges[e].latency_s;
                inter += g.edges[e].cls == EdgeClass::inter ? 1 : 0;
            }
            CHECK(r.latency_s == doctest::Approx(lat));
            CHECK(r.inter_op == inter);
            CHECK(r.hops == static_cast<int>(r.edge_seq.size()));
        }
    }
}
