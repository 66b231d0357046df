#include "ntnorch/topology.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <limits>
#include <set>
#include <tuple>
#include <stdexcept>

#include "ntnorch/constants.hpp"
#include "ntnorch/geometry.hpp"
#include "ntnorch/linkbudget.hpp"

namespace ntnorch {

const char* node_kind_name(NodeKind k) {
    switch (k) {
        case NodeKind::leo: return "leo";
        case NodeKind::geo: return "geo";
        case NodeKind::user: return "user";
        case NodeKind::ogs: return "ogs";
        case NodeKind::dn: return "dn";
    }
    return "?";
}

int Snapshot::node_index(const std::string& id) const {
    auto it = index_by_id.find(id);
    return it == index_by_id.end() ? -1 : it->second;
}

int Snapshot::require_node(const std::string& id) const {
    int idx = node_index(id);
    if (idx < 0) throw std::invalid_argument("unknown node id: '" + id + "'");
    return idx;
}

bool Snapshot::is_satellite(int node) const {
    NodeKind k = nodes[node].kind;
    return k == NodeKind::leo || k == NodeKind::geo;
}

void Snapshot::finalize() {
    index_by_id.clear();
    for (std::size_t i = 0; i < nodes.size(); ++i)
        index_by_id[nodes[i].id] = static_cast<int>(i);
    out_edges.assign(nodes.size(), {});
    for (std::size_t e = 0; e < edges.size(); ++e)
        out_edges[edges[e].from].push_back(static_cast<int>(e));
    for (auto& adj : out_edges) {
        std::sort(adj.begin(), adj.end(), [this](int a, int b) {
            return nodes[edges[a].to].id < nodes[edges[b].to].id;
        });
    }
}

namespace {

NodeKind kind_of(CatalogEntry::Kind k) {
    switch (k) {
        case CatalogEntry::Kind::leo: return NodeKind::leo;
        case CatalogEntry::Kind::geo: return NodeKind::geo;
        case CatalogEntry::Kind::user: return NodeKind::user;
        case CatalogEntry::Kind::ogs: return NodeKind::ogs;
        case CatalogEntry::Kind::dn: return NodeKind::dn;
    }
    return NodeKind::leo;
}

EdgeClass classify(const NodeRecord& a, const NodeRecord& b) {
    if (!a.owner || !b.owner) return EdgeClass::endpoint;
    return *a.owner == *b.owner ? EdgeClass::intra : EdgeClass::inter;
}

LinkConfig::TxRx node_txrx(const LinkConfig& lc, NodeKind k) {
    return k == NodeKind::geo ? lc.geo : lc.leo;
}

// Optical feasibility for a satellite-satellite or satellite-OGS pair, with
// every direction that has transmit parameters required to close the budget.
bool optical_pair_feasible(const Scenario& scn, const NodeRecord& a, const NodeRecord& b,
                           bool visible, double dist) {
    const LinkConfig& lc = scn.links;
    LinkClassRules rules;
    rules.link_class = LinkClass::optical;
    rules.required_rx_power_dbm = lc.required_rx_power_dbm;
    bool touches_geo = a.kind == NodeKind::geo || b.kind == NodeKind::geo;
    rules.distance_threshold_m = (touches_geo && lc.geo_distance_unlimited)
                                     ? std::numeric_limits<double>::infinity()
                                     : lc.distance_threshold_m;
    LinkGeometry geom{visible, dist};

    auto direction_ok = [&](NodeKind tx, NodeKind rx) {
        LinkBudgetParams p;
        LinkConfig::TxRx t = node_txrx(lc, tx);
        p.transmit_power_dbm = t.pt_dbm;
        p.tx_gain_dbi = t.gt_dbi;
        p.rx_gain_dbi = rx == NodeKind::ogs ? lc.ogs_gr_dbi : node_txrx(lc, rx).gr_dbi;
        p.other_losses_db = lc.other_losses_db;
        p.carrier = Carrier::optical(lc.wavelength_m());
        return link_feasible(rules, p, std::nullopt, geom);
    };

    if (a.kind == NodeKind::ogs) return direction_ok(b.kind, a.kind);
    if (b.kind == NodeKind::ogs) return direction_ok(a.kind, b.kind);
    return direction_ok(a.kind, b.kind) && direction_ok(b.kind, a.kind);
}

// User-satellite attachment. RF by nature; the CNR condition only applies
// when the scenario configures the RF parameters, otherwise attachment is
// purely geometric (visibility + distance threshold).
bool user_link_feasible(const Scenario& scn, const NodeRecord& sat, bool visible, double dist) {
    const LinkConfig& lc = scn.links;
    if (!visible || dist > lc.distance_threshold_m) return false;
    if (!lc.user_rf) return true;
    LinkClassRules rules;
    rules.link_class = LinkClass::rf;
    rules.distance_threshold_m = lc.distance_threshold_m;
    rules.required_cnr_db = lc.user_rf->required_cnr_db;
    LinkBudgetParams p;
    p.transmit_power_dbm = lc.user_rf->pt_dbm;
    p.tx_gain_dbi = lc.user_rf->gt_dbi;
    p.rx_gain_dbi = lc.user_rf->gr_dbi;
    p.other_losses_db = 0.0;
    p.carrier = Carrier::rf(lc.user_rf->frequency_hz);
    (void)sat;
    return link_feasible(rules, p, RfNoiseParams{lc.user_rf->noise_temp_k, lc.user_rf->bandwidth_hz},
                         LinkGeometry{visible, dist});
}

}  // namespace

Snapshot build_snapshot(const Scenario& scn, UtcSeconds t, std::optional<int> only_owner) {
    Snapshot snap;
    snap.t = t;

    EarthRotation rot = scn.earth_rotation();
    double td = static_cast<double>(t);
    auto catalog = build_catalog(scn);
    snap.nodes.reserve(catalog.size());
    for (const auto& entry : catalog) {
        if (only_owner && entry.owner && *entry.owner != *only_owner) continue;
        NodeRecord n;
        n.id = entry.id;
        n.kind = kind_of(entry.kind);
        n.owner = entry.owner;
        if (const auto* e = std::get_if<OrbitElements>(&entry.source)) {
            n.position_m = propagate_orbit(*e, td).r_m;
        } else if (const auto* g = std::get_if<GeoSlot>(&entry.source)) {
            n.position_m = geo_position(*g, rot, td).r_m;
        } else {
            n.position_m = site_position(std::get<GroundSite>(entry.source), rot, td).r_m;
        }
        snap.nodes.push_back(std::move(n));
    }

    const LinkConfig& lc = scn.links;
    double occlusion = constants::earth_radius_m + lc.occlusion_margin_m;

    auto add_pair = [&](int i, int j, double dist) {
        EdgeClass cls = classify(snap.nodes[i], snap.nodes[j]);
        double lat = dist / constants::speed_of_light_m_s;
        snap.edges.push_back({i, j, lat, cls});
        snap.edges.push_back({j, i, lat, cls});
    };

    int user_idx = -1, ogs_idx = -1, dn_idx = -1;
    for (std::size_t i = 0; i < snap.nodes.size(); ++i) {
        if (snap.nodes[i].kind == NodeKind::user) user_idx = static_cast<int>(i);
        if (snap.nodes[i].kind == NodeKind::ogs) ogs_idx = static_cast<int>(i);
        if (snap.nodes[i].kind == NodeKind::dn) dn_idx = static_cast<int>(i);
    }

    int n = static_cast<int>(snap.nodes.size());
    int nearest_sat = -1;
    double nearest_dist = std::numeric_limits<double>::infinity();
    // Feasible satellite pairs, deferred so the terminal caps can thin them.
    std::vector<std::tuple<int, int, double>> leo_pairs, geo_pairs;
    for (int i = 0; i < n; ++i) {
        const NodeRecord& a = snap.nodes[i];
        for (int j = i + 1; j < n; ++j) {
            const NodeRecord& b = snap.nodes[j];
            bool a_sat = a.kind == NodeKind::leo || a.kind == NodeKind::geo;
            bool b_sat = b.kind == NodeKind::leo || b.kind == NodeKind::geo;
            double dist = distance_m(a.position_m, b.position_m);

            if (a_sat && b_sat) {
                bool visible = line_of_sight({a.position_m, td}, {b.position_m, td}, occlusion);
                if (optical_pair_feasible(scn, a, b, visible, dist)) {
                    if (a.kind == NodeKind::leo && b.kind == NodeKind::leo)
                        leo_pairs.push_back({i, j, dist});
                    else if (a.kind == NodeKind::geo && b.kind == NodeKind::geo)
                        add_pair(i, j, dist);
                    else
                        geo_pairs.push_back({i, j, dist});
                }
                continue;
            }
            if (!a_sat && !b_sat) continue;  // ground-ground handled explicitly below
            // Ground-space pairs use the elevation rule; the DN has no space links.
            const NodeRecord* site = a_sat ? &b : &a;
            const NodeRecord* sat = a_sat ? &a : &b;
            if (site->kind == NodeKind::dn) continue;
            bool visible = elevation_deg({site->position_m, td}, {sat->position_m, td})
                           >= lc.min_elevation_deg;
            if (site->kind == NodeKind::ogs) {
                if (optical_pair_feasible(scn, *site, *sat, visible, dist)) add_pair(i, j, dist);
            } else {  // user
                if (user_link_feasible(scn, *sat, visible, dist)) {
                    if (lc.user_attachment == LinkConfig::UserAttachment::all_visible) {
                        add_pair(i, j, dist);
                    } else if (dist < nearest_dist) {
                        nearest_dist = dist;
                        nearest_sat = a_sat ? i : j;
                    }
                }
            }
        }
    }
    // Each satellite proposes its k nearest feasible partners in the pool; a
    // link forms when both sides propose it.
    auto mutual_nearest = [&](const std::vector<std::tuple<int, int, double>>& pairs, int k) {
        if (k <= 0) {
            for (auto [i, j, dist] : pairs) add_pair(i, j, dist);
            return;
        }
        std::vector<std::vector<std::pair<double, int>>> cand(n);
        for (auto [i, j, dist] : pairs) {
            cand[i].push_back({dist, j});
            cand[j].push_back({dist, i});
        }
        std::vector<std::set<int>> proposes(n);
        for (int i = 0; i < n; ++i) {
            auto& c = cand[i];
            std::sort(c.begin(), c.end(), [&](const auto& x, const auto& y) {
                if (x.first != y.first) return x.first < y.first;
                return snap.nodes[x.second].id < snap.nodes[y.second].id;
            });
            for (std::size_t p = 0; p < c.size() && p < static_cast<std::size_t>(k); ++p)
                proposes[i].insert(c[p].second);
        }
        for (auto [i, j, dist] : pairs)
            if (proposes[i].count(j) && proposes[j].count(i)) add_pair(i, j, dist);
    };
    mutual_nearest(leo_pairs, lc.max_isl_neighbors);
    mutual_nearest(geo_pairs, lc.max_geo_neighbors);

    if (lc.user_attachment == LinkConfig::UserAttachment::nearest && nearest_sat >= 0)
        add_pair(std::min(user_idx, nearest_sat), std::max(user_idx, nearest_sat), nearest_dist);

    if (ogs_idx >= 0 && dn_idx >= 0)
        add_pair(std::min(ogs_idx, dn_idx), std::max(ogs_idx, dn_idx),
                 distance_m(snap.nodes[ogs_idx].position_m, snap.nodes[dn_idx].position_m));

    snap.finalize();
    return snap;
}

std::vector<Snapshot> snapshot_series(const Scenario& scn, UtcSeconds t0, int step_s, int count,
                                      int threads) {
    if (count < 1) throw std::invalid_argument("snapshot_series: count must be >= 1");
    if (step_s <= 0) throw std::invalid_argument("snapshot_series: step_s must be > 0");
    std::vector<Snapshot> out(count);
    parallel_for(static_cast<std::size_t>(count), threads, [&](std::size_t k) {
        out[k] = build_snapshot(scn, t0 + static_cast<UtcSeconds>(k) * step_s);
    });
    return out;
}

Snapshot restrict_to_operator(const Snapshot& s, int op) {
    bool known = std::any_of(s.nodes.begin(), s.nodes.end(),
                             [&](const NodeRecord& n) { return n.owner && *n.owner == op; });
    if (!known) throw std::invalid_argument("restrict_to_operator: no nodes owned by operator "
                                            + std::to_string(op));
    Snapshot out;
    out.t = s.t;
    std::vector<int> remap(s.nodes.size(), -1);
    for (std::size_t i = 0; i < s.nodes.size(); ++i) {
        const NodeRecord& nd = s.nodes[i];
        if (!nd.owner || *nd.owner == op) {
            remap[i] = static_cast<int>(out.nodes.size());
            out.nodes.push_back(nd);
        }
    }
    for (const EdgeRecord& e : s.edges) {
        if (remap[e.from] < 0 || remap[e.to] < 0) continue;
        EdgeRecord copy = e;
        copy.from = remap[e.from];
        copy.to = remap[e.to];
        out.edges.push_back(copy);
    }
    out.finalize();
    return out;
}

bool has_any_route(const Snapshot& s, int source, int dest) {
    if (source == dest) return true;
    std::vector<char> seen(s.nodes.size(), 0);
    std::deque<int> queue{source};
    seen[source] = 1;
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int e : s.out_edges[v]) {
            int w = s.edges[e].to;
            if (w == dest) return true;
            if (!seen[w]) {
                seen[w] = 1;
                queue.push_back(w);
            }
        }
    }
    return false;
}

std::string edge_class_string(const Snapshot& s, const EdgeRecord& e) {
    switch (e.cls) {
        case EdgeClass::endpoint:
            return "endpoint";
        case EdgeClass::intra:
            return "intra(" + operator_label(*s.nodes[e.from].owner) + ")";
        case EdgeClass::inter:
            return "inter(" + operator_label(*s.nodes[e.from].owner) + ","
                   + operator_label(*s.nodes[e.to].owner) + ")";
    }
    return "?";
}

void export_snapshot_csv(const Snapshot& s, const std::string& path_prefix) {
    std::ofstream nodes(path_prefix + "_nodes.csv");
    nodes << "id,kind,owner,x,y,z\n";
    for (const auto& n : s.nodes) {
        nodes << n.id << ',' << node_kind_name(n.kind) << ','
              << (n.owner ? operator_label(*n.owner) : "") << ',' << fmt_fixed(n.position_m.x, 3)
              << ',' << fmt_fixed(n.position_m.y, 3) << ',' << fmt_fixed(n.position_m.z, 3) << '\n';
    }
    std::ofstream edges(path_prefix + "_edges.csv");
    edges << "from,to,latency_s,class\n";
    for (const auto& e : s.edges) {
        edges << s.nodes[e.from].id << ',' << s.nodes[e.to].id << ',' << fmt_fixed(e.latency_s, 9)
              << ',' << edge_class_string(s, e) << '\n';
    }
}

}  // namespace ntnorch
