#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ntnorch/scenario.hpp"
#include "ntnorch/util.hpp"

namespace ntnorch {

enum class NodeKind { leo, geo, user, ogs, dn };

const char* node_kind_name(NodeKind k);

struct NodeRecord {
    std::string id;
    NodeKind kind = NodeKind::leo;
    std::optional<int> owner;  // operator index; user/ogs/dn have none
    Vec3 position_m;
};

enum class EdgeClass { intra, inter, endpoint };

struct EdgeRecord {
    int from = -1;
    int to = -1;
    double latency_s = 0.0;
    EdgeClass cls = EdgeClass::endpoint;
};

// Feasible-link graph at one time step. Edges are directed and generated in
// symmetric pairs; adjacency lists are ordered by target node id so that all
// traversals are reproducible.
struct Snapshot {
    UtcSeconds t = 0;
    std::vector<NodeRecord> nodes;
    std::vector<EdgeRecord> edges;
    std::vector<std::vector<int>> out_edges;  // node index -> edge indices
    std::unordered_map<std::string, int> index_by_id;

    int node_index(const std::string& id) const;       // -1 when absent
    int require_node(const std::string& id) const;     // throws when absent
    bool is_satellite(int node) const;

    // Rebuilds adjacency and the id map; call after editing nodes/edges.
    void finalize();
};

// only_owner keeps just that operator's satellites (plus ground nodes) and
// wires the network within them, modelling what that fleet can build alone.
Snapshot build_snapshot(const Scenario& scn, UtcSeconds t,
                        std::optional<int> only_owner = std::nullopt);

std::vector<Snapshot> snapshot_series(const Scenario& scn, UtcSeconds t0, int step_s, int count,
                                      int threads = 1);

// Keeps operator `op`'s satellites plus all unowned ground nodes.
Snapshot restrict_to_operator(const Snapshot& s, int op);

// True iff any path connects source to dest (feasibility only, no policies).
bool has_any_route(const Snapshot& s, int source, int dest);

// Debug/plotting export: "<prefix>_nodes.csv" (id,kind,owner,x,y,z) and
// "<prefix>_edges.csv" (from,to,latency_s,class).
void export_snapshot_csv(const Snapshot& s, const std::string& path_prefix);

std::string edge_class_string(const Snapshot& s, const EdgeRecord& e);

}  // namespace ntnorch
