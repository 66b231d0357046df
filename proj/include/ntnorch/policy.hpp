#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace ntnorch {

// Policy leaves. min_* leaves are preferences (they carry an evaluation
// function); max_* leaves are bound constraints; avoid_nodes is a hard
// constraint by default and a weighted preference when weights are given.
enum class LeafKind {
    min_latency,
    max_latency,
    min_hops,
    max_hops,
    min_inter_op,
    max_inter_op,
    avoid_nodes,
};

const char* leaf_kind_name(LeafKind k);
LeafKind leaf_kind_from_name(const std::string& name);

struct PolicyLeaf {
    LeafKind kind;
    double bound = 0.0;                      // max_latency (seconds), max_hops, max_inter_op
    std::vector<std::string> avoid{};        // avoid_nodes: sorted, unique
    std::map<std::string, double> weights{}; // nonempty => weighted preference form

    bool is_preference() const;
    bool is_constraint() const;

    bool operator==(const PolicyLeaf&) const = default;
};

// A conjunction of leaves; the empty conjunction is the accept-everything
// policy (Phi). Nested conjunctions flatten on construction, which is lossless
// because conjunction is associative and commutative.
struct Policy {
    std::vector<PolicyLeaf> leaves;

    bool is_phi() const { return leaves.empty(); }
    bool has_preference_leaf() const;
    bool has_constraint_leaf() const;
    const PolicyLeaf* find(LeafKind kind) const;

    static Policy phi() { return {}; }
    static Policy min_latency();
    static Policy min_hops();
    static Policy min_inter_op();
    static Policy max_latency(double seconds);
    static Policy max_hops(int n);
    static Policy max_inter_op(int n);
    static Policy avoid(std::vector<std::string> node_ids);

    Policy and_with(const Policy& other) const;

    bool operator==(const Policy&) const = default;
};

// Throws std::invalid_argument on invariant violations (bounds, empty avoid
// sets, non-positive weights).
void validate(const Policy& p);

// The quantities a policy evaluates over, either for a whole route or for one
// operator's share of it.
struct RouteView {
    double latency_s = 0.0;
    int hops = 0;
    int inter_op = 0;
    std::vector<std::string> nodes;  // sorted, unique

    enum class Scope { end_to_end, operator_segment };
    Scope scope = Scope::end_to_end;
    int scope_operator = -1;

    bool uses_node(const std::string& id) const;
};

// Value of a preference leaf on a view. Constraint-only leaves throw
// std::invalid_argument.
double evaluate(const PolicyLeaf& leaf, const RouteView& view);

bool satisfies(const Policy& p, const RouteView& view);

// Constraint filtering followed by preference selection: views failing any
// constraint leaf are dropped, then each preference leaf keeps only the views
// attaining its minimum over the constraint survivors; the kept sets are
// intersected, so the result does not depend on leaf order. Returns indices
// into `presented`, ascending.
std::vector<std::size_t> filter_candidates(const Policy& p, const std::vector<RouteView>& presented);

enum class RelaxKind { increase_bound, drop_leaf, shrink_avoid_set };

struct RelaxAction {
    RelaxKind kind;
    LeafKind leaf;
    double epsilon = 0.0;                   // increase_bound
    std::vector<std::string> remove_nodes;  // shrink_avoid_set
};

// Returns the relaxed policy; throws std::invalid_argument if the targeted
// leaf is absent. Shrinking an avoid set to empty removes the leaf.
Policy relax(const Policy& p, const RelaxAction& action);

// Config-file literal syntax, e.g.
//   {"and":[{"max_hops":10},{"avoid":["LEO-A-34","LEO-A-43"]}]}
// Accepted leaves: {"phi":true}, {"min_latency":true}, {"min_hops":true},
// {"min_inter_op":true}, {"max_latency_ms":50}, {"max_hops":10},
// {"max_inter_op":2}, {"avoid":[ids...]}, {"avoid_weighted":{id:weight}}.
Policy policy_from_json(const nlohmann::json& j);
nlohmann::json policy_to_json(const Policy& p);
std::string policy_to_string(const Policy& p);

// Orchestrator-side configuration for the three-step flow. Step 1 narrows by
// constraints only; step 3 ranks by exactly one preference leaf.
struct OrchestratorConfig {
    Policy step1_policy;
    PolicyLeaf step3_objective{LeafKind::min_latency};
    std::optional<std::size_t> candidate_cap;
    bool exclude_single_operator = true;
};

// Throws std::invalid_argument if step 1 carries a preference leaf or step 3
// is not a preference leaf.
void validate(const OrchestratorConfig& oc);

}  // namespace ntnorch
