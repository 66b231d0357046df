#pragma once

#include <optional>
#include <vector>

#include "ntnorch/routing.hpp"
#include "ntnorch/scenario.hpp"

namespace ntnorch {

// Candidate routes plus everything derived from them that does not depend on
// operator policies: presentation sets and both view scopes. Reused across
// negotiation rounds and Monte-Carlo trials when only policies change.
struct CandidateBundle {
    std::vector<Route> routes;
    std::vector<RouteView> e2e_views;
    std::vector<PresentationSet> presentations;      // per operator
    std::vector<std::vector<RouteView>> op_views;    // per operator, aligned to nonempty_indices
};

CandidateBundle prepare_candidates(const Snapshot& s, const OrchestratorConfig& oc, int source,
                                   int dest, int operator_count);

struct RoundRecord {
    Policy step1;
    std::vector<Policy> operator_policies;
    std::size_t n_r = 0;
    std::vector<std::size_t> s_plus;  // |S_i^+| per operator
    std::vector<std::size_t> s_star;  // |S_i^*| per operator
    std::size_t r_star = 0;           // |R^*|
};

struct RoundOutput {
    RoundRecord record;
    std::vector<std::size_t> r_star_indices;  // route indices surviving the intersection
    std::optional<Route> route;
};

// Steps 2-3 on a prepared candidate set: each operator filters its presented
// share, operators absent from a route leave it untouched, the index sets are
// intersected and the step-3 objective picks the winner.
RoundOutput select_round(const Snapshot& s, const CandidateBundle& bundle,
                         const OrchestratorConfig& oc,
                         const std::vector<Policy>& operator_policies);

// One full pass of steps 1-3.
RoundOutput run_round(const Snapshot& s, const OrchestratorConfig& oc,
                      const std::vector<Policy>& operator_policies, int source, int dest);

// The constraint-satisfying simple path minimizing the objective, with the
// same single-operator exclusion the candidate flow applies. Absence of a
// route is a value, not an error.
std::optional<Route> centralized_route(const Snapshot& s, int source, int dest,
                                       const PolicyLeaf& objective, const Policy& constraints,
                                       bool exclude_single_operator);

enum class OrchestrationStatus { solved, exhausted };

struct OrchestrationOutcome {
    OrchestrationStatus status = OrchestrationStatus::exhausted;
    std::optional<Route> final_route;
    std::vector<RoundRecord> rounds;
    // Which scheduled action ran before each round (index into the schedule;
    // rounds[0] has none).
    std::vector<std::optional<std::size_t>> applied_before_round;
};

// Runs rounds until one solves, applying the next scheduled relaxation after
// every infeasible round. Candidates are re-enumerated only when a relaxation
// touched the orchestrator's step-1 policy. A relaxation targeting an absent
// leaf throws config_error naming the round.
OrchestrationOutcome orchestrate(const Snapshot& s, OrchestratorConfig oc,
                                 std::vector<Policy> operator_policies,
                                 const RelaxSchedule& schedule, int source, int dest);

}  // namespace ntnorch
