#include "ntnorch/orchestration.hpp"

#include <algorithm>
#include <stdexcept>

namespace ntnorch {

CandidateBundle prepare_candidates(const Snapshot& s, const OrchestratorConfig& oc, int source,
                                   int dest, int operator_count) {
    CandidateBundle b;
    b.routes = enumerate_candidates(s, source, dest, oc.step1_policy, oc.step3_objective,
                                    oc.candidate_cap, oc.exclude_single_operator);
    b.e2e_views.reserve(b.routes.size());
    for (const auto& r : b.routes) b.e2e_views.push_back(route_metrics(s, r));
    b.presentations = presentation_sets(s, b.routes, operator_count);
    b.op_views.resize(operator_count);
    for (int op = 0; op < operator_count; ++op) {
        const auto& pres = b.presentations[op];
        b.op_views[op].reserve(pres.nonempty_indices.size());
        for (std::size_t l : pres.nonempty_indices)
            b.op_views[op].push_back(operator_view(s, pres.entries[l], op));
    }
    return b;
}

RoundOutput select_round(const Snapshot& s, const CandidateBundle& bundle,
                         const OrchestratorConfig& oc,
                         const std::vector<Policy>& operator_policies) {
    std::size_t n_r = bundle.routes.size();
    int ops = static_cast<int>(operator_policies.size());

    RoundOutput out;
    out.record.operator_policies = operator_policies;
    out.record.step1 = oc.step1_policy;
    out.record.n_r = n_r;
    out.record.s_plus.resize(ops);
    out.record.s_star.resize(ops);

    // accepted[l] counts down the vetoes; operators absent from route l do not
    // participate in its intersection.
    std::vector<char> accepted(n_r, 1);
    for (int op = 0; op < ops; ++op) {
        const auto& pres = bundle.presentations[op];
        out.record.s_plus[op] = pres.nonempty_indices.size();
        std::vector<std::size_t> chosen = filter_candidates(operator_policies[op],
                                                            bundle.op_views[op]);
        out.record.s_star[op] = chosen.size();
        std::vector<char> ok(pres.nonempty_indices.size(), 0);
        for (std::size_t k : chosen) ok[k] = 1;
        for (std::size_t k = 0; k < pres.nonempty_indices.size(); ++k)
            if (!ok[k]) accepted[pres.nonempty_indices[k]] = 0;
    }

    std::size_t best = n_r;
    double best_value = 0.0;
    for (std::size_t l = 0; l < n_r; ++l) {
        if (!accepted[l]) continue;
        out.r_star_indices.push_back(l);
        double v = objective_value(s, oc.step3_objective, bundle.routes[l]);
        if (best == n_r || v < best_value
            || (v == best_value && node_seq_less(s, bundle.routes[l], bundle.routes[best]))) {
            best = l;
            best_value = v;
        }
    }
    out.record.r_star = out.r_star_indices.size();
    if (best < n_r) out.route = bundle.routes[best];
    return out;
}

RoundOutput run_round(const Snapshot& s, const OrchestratorConfig& oc,
                      const std::vector<Policy>& operator_policies, int source, int dest) {
    validate(oc);
    CandidateBundle bundle = prepare_candidates(s, oc, source, dest,
                                                static_cast<int>(operator_policies.size()));
    return select_round(s, bundle, oc, operator_policies);
}

std::optional<Route> centralized_route(const Snapshot& s, int source, int dest,
                                       const PolicyLeaf& objective, const Policy& constraints,
                                       bool exclude_single_operator) {
    std::vector<Route> all = enumerate_candidates(s, source, dest, constraints, objective,
                                                  std::nullopt, exclude_single_operator);
    if (all.empty()) return std::nullopt;
    // enumerate_candidates orders by (objective, node-id sequence) already.
    return all.front();
}

OrchestrationOutcome orchestrate(const Snapshot& s, OrchestratorConfig oc,
                                 std::vector<Policy> operator_policies,
                                 const RelaxSchedule& schedule, int source, int dest) {
    validate(oc);
    OrchestrationOutcome outcome;
    CandidateBundle bundle = prepare_candidates(s, oc, source, dest,
                                                static_cast<int>(operator_policies.size()));
    std::size_t next_action = 0;
    std::optional<std::size_t> just_applied;
    while (true) {
        RoundOutput round = select_round(s, bundle, oc, operator_policies);
        outcome.rounds.push_back(round.record);
        outcome.applied_before_round.push_back(just_applied);
        if (round.route) {
            outcome.status = OrchestrationStatus::solved;
            outcome.final_route = round.route;
            return outcome;
        }
        if (next_action >= schedule.size()) {
            outcome.status = OrchestrationStatus::exhausted;
            return outcome;
        }
        const ScheduledAction& act = schedule[next_action];
        try {
            if (act.orchestrator_side) {
                oc.step1_policy = relax(oc.step1_policy, act.action);
                bundle = prepare_candidates(s, oc, source, dest,
                                            static_cast<int>(operator_policies.size()));
            } else {
                if (act.operator_idx < 0
                    || act.operator_idx >= static_cast<int>(operator_policies.size()))
                    throw std::invalid_argument("schedule targets an unknown operator");
                operator_policies[act.operator_idx] =
                    relax(operator_policies[act.operator_idx], act.action);
            }
        } catch (const std::invalid_argument& e) {
            throw config_error("negotiation aborted after round "
                               + std::to_string(outcome.rounds.size()) + ": " + e.what());
        }
        just_applied = next_action;
        ++next_action;
    }
}

}  // namespace ntnorch
