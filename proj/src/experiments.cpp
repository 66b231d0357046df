#include "ntnorch/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>

namespace ntnorch {

namespace {

// Centralized optimum for the same snapshot. Reuses the prepared candidates
// when they are exhaustive (no cap); a capped bundle cannot stand in for the
// full search space.
std::optional<Route> centralized_from(const Snapshot& snap, const CandidateBundle& bundle,
                                      const OrchestratorConfig& oc, int source, int dest) {
    if (!oc.candidate_cap)
        return bundle.routes.empty() ? std::nullopt : std::optional<Route>(bundle.routes.front());
    return centralized_route(snap, source, dest, oc.step3_objective, oc.step1_policy,
                             oc.exclude_single_operator);
}

}  // namespace

std::vector<TimeseriesRow> run_timeseries(const Scenario& scn, int threads) {
    validate(scn.orchestrator);
    std::vector<TimeseriesRow> rows(scn.step_count);
    parallel_for(static_cast<std::size_t>(scn.step_count), threads, [&](std::size_t k) {
        UtcSeconds t = scn.epoch + static_cast<UtcSeconds>(k) * scn.step_s;
        Snapshot snap = build_snapshot(scn, t);
        int source = snap.require_node(scn.source_id);
        int dest = snap.require_node(scn.dest_id);
        CandidateBundle bundle =
            prepare_candidates(snap, scn.orchestrator, source, dest, scn.operator_count);

        TimeseriesRow row;
        row.t = t;
        if (auto c = centralized_from(snap, bundle, scn.orchestrator, source, dest)) {
            row.centralized_ms = c->latency_s * 1000.0;
            row.centralized_hops = c->hops;
        }
        RoundOutput round = select_round(snap, bundle, scn.orchestrator, scn.operator_policies);
        row.feasible = round.route.has_value();
        if (round.route) {
            row.proposed_ms = round.route->latency_s * 1000.0;
            row.proposed_hops = round.route->hops;
        }
        rows[k] = std::move(row);
    });
    return rows;
}

std::vector<int> default_sweep_sizes(int max_size) {
    std::vector<int> sizes{0, 1};
    for (int v = 2; v <= std::min(30, max_size); v += 2) sizes.push_back(v);
    for (int v = 35; v <= max_size; v += 5) sizes.push_back(v);
    return sizes;
}

SweepResult run_autonomy_sweep(const Scenario& scn, const std::vector<int>& sizes, int trials,
                               std::uint64_t seed, int threads) {
    validate(scn.orchestrator);
    Snapshot snap = build_snapshot(scn, scn.epoch);
    int source = snap.require_node(scn.source_id);
    int dest = snap.require_node(scn.dest_id);
    CandidateBundle bundle =
        prepare_candidates(snap, scn.orchestrator, source, dest, scn.operator_count);
    auto centralized = centralized_from(snap, bundle, scn.orchestrator, source, dest);

    std::vector<std::string> a_nodes;  // operator A's satellites, catalog order
    for (const auto& n : snap.nodes)
        if (n.owner && *n.owner == 0) a_nodes.push_back(n.id);
    for (int size : sizes)
        if (size < 0 || size > static_cast<int>(a_nodes.size()))
            throw std::invalid_argument("sweep size " + std::to_string(size)
                                        + " exceeds operator A's node count");

    SweepResult result;
    result.rows.resize(sizes.size());
    parallel_for(sizes.size(), threads, [&](std::size_t si) {
        int size = sizes[si];
        int feasible = 0;
        std::vector<double> gaps;
        for (int trial = 0; trial < trials; ++trial) {
            SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(size),
                                       static_cast<std::uint64_t>(trial)));
            std::vector<Policy> policies = scn.operator_policies;
            if (size > 0) {
                std::vector<int> pick = sample_without_replacement(
                    static_cast<int>(a_nodes.size()), size, rng);
                std::vector<std::string> ids;
                ids.reserve(pick.size());
                for (int k : pick) ids.push_back(a_nodes[k]);
                policies[0] = Policy::avoid(std::move(ids));
            } else {
                policies[0] = Policy::phi();
            }
            RoundOutput round = select_round(snap, bundle, scn.orchestrator, policies);
            if (round.route) {
                ++feasible;
                if (centralized && centralized->latency_s > 0.0)
                    gaps.push_back((round.route->latency_s - centralized->latency_s)
                                   / centralized->latency_s);
            }
        }
        SweepRow row;
        row.va_size = size;
        row.n_s = feasible;
        row.feasibility_rate = trials > 0 ? static_cast<double>(feasible) / trials : 0.0;
        if (!gaps.empty()) {
            double mean = 0.0;
            for (double g : gaps) mean += g;
            mean /= static_cast<double>(gaps.size());
            double var = 0.0;
            for (double g : gaps) var += (g - mean) * (g - mean);
            var /= static_cast<double>(gaps.size());
            row.gap_mean = mean;
            row.gap_std = std::sqrt(var);
        }
        result.rows[si] = std::move(row);
    });
    return result;
}

AvailabilityResult run_availability(const Scenario& scn, std::int64_t duration_s, int step_s,
                                    int threads) {
    if (duration_s <= 0 || step_s <= 0)
        throw std::invalid_argument("run_availability: duration and step must be > 0");
    int steps = static_cast<int>(duration_s / step_s) + 1;

    std::vector<std::vector<char>> ok(steps, std::vector<char>(scn.operator_count + 1, 0));
    parallel_for(static_cast<std::size_t>(steps), threads, [&](std::size_t k) {
        UtcSeconds t = scn.epoch + static_cast<UtcSeconds>(k) * step_s;
        Snapshot snap = build_snapshot(scn, t);
        ok[k][scn.operator_count] =
            has_any_route(snap, snap.require_node(scn.source_id), snap.require_node(scn.dest_id))
                ? 1
                : 0;
        // Single-fleet availability asks what each operator could build from
        // its own satellites, so the network is wired within the fleet rather
        // than filtered out of the collaborative graph.
        for (int op = 0; op < scn.operator_count; ++op) {
            Snapshot sub = build_snapshot(scn, t, op);
            ok[k][op] = has_any_route(sub, sub.require_node(scn.source_id),
                                      sub.require_node(scn.dest_id))
                            ? 1
                            : 0;
        }
    });

    AvailabilityResult out;
    out.steps = steps;
    out.per_operator.assign(scn.operator_count, 0.0);
    for (int k = 0; k < steps; ++k) {
        for (int op = 0; op < scn.operator_count; ++op) out.per_operator[op] += ok[k][op];
        out.combined += ok[k][scn.operator_count];
    }
    for (double& v : out.per_operator) v /= steps;
    out.combined /= steps;
    return out;
}

std::vector<OperatorCountRow> run_operator_count_study(const Scenario& scn,
                                                       const std::vector<int>& partitions) {
    std::vector<OperatorCountRow> rows;
    for (int n_p : partitions) {
        if (n_p < 1 || n_p > scn.constellation.planes)
            throw std::invalid_argument("operator-count partition must be in [1, planes]");
        Scenario part = scn;
        part.operator_count = n_p;
        part.operator_policies.assign(n_p, Policy::phi());
        if (!part.geo_slots.empty()) part.geo_owner = std::min(part.geo_owner, n_p - 1);

        Snapshot snap = build_snapshot(part, part.epoch);
        int source = snap.require_node(part.source_id);
        int dest = snap.require_node(part.dest_id);
        CandidateBundle bundle =
            prepare_candidates(snap, part.orchestrator, source, dest, n_p);

        OperatorCountRow row;
        row.n_p = n_p;
        row.n_r = bundle.routes.size();
        std::vector<Policy> policies(n_p);
        for (int op = 0; op < n_p; ++op) {
            if (op % 2 == 0) {
                // Most frequently presented own satellites, ties by id.
                std::map<std::string, int> count;
                for (std::size_t l : bundle.presentations[op].nonempty_indices)
                    for (const auto& occ : bundle.presentations[op].entries[l].occurrences)
                        for (int v : occ.segment_nodes) ++count[snap.nodes[v].id];
                std::vector<std::pair<std::string, int>> ranked(count.begin(), count.end());
                std::stable_sort(ranked.begin(), ranked.end(),
                                 [](const auto& a, const auto& b) { return a.second > b.second; });
                std::vector<std::string> top;
                for (std::size_t k = 0; k < ranked.size() && k < 3; ++k)
                    top.push_back(ranked[k].first);
                row.policy_names.push_back("avoid_top3");
                row.avoided.push_back(top);
                policies[op] = top.empty() ? Policy::phi() : Policy::avoid(top);
            } else {
                row.policy_names.push_back("max_hops");
                row.avoided.push_back({});
                policies[op] = Policy::max_hops(10);
            }
        }
        RoundOutput round = select_round(snap, bundle, part.orchestrator, policies);
        row.s_star = round.record.s_star;
        row.s_plus = round.record.s_plus;
        row.r_star = round.record.r_star;
        if (round.route) {
            row.hops = round.route->hops;
            row.latency_ms = round.route->latency_s * 1000.0;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

MultilayerResult run_multilayer_cdf(const Scenario& scn, double cap_ms) {
    validate(scn.orchestrator);
    Snapshot snap = build_snapshot(scn, scn.epoch);
    int source = snap.require_node(scn.source_id);
    int dest = snap.require_node(scn.dest_id);

    auto run_variant = [&](const OrchestratorConfig& oc) {
        CandidateBundle bundle = prepare_candidates(snap, oc, source, dest, scn.operator_count);
        RoundOutput round = select_round(snap, bundle, oc, scn.operator_policies);
        CdfSeries series;
        series.candidates.reserve(bundle.routes.size());
        for (const auto& r : bundle.routes) {
            bool geo = std::any_of(r.node_seq.begin(), r.node_seq.end(), [&](int v) {
                return snap.nodes[v].kind == NodeKind::geo;
            });
            series.candidates.push_back({r.latency_s * 1000.0, geo});
        }
        std::sort(series.candidates.begin(), series.candidates.end(),
                  [](const CandidatePoint& a, const CandidatePoint& b) {
                      return a.latency_ms < b.latency_ms;
                  });
        for (std::size_t l : round.r_star_indices)
            series.intersection_ms.push_back(bundle.routes[l].latency_s * 1000.0);
        std::sort(series.intersection_ms.begin(), series.intersection_ms.end());
        if (round.route) series.selected_ms = round.route->latency_s * 1000.0;
        return series;
    };

    MultilayerResult out;
    out.cap_ms = cap_ms;
    out.base = run_variant(scn.orchestrator);
    OrchestratorConfig capped = scn.orchestrator;
    capped.step1_policy = capped.step1_policy.and_with(Policy::max_latency(cap_ms / 1000.0));
    out.capped = run_variant(capped);
    return out;
}

double conditional_optimality_gap(const std::vector<double>& proposed_ms,
                                  const std::vector<double>& centralized_ms) {
    if (proposed_ms.size() != centralized_ms.size())
        throw std::invalid_argument("conditional_optimality_gap: length mismatch");
    if (proposed_ms.empty())
        throw std::invalid_argument("conditional_optimality_gap: empty inputs");
    double sum = 0.0;
    for (std::size_t i = 0; i < proposed_ms.size(); ++i) {
        if (!(centralized_ms[i] > 0.0))
            throw std::invalid_argument("conditional_optimality_gap: baseline must be > 0");
        sum += (proposed_ms[i] - centralized_ms[i]) / centralized_ms[i];
    }
    return sum / static_cast<double>(proposed_ms.size());
}

void write_timeseries_csv(const std::string& path, const std::vector<TimeseriesRow>& rows) {
    std::ofstream out(path);
    out << "t_iso,centralized_ms,centralized_hops,proposed_ms,proposed_hops,feasible\n";
    for (const auto& r : rows) {
        out << format_utc(r.t) << ',';
        if (r.centralized_ms) out << fmt_fixed(*r.centralized_ms, 6);
        out << ',';
        if (r.centralized_hops) out << *r.centralized_hops;
        out << ',';
        if (r.proposed_ms) out << fmt_fixed(*r.proposed_ms, 6);
        out << ',';
        if (r.proposed_hops) out << *r.proposed_hops;
        out << ',' << (r.feasible ? 1 : 0) << '\n';
    }
}

void write_sweep_csv(const std::string& path, const SweepResult& result) {
    std::ofstream out(path);
    out << "va_size,feasibility_rate,gap_mean,gap_std,n_s\n";
    for (const auto& r : result.rows) {
        out << r.va_size << ',' << fmt_fixed(r.feasibility_rate, 6) << ',';
        if (r.gap_mean) out << fmt_fixed(*r.gap_mean, 9);
        out << ',';
        if (r.gap_std) out << fmt_fixed(*r.gap_std, 9);
        out << ',' << r.n_s << '\n';
    }
}

void write_availability_csv(const std::string& path, const AvailabilityResult& result) {
    std::ofstream out(path);
    out << "operator,availability\n";
    for (std::size_t op = 0; op < result.per_operator.size(); ++op)
        out << operator_label(static_cast<int>(op)) << ','
            << fmt_fixed(result.per_operator[op], 6) << '\n';
    out << "all," << fmt_fixed(result.combined, 6) << '\n';
}

void write_opcount_csv(const std::string& path, const std::vector<OperatorCountRow>& rows) {
    std::ofstream out(path);
    out << "n_p,operator,policy,s_star,s_plus,n_r,r_star,hops,latency_ms\n";
    for (const auto& row : rows) {
        for (std::size_t op = 0; op < row.s_star.size(); ++op) {
            out << row.n_p << ',' << operator_label(static_cast<int>(op)) << ','
                << row.policy_names[op] << ',' << row.s_star[op] << ',' << row.s_plus[op] << ','
                << row.n_r << ',' << row.r_star << ',';
            if (row.hops) out << *row.hops;
            out << ',';
            if (row.latency_ms) out << fmt_fixed(*row.latency_ms, 6);
            out << '\n';
        }
    }
}

void write_cdf_csv(const std::string& path, const MultilayerResult& result) {
    std::ofstream out(path);
    out << "variant,series,latency_ms,cum_prob\n";
    auto emit = [&](const char* variant, const CdfSeries& s) {
        for (std::size_t i = 0; i < s.candidates.size(); ++i)
            out << variant << ",candidates," << fmt_fixed(s.candidates[i].latency_ms, 6) << ','
                << fmt_fixed(static_cast<double>(i + 1) / s.candidates.size(), 6) << '\n';
        for (std::size_t i = 0; i < s.intersection_ms.size(); ++i)
            out << variant << ",intersection," << fmt_fixed(s.intersection_ms[i], 6) << ','
                << fmt_fixed(static_cast<double>(i + 1) / s.intersection_ms.size(), 6) << '\n';
        if (s.selected_ms)
            out << variant << ",selected," << fmt_fixed(*s.selected_ms, 6) << ",1.000000\n";
    };
    emit("unconstrained", result.base);
    emit("latency_capped", result.capped);
}

}  // namespace ntnorch
