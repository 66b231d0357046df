#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ntnorch/orchestration.hpp"
#include "ntnorch/scenario.hpp"

namespace ntnorch {

struct TimeseriesRow {
    UtcSeconds t = 0;
    std::optional<double> centralized_ms;
    std::optional<int> centralized_hops;
    std::optional<double> proposed_ms;
    std::optional<int> proposed_hops;
    bool feasible = false;
};

// Centralized baseline and the three-step flow on identical snapshots, one
// row per time step.
std::vector<TimeseriesRow> run_timeseries(const Scenario& scn, int threads = 1);

struct SweepRow {
    int va_size = 0;
    double feasibility_rate = 0.0;
    std::optional<double> gap_mean;
    std::optional<double> gap_std;  // population std over the feasible trials
    int n_s = 0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
};

// The paper's |V_a| grid: 0,1,2,4,...,30 then 35,...,50.
std::vector<int> default_sweep_sizes(int max_size);

// Operator A swaps in a random avoid set per trial (size 0 means no policy);
// everything else follows the scenario. Trials re-filter one prepared
// candidate set, so the per-trial cost is the policy filtering alone.
SweepResult run_autonomy_sweep(const Scenario& scn, const std::vector<int>& sizes, int trials,
                               std::uint64_t seed, int threads = 1);

struct AvailabilityResult {
    std::vector<double> per_operator;
    double combined = 0.0;
    int steps = 0;
};

// Fraction of snapshots in which a source-dest route exists using only one
// operator's satellites (and using everything, for "combined").
AvailabilityResult run_availability(const Scenario& scn, std::int64_t duration_s, int step_s,
                                    int threads = 1);

struct OperatorCountRow {
    int n_p = 0;
    std::size_t n_r = 0;
    std::vector<std::string> policy_names;        // per operator: "avoid_top3" or "max_hops"
    std::vector<std::vector<std::string>> avoided;  // per operator (empty for max_hops ops)
    std::vector<std::size_t> s_star, s_plus;
    std::size_t r_star = 0;
    std::optional<int> hops;
    std::optional<double> latency_ms;
};

// Repartitions the shell round-robin over n_p operators and alternates the two
// study policies: even operators avoid their own three most-presented
// satellites, odd operators bound the hop count at ten.
std::vector<OperatorCountRow> run_operator_count_study(const Scenario& scn,
                                                       const std::vector<int>& partitions);

struct CandidatePoint {
    double latency_ms = 0.0;
    bool uses_geo = false;
};

struct CdfSeries {
    std::vector<CandidatePoint> candidates;  // ascending latency
    std::vector<double> intersection_ms;     // ascending
    std::optional<double> selected_ms;
};

struct MultilayerResult {
    CdfSeries base;
    CdfSeries capped;  // step-1 policy with the latency cap added
    double cap_ms = 120.0;
};

MultilayerResult run_multilayer_cdf(const Scenario& scn, double cap_ms = 120.0);

// Mean of (proposed - centralized) / centralized. Throws std::invalid_argument
// on length mismatch or a nonpositive baseline entry.
double conditional_optimality_gap(const std::vector<double>& proposed_ms,
                                  const std::vector<double>& centralized_ms);

// CSV emitters (headers documented in the README).
void write_timeseries_csv(const std::string& path, const std::vector<TimeseriesRow>& rows);
void write_sweep_csv(const std::string& path, const SweepResult& result);
void write_availability_csv(const std::string& path, const AvailabilityResult& result);
void write_opcount_csv(const std::string& path, const std::vector<OperatorCountRow>& rows);
void write_cdf_csv(const std::string& path, const MultilayerResult& result);

}  // namespace ntnorch
