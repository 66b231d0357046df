// Batch front-end: loads a scenario, dispatches one study, writes CSV series,
// a JSON summary and the fully resolved scenario echo.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ntnorch/experiments.hpp"
#include "ntnorch/orchestration.hpp"
#include "ntnorch/scenario.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ntnorch;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_infeasible = 3;
constexpr int exit_internal = 4;

struct Options {
    std::string scenario_path;
    std::string study;
    std::string out_dir;
    std::string schedule_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> cap;
    int threads = 1;
    int trials = 100;
    std::string partitions = "2,5,10";
    std::int64_t duration_s = 86400;
    int step_s = 60;
    double cap_ms = 120.0;
    bool dump_snapshot = false;
    bool dump_routes = false;
};

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        try {
            out.push_back(std::stoi(text.substr(pos, comma - pos)));
        } catch (const std::exception&) {
            throw config_error("bad integer list: '" + text + "'");
        }
        pos = comma + 1;
    }
    return out;
}

json policies_json(const std::vector<Policy>& policies) {
    json out;
    for (std::size_t i = 0; i < policies.size(); ++i)
        out[operator_label(static_cast<int>(i))] = policy_to_json(policies[i]);
    return out;
}

json round_json(const RoundRecord& rec, const std::optional<std::size_t>& applied) {
    json j;
    j["n_r"] = rec.n_r;
    j["r_star"] = rec.r_star;
    j["step1_policy"] = policy_to_json(rec.step1);
    j["operator_policies"] = policies_json(rec.operator_policies);
    json s_star, s_plus;
    for (std::size_t i = 0; i < rec.s_star.size(); ++i) {
        s_star[operator_label(static_cast<int>(i))] = rec.s_star[i];
        s_plus[operator_label(static_cast<int>(i))] = rec.s_plus[i];
    }
    j["s_star"] = s_star;
    j["s_plus"] = s_plus;
    if (applied)
        j["applied_schedule_index"] = *applied;
    else
        j["applied_schedule_index"] = nullptr;
    return j;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

void write_rounds_csv(const fs::path& path, const OrchestrationOutcome& outcome, int ops) {
    std::ofstream out(path);
    out << "round,n_r";
    for (int i = 0; i < ops; ++i) out << ",s_star_" << operator_label(i);
    out << ",r_star,solved,hops,latency_ms\n";
    for (std::size_t r = 0; r < outcome.rounds.size(); ++r) {
        const auto& rec = outcome.rounds[r];
        bool last = r + 1 == outcome.rounds.size();
        bool solved = last && outcome.status == OrchestrationStatus::solved;
        out << r << ',' << rec.n_r;
        for (int i = 0; i < ops; ++i) out << ',' << rec.s_star[i];
        out << ',' << rec.r_star << ',' << (solved ? 1 : 0) << ',';
        if (solved && outcome.final_route) out << outcome.final_route->hops;
        out << ',';
        if (solved && outcome.final_route)
            out << fmt_fixed(outcome.final_route->latency_s * 1000.0, 6);
        out << '\n';
    }
}

int run_study(const Options& opt) {
    Scenario scn = load_scenario(opt.scenario_path);
    if (opt.seed) scn.seed = *opt.seed;
    if (opt.cap) scn.orchestrator.candidate_cap = opt.cap;

    json summary;
    summary["study"] = opt.study;
    summary["scenario"] = scn.name;
    summary["seed"] = scn.seed;

    // Compute the whole study first; the filesystem is only touched once the
    // run has succeeded.
    int exit_code = exit_ok;
    fs::path out_dir(opt.out_dir);
    std::function<void()> write_csv = [] {};

    Snapshot snap;  // reused by single-snapshot studies

    if (opt.study == "timeseries") {
        auto rows = run_timeseries(scn, opt.threads);
        int feasible = 0;
        for (const auto& r : rows) feasible += r.feasible ? 1 : 0;
        summary["steps"] = rows.size();
        summary["feasible_steps"] = feasible;
        write_csv = [out_dir, rows = std::move(rows)] {
            write_timeseries_csv((out_dir / "timeseries.csv").string(), rows);
        };
    } else if (opt.study == "negotiate") {
        if (opt.schedule_path.empty())
            throw config_error("--study negotiate requires --schedule <file>");
        RelaxSchedule schedule = load_schedule(opt.schedule_path);
        snap = build_snapshot(scn, scn.epoch);
        OrchestrationOutcome outcome =
            orchestrate(snap, scn.orchestrator, scn.operator_policies, schedule,
                        snap.require_node(scn.source_id), snap.require_node(scn.dest_id));
        summary["status"] =
            outcome.status == OrchestrationStatus::solved ? "solved" : "exhausted";
        json rounds = json::array();
        for (std::size_t r = 0; r < outcome.rounds.size(); ++r)
            rounds.push_back(round_json(outcome.rounds[r], outcome.applied_before_round[r]));
        summary["rounds"] = rounds;
        if (outcome.final_route) {
            summary["route"] = route_node_ids(snap, *outcome.final_route);
            summary["n_h"] = outcome.final_route->hops;
            summary["latency_ms"] = outcome.final_route->latency_s * 1000.0;
        }
        if (outcome.status != OrchestrationStatus::solved) exit_code = exit_infeasible;
        int ops = scn.operator_count;
        write_csv = [out_dir, outcome = std::move(outcome), ops] {
            write_rounds_csv(out_dir / "rounds.csv", outcome, ops);
        };
    } else if (opt.study == "sweep") {
        int a_count = 0;
        for (const auto& entry : build_catalog(scn))
            if (entry.owner && *entry.owner == 0) ++a_count;
        auto sizes = default_sweep_sizes(a_count);
        auto result = run_autonomy_sweep(scn, sizes, opt.trials, scn.seed, opt.threads);
        summary["trials_per_size"] = opt.trials;
        summary["sizes"] = sizes;
        write_csv = [out_dir, result = std::move(result)] {
            write_sweep_csv((out_dir / "sweep.csv").string(), result);
        };
    } else if (opt.study == "opcount") {
        auto rows = run_operator_count_study(scn, parse_int_list(opt.partitions));
        json results = json::array();
        for (const auto& row : rows) {
            json r;
            r["n_p"] = row.n_p;
            r["n_r"] = row.n_r;
            r["r_star"] = row.r_star;
            if (row.hops) r["n_h"] = *row.hops;
            if (row.latency_ms) r["latency_ms"] = *row.latency_ms;
            results.push_back(r);
        }
        summary["partitions"] = results;
        write_csv = [out_dir, rows = std::move(rows)] {
            write_opcount_csv((out_dir / "opcount.csv").string(), rows);
        };
    } else if (opt.study == "availability") {
        auto result = run_availability(scn, opt.duration_s, opt.step_s, opt.threads);
        summary["steps"] = result.steps;
        summary["combined"] = result.combined;
        write_csv = [out_dir, result = std::move(result)] {
            write_availability_csv((out_dir / "availability.csv").string(), result);
        };
    } else if (opt.study == "cdf") {
        auto result = run_multilayer_cdf(scn, opt.cap_ms);
        summary["cap_ms"] = result.cap_ms;
        summary["candidates"] = result.base.candidates.size();
        summary["candidates_capped"] = result.capped.candidates.size();
        if (result.base.selected_ms) summary["selected_ms"] = *result.base.selected_ms;
        if (result.capped.selected_ms) summary["selected_ms_capped"] = *result.capped.selected_ms;
        write_csv = [out_dir, result = std::move(result)] {
            write_cdf_csv((out_dir / "cdf.csv").string(), result);
        };
    } else if (opt.study == "single") {
        snap = build_snapshot(scn, scn.epoch);
        int source = snap.require_node(scn.source_id);
        int dest = snap.require_node(scn.dest_id);
        RoundOutput round = run_round(snap, scn.orchestrator, scn.operator_policies, source, dest);
        auto central = centralized_route(snap, source, dest, scn.orchestrator.step3_objective,
                                         scn.orchestrator.step1_policy,
                                         scn.orchestrator.exclude_single_operator);
        if (central) {
            summary["centralized"] = {{"route", route_node_ids(snap, *central)},
                                      {"n_h", central->hops},
                                      {"latency_ms", central->latency_s * 1000.0}};
        }
        summary["proposed"] = round_json(round.record, std::nullopt);
        if (round.route) {
            summary["proposed"]["route"] = route_node_ids(snap, *round.route);
            summary["proposed"]["n_h"] = round.route->hops;
            summary["proposed"]["latency_ms"] = round.route->latency_s * 1000.0;
        } else {
            exit_code = exit_infeasible;
        }
    } else {
        throw config_error("unknown study: '" + opt.study + "'");
    }

    fs::create_directories(out_dir);
    write_csv();
    write_file(out_dir / "summary.json", summary.dump(2) + "\n");
    write_file(out_dir / "resolved_scenario.json", scenario_to_json(scn).dump(2) + "\n");

    if (opt.study == "single" && (opt.dump_snapshot || opt.dump_routes)) {
        if (opt.dump_snapshot) export_snapshot_csv(snap, (out_dir / "snapshot").string());
        if (opt.dump_routes) {
            auto routes = enumerate_candidates(snap, snap.require_node(scn.source_id),
                                               snap.require_node(scn.dest_id),
                                               scn.orchestrator.step1_policy,
                                               scn.orchestrator.step3_objective,
                                               scn.orchestrator.candidate_cap,
                                               scn.orchestrator.exclude_single_operator);
            export_routes_csv(snap, routes, (out_dir / "candidates.csv").string());
        }
    }
    return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-operator NTN route orchestration simulator"};
    app.require_subcommand(1);

    Options opt;
    const char* env_out = std::getenv("NTNORCH_OUT");
    opt.out_dir = env_out ? env_out : "out";

    CLI::App* run = app.add_subcommand("run", "run one study on a scenario");
    run->add_option("scenario", opt.scenario_path, "scenario JSON file")->required();
    run->add_option("--study", opt.study,
                    "timeseries|negotiate|sweep|opcount|availability|cdf|single")
        ->required();
    run->add_option("--out", opt.out_dir, "output directory (default $NTNORCH_OUT or ./out)");
    run->add_option("--seed", opt.seed, "override the scenario seed");
    run->add_option("--threads", opt.threads, "worker threads (default 1)");
    run->add_option("--schedule", opt.schedule_path, "relaxation schedule JSON (negotiate)");
    run->add_option("--cap", opt.cap, "candidate-route cap override");
    run->add_option("--trials", opt.trials, "Monte-Carlo trials per sweep size (default 100)");
    run->add_option("--partitions", opt.partitions, "operator counts for opcount (default 2,5,10)");
    run->add_option("--duration-s", opt.duration_s, "availability horizon (default 86400)");
    run->add_option("--step-s", opt.step_s, "availability step (default 60)");
    run->add_option("--cap-ms", opt.cap_ms, "latency cap for the cdf study (default 120)");
    run->add_flag("--dump-snapshot", opt.dump_snapshot, "write snapshot CSVs (single)");
    run->add_flag("--dump-routes", opt.dump_routes, "write candidate routes CSV (single)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_config;
    }

    try {
        return run_study(opt);
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return exit_internal;
    }
}
