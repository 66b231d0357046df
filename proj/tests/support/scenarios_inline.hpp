// In-code builders for the bundled scenarios, used by tests that must not
// depend on the working directory. The acceptance suite cross-checks these
// against the JSON files shipped under scenarios/.
#pragma once

#include "ntnorch/scenario.hpp"

namespace ntnorch::testing {

inline Scenario two_operator_scenario() {
    Scenario scn;
    scn.name = "two_operator";
    scn.epoch = parse_utc("2024-12-15T00:00:00Z");
    scn.step_s = 60;
    scn.step_count = 61;
    scn.constellation = {10, 10, 1000.0, 55.0, 36.0, 0.0, 0.0, 0.0};
    scn.operator_count = 2;
    scn.user = {40.68939, -74.04453, 0.0, SiteRole::user};
    scn.ogs = {35.710076, 139.489154, 0.0, SiteRole::ogs};
    scn.dn = {35.710076, 139.489154, 0.0, SiteRole::dn};
    scn.links.max_isl_neighbors = 4;
    scn.orchestrator.step1_policy = Policy::max_hops(10);
    scn.orchestrator.step3_objective = PolicyLeaf{LeafKind::min_latency};
    scn.operator_policies = {Policy::avoid({"LEO-A-34", "LEO-A-43"}), Policy::min_hops()};
    scn.seed = 20241215;
    return scn;
}

inline Scenario ten_operator_scenario() {
    Scenario scn = two_operator_scenario();
    scn.name = "ten_operator";
    scn.operator_count = 10;
    scn.operator_policies.assign(10, Policy::phi());
    return scn;
}

inline Scenario conflict_scenario() {
    Scenario scn = two_operator_scenario();
    scn.name = "conflict";
    scn.orchestrator.step1_policy =
        Policy::max_hops(8).and_with(Policy::max_latency(0.050));
    scn.operator_policies = {
        Policy::avoid({"LEO-A-34", "LEO-A-43"}).and_with(Policy::min_hops()),
        Policy::min_hops(),
    };
    return scn;
}

inline Scenario multilayer_scenario() {
    Scenario scn;
    scn.name = "multilayer";
    scn.epoch = parse_utc("2024-12-15T00:00:00Z");
    scn.step_s = 60;
    scn.step_count = 1;
    scn.constellation = {6, 13, 1000.0, 55.0, 60.0, 0.0, 0.0, 0.0};
    scn.geo_slots = {{135.0}, {-140.0}, {15.0}};
    scn.operator_count = 2;
    scn.geo_owner = 1;
    scn.user = {40.68939, -74.04453, 0.0, SiteRole::user};
    scn.ogs = {35.710076, 139.489154, 0.0, SiteRole::ogs};
    scn.dn = {35.710076, 139.489154, 0.0, SiteRole::dn};
    scn.links.max_isl_neighbors = 4;
    scn.links.max_geo_neighbors = 4;
    scn.orchestrator.step1_policy = Policy::max_hops(10);
    scn.orchestrator.step3_objective = PolicyLeaf{LeafKind::min_latency};
    scn.operator_policies = {Policy::min_hops(), Policy::min_inter_op()};
    scn.seed = 20241215;
    return scn;
}

// A small shell for fast tests: 4 planes x 4 satellites, same physics.
inline Scenario small_scenario() {
    Scenario scn = two_operator_scenario();
    scn.name = "small";
    scn.constellation = {4, 4, 2000.0, 55.0, 90.0, 0.0, 0.0, 0.0};
    scn.step_count = 3;
    scn.orchestrator.step1_policy = Policy::max_hops(6);
    scn.operator_policies = {Policy::phi(), Policy::phi()};
    return scn;
}

}  // namespace ntnorch::testing
