#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ntnorch/geometry.hpp"
#include "ntnorch/linkbudget.hpp"
#include "ntnorch/policy.hpp"
#include "ntnorch/util.hpp"

namespace ntnorch {

// Walker-style shell: `planes` evenly RAAN-spaced circular planes with
// `sats_per_plane` evenly phased satellites each.
struct ConstellationSpec {
    int planes = 0;
    int sats_per_plane = 0;
    double altitude_km = 0.0;
    double inclination_deg = 0.0;
    double raan_spacing_deg = 0.0;
    double raan0_deg = 0.0;
    double phase_offset_deg = 0.0;  // extra in-plane phase per plane index
    double eccentricity = 0.0;
};

struct UserRfConfig {
    double frequency_hz = 0.0;
    double pt_dbm = 0.0;
    double gt_dbi = 0.0;
    double gr_dbi = 0.0;
    double noise_temp_k = 0.0;
    double bandwidth_hz = 0.0;
    double required_cnr_db = 0.0;
};

struct LinkConfig {
    double wavelength_nm = 1550.0;
    double other_losses_db = 0.0;
    double distance_threshold_m = 10000e3;
    double required_rx_power_dbm = -50.0;
    bool geo_distance_unlimited = true;  // links touching a GEO node skip D_req
    double min_elevation_deg = 0.0;
    double occlusion_margin_m = 0.0;

    // Terminal budgets: mutual nearest-neighbor caps over the feasible
    // LEO-LEO and LEO<->GEO pair pools (0 keeps every feasible pair).
    int max_isl_neighbors = 0;
    int max_geo_neighbors = 0;

    struct TxRx {
        double pt_dbm = 0.0;
        double gt_dbi = 0.0;
        double gr_dbi = 0.0;
    };
    TxRx leo{30.0, 106.0, 106.0};
    TxRx geo{37.0, 114.0, 114.0};
    double ogs_gr_dbi = 118.0;

    enum class UserAttachment { all_visible, nearest };
    UserAttachment user_attachment = UserAttachment::all_visible;

    double wavelength_m() const { return wavelength_nm * 1e-9; }

    // When set, user links additionally enforce the RF CNR condition.
    std::optional<UserRfConfig> user_rf;
};

struct Scenario {
    std::string name;
    UtcSeconds epoch = 0;
    double gmst0_deg = 0.0;
    int step_s = 60;
    int step_count = 1;

    ConstellationSpec constellation;
    std::vector<GeoSlot> geo_slots;

    int operator_count = 0;
    int geo_owner = -1;  // operator index owning all GEO slots (-1: none present)

    GroundSite user{0, 0, 0, SiteRole::user};
    GroundSite ogs{0, 0, 0, SiteRole::ogs};
    GroundSite dn{0, 0, 0, SiteRole::dn};

    LinkConfig links;

    OrchestratorConfig orchestrator;
    std::vector<Policy> operator_policies;  // size == operator_count

    std::uint64_t seed = 0;

    std::string source_id = "User";
    std::string dest_id = "DN";

    int leo_count() const { return constellation.planes * constellation.sats_per_plane; }
    EarthRotation earth_rotation() const {
        return {static_cast<double>(epoch), gmst0_deg};
    }
};

// Operator labels: index 0 -> "A", 1 -> "B", ...
std::string operator_label(int index);
int operator_index(const std::string& label);

// One node of the scenario with its geometry source, in the deterministic
// global order (ground sites first, then LEO shell by plane/slot, then GEO).
struct CatalogEntry {
    std::string id;
    enum class Kind { leo, geo, user, ogs, dn } kind;
    std::optional<int> owner;
    std::variant<OrbitElements, GeoSlot, GroundSite> source;
};

// LEO plane p belongs to operator p mod operator_count; node ids are
// "LEO-<letter>-<k>" with k counted per operator in (plane, slot) order.
std::vector<CatalogEntry> build_catalog(const Scenario& scn);

// Parsing validates everything and resolves defaults. scenario_to_json emits
// the fully resolved form, which parses back to an identical Scenario.
Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const Scenario& scn);
Scenario load_scenario(const std::string& path);

// Relaxation schedules ({"schedule":[{actor,action,...},...]}).
struct ScheduledAction {
    bool orchestrator_side = false;
    int operator_idx = -1;
    RelaxAction action;
};
using RelaxSchedule = std::vector<ScheduledAction>;

RelaxSchedule schedule_from_json(const nlohmann::json& j);
RelaxSchedule load_schedule(const std::string& path);

}  // namespace ntnorch
