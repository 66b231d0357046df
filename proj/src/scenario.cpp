#include "ntnorch/scenario.hpp"

#include <cmath>
#include <fstream>

namespace ntnorch {

std::string operator_label(int index) {
    if (index < 0 || index >= 26) throw config_error("operator index out of range");
    return std::string(1, static_cast<char>('A' + index));
}

int operator_index(const std::string& label) {
    if (label.size() != 1 || label[0] < 'A' || label[0] > 'Z')
        throw config_error("operator label must be a single letter A-Z: '" + label + "'");
    return label[0] - 'A';
}

std::vector<CatalogEntry> build_catalog(const Scenario& scn) {
    std::vector<CatalogEntry> out;
    out.push_back({"User", CatalogEntry::Kind::user, std::nullopt, scn.user});
    out.push_back({"OGS", CatalogEntry::Kind::ogs, std::nullopt, scn.ogs});
    out.push_back({"DN", CatalogEntry::Kind::dn, std::nullopt, scn.dn});

    const auto& c = scn.constellation;
    std::vector<int> per_op_counter(scn.operator_count, 0);
    for (int p = 0; p < c.planes; ++p) {
        int op = p % scn.operator_count;
        for (int s = 0; s < c.sats_per_plane; ++s) {
            OrbitElements e;
            e.altitude_km = c.altitude_km;
            e.inclination_deg = c.inclination_deg;
            e.raan_deg = c.raan0_deg + p * c.raan_spacing_deg;
            e.eccentricity = c.eccentricity;
            e.mean_anomaly_at_epoch_deg =
                s * (360.0 / c.sats_per_plane) + p * c.phase_offset_deg;
            e.epoch_unix_s = static_cast<double>(scn.epoch);
            int k = ++per_op_counter[op];
            out.push_back({"LEO-" + operator_label(op) + "-" + std::to_string(k),
                           CatalogEntry::Kind::leo, op, e});
        }
    }
    for (std::size_t g = 0; g < scn.geo_slots.size(); ++g) {
        out.push_back({"GEO-" + operator_label(scn.geo_owner) + "-" + std::to_string(g + 1),
                       CatalogEntry::Kind::geo, scn.geo_owner, scn.geo_slots[g]});
    }
    return out;
}

namespace {

template <typename T>
T get_or(const nlohmann::json& j, const std::string& key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw config_error("scenario key '" + key + "' has the wrong type");
    }
}

template <typename T>
T require(const nlohmann::json& j, const std::string& key) {
    if (!j.contains(key)) throw config_error("scenario is missing required key '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw config_error("scenario key '" + key + "' has the wrong type");
    }
}

GroundSite site_from_json(const nlohmann::json& j, SiteRole role, const std::string& what) {
    GroundSite s;
    s.latitude_deg = require<double>(j, "lat_deg");
    s.longitude_deg = require<double>(j, "lon_deg");
    s.altitude_m = get_or<double>(j, "alt_m", 0.0);
    s.role = role;
    try {
        validate(s);
    } catch (const std::invalid_argument& e) {
        throw config_error(what + ": " + e.what());
    }
    return s;
}

nlohmann::json site_to_json(const GroundSite& s) {
    return {{"lat_deg", s.latitude_deg}, {"lon_deg", s.longitude_deg}, {"alt_m", s.altitude_m}};
}

Policy policy_at(const nlohmann::json& j, const std::string& key) {
    try {
        return policy_from_json(j.at(key));
    } catch (const std::invalid_argument& e) {
        throw config_error("policy '" + key + "': " + e.what());
    }
}

}  // namespace

Scenario scenario_from_json(const nlohmann::json& j) {
    Scenario scn;
    scn.name = get_or<std::string>(j, "name", "scenario");
    scn.epoch = parse_utc(require<std::string>(j, "epoch"));
    scn.gmst0_deg = get_or<double>(j, "gmst0_deg", 0.0);

    const auto& time = j.contains("time") ? j.at("time") : nlohmann::json::object();
    scn.step_s = get_or<int>(time, "step_s", 60);
    scn.step_count = get_or<int>(time, "count", 1);
    if (scn.step_s <= 0) throw config_error("time.step_s must be > 0");
    if (scn.step_count < 1) throw config_error("time.count must be >= 1");

    const auto& c = require<nlohmann::json>(j, "constellation");
    scn.constellation.planes = require<int>(c, "planes");
    scn.constellation.sats_per_plane = require<int>(c, "sats_per_plane");
    scn.constellation.altitude_km = require<double>(c, "altitude_km");
    scn.constellation.inclination_deg = require<double>(c, "inclination_deg");
    scn.constellation.raan_spacing_deg =
        get_or<double>(c, "raan_spacing_deg", 360.0 / scn.constellation.planes);
    scn.constellation.raan0_deg = get_or<double>(c, "raan0_deg", 0.0);
    scn.constellation.phase_offset_deg = get_or<double>(c, "phase_offset_deg", 0.0);
    scn.constellation.eccentricity = get_or<double>(c, "eccentricity", 0.0);
    if (scn.constellation.planes < 1 || scn.constellation.sats_per_plane < 1)
        throw config_error("constellation needs planes >= 1 and sats_per_plane >= 1");
    {
        OrbitElements probe;
        probe.altitude_km = scn.constellation.altitude_km;
        probe.inclination_deg = scn.constellation.inclination_deg;
        probe.eccentricity = scn.constellation.eccentricity;
        try {
            validate(probe);
        } catch (const std::invalid_argument& e) {
            throw config_error(std::string("constellation: ") + e.what());
        }
    }

    if (j.contains("geo_satellites")) {
        for (const auto& g : j.at("geo_satellites")) {
            GeoSlot slot{require<double>(g, "longitude_deg")};
            try {
                validate(slot);
            } catch (const std::invalid_argument& e) {
                throw config_error(std::string("geo_satellites: ") + e.what());
            }
            scn.geo_slots.push_back(slot);
        }
    }

    const auto& ops = require<nlohmann::json>(j, "operators");
    scn.operator_count = require<int>(ops, "count");
    if (scn.operator_count < 1 || scn.operator_count > 26)
        throw config_error("operators.count must be in [1, 26]");
    if (!scn.geo_slots.empty()) {
        scn.geo_owner = operator_index(require<std::string>(ops, "geo_owner"));
        if (scn.geo_owner >= scn.operator_count)
            throw config_error("operators.geo_owner is not a configured operator");
    }

    const auto& ground = require<nlohmann::json>(j, "ground");
    scn.user = site_from_json(require<nlohmann::json>(ground, "user"), SiteRole::user, "ground.user");
    scn.ogs = site_from_json(require<nlohmann::json>(ground, "ogs"), SiteRole::ogs, "ground.ogs");
    scn.dn = site_from_json(require<nlohmann::json>(ground, "dn"), SiteRole::dn, "ground.dn");

    if (j.contains("links")) {
        const auto& l = j.at("links");
        LinkConfig& lc = scn.links;
        lc.wavelength_nm = get_or<double>(l, "wavelength_nm", 1550.0);
        lc.other_losses_db = get_or<double>(l, "other_losses_db", 0.0);
        lc.distance_threshold_m = get_or<double>(l, "distance_threshold_km", 10000.0) * 1000.0;
        lc.required_rx_power_dbm = get_or<double>(l, "required_rx_power_dbm", -50.0);
        lc.geo_distance_unlimited = get_or<bool>(l, "geo_distance_unlimited", true);
        lc.min_elevation_deg = get_or<double>(l, "min_elevation_deg", 0.0);
        lc.occlusion_margin_m = get_or<double>(l, "occlusion_margin_km", 0.0) * 1000.0;
        lc.max_isl_neighbors = get_or<int>(l, "max_isl_neighbors", 0);
        if (lc.max_isl_neighbors < 0) throw config_error("links.max_isl_neighbors must be >= 0");
        lc.max_geo_neighbors = get_or<int>(l, "max_geo_neighbors", 0);
        if (lc.max_geo_neighbors < 0) throw config_error("links.max_geo_neighbors must be >= 0");
        if (l.contains("leo")) {
            const auto& n = l.at("leo");
            lc.leo = {require<double>(n, "pt_dbm"), require<double>(n, "gt_dbi"),
                      require<double>(n, "gr_dbi")};
        }
        if (l.contains("geo")) {
            const auto& n = l.at("geo");
            lc.geo = {require<double>(n, "pt_dbm"), require<double>(n, "gt_dbi"),
                      require<double>(n, "gr_dbi")};
        }
        if (l.contains("ogs")) lc.ogs_gr_dbi = require<double>(l.at("ogs"), "gr_dbi");
        std::string attach = get_or<std::string>(l, "user_attachment", "all_visible");
        if (attach == "all_visible") {
            lc.user_attachment = LinkConfig::UserAttachment::all_visible;
        } else if (attach == "nearest") {
            lc.user_attachment = LinkConfig::UserAttachment::nearest;
        } else {
            throw config_error("links.user_attachment must be 'all_visible' or 'nearest'");
        }
        if (lc.other_losses_db < 0.0) throw config_error("links.other_losses_db must be >= 0");
        if (!(lc.distance_threshold_m > 0.0))
            throw config_error("links.distance_threshold_km must be > 0");
        if (l.contains("user_rf")) {
            const auto& u = l.at("user_rf");
            UserRfConfig rf;
            rf.frequency_hz = require<double>(u, "frequency_hz");
            rf.pt_dbm = require<double>(u, "pt_dbm");
            rf.gt_dbi = require<double>(u, "gt_dbi");
            rf.gr_dbi = require<double>(u, "gr_dbi");
            rf.noise_temp_k = require<double>(u, "noise_temp_k");
            rf.bandwidth_hz = require<double>(u, "bandwidth_hz");
            rf.required_cnr_db = require<double>(u, "required_cnr_db");
            if (!(rf.noise_temp_k > 0.0) || !(rf.bandwidth_hz > 0.0) || !(rf.frequency_hz > 0.0))
                throw config_error("links.user_rf: frequency, noise temperature and bandwidth must be > 0");
            scn.links.user_rf = rf;
        }
    }

    if (j.contains("orchestrator")) {
        const auto& o = j.at("orchestrator");
        if (o.contains("step1_policy")) scn.orchestrator.step1_policy = policy_at(o, "step1_policy");
        if (o.contains("step3_objective")) {
            Policy obj = policy_at(o, "step3_objective");
            if (obj.leaves.size() != 1)
                throw config_error("orchestrator.step3_objective must be a single preference leaf");
            scn.orchestrator.step3_objective = obj.leaves[0];
        }
        if (o.contains("candidate_cap") && !o.at("candidate_cap").is_null())
            scn.orchestrator.candidate_cap = require<std::size_t>(o, "candidate_cap");
        scn.orchestrator.exclude_single_operator =
            get_or<bool>(o, "exclude_single_operator", true);
        try {
            validate(scn.orchestrator);
        } catch (const std::invalid_argument& e) {
            throw config_error(std::string("orchestrator: ") + e.what());
        }
    }

    scn.operator_policies.assign(scn.operator_count, Policy::phi());
    if (j.contains("operator_policies")) {
        for (const auto& [label, pj] : j.at("operator_policies").items()) {
            int idx = operator_index(label);
            if (idx >= scn.operator_count)
                throw config_error("operator_policies: '" + label + "' is not a configured operator");
            try {
                scn.operator_policies[idx] = policy_from_json(pj);
            } catch (const std::invalid_argument& e) {
                throw config_error("operator_policies." + label + ": " + e.what());
            }
        }
    }

    scn.seed = get_or<std::uint64_t>(j, "seed", 0);
    scn.source_id = get_or<std::string>(j, "source", "User");
    scn.dest_id = get_or<std::string>(j, "dest", "DN");
    return scn;
}

nlohmann::json scenario_to_json(const Scenario& scn) {
    nlohmann::json j;
    j["name"] = scn.name;
    j["epoch"] = format_utc(scn.epoch);
    j["gmst0_deg"] = scn.gmst0_deg;
    j["time"] = {{"step_s", scn.step_s}, {"count", scn.step_count}};
    j["constellation"] = {
        {"planes", scn.constellation.planes},
        {"sats_per_plane", scn.constellation.sats_per_plane},
        {"altitude_km", scn.constellation.altitude_km},
        {"inclination_deg", scn.constellation.inclination_deg},
        {"raan_spacing_deg", scn.constellation.raan_spacing_deg},
        {"raan0_deg", scn.constellation.raan0_deg},
        {"phase_offset_deg", scn.constellation.phase_offset_deg},
        {"eccentricity", scn.constellation.eccentricity},
    };
    if (!scn.geo_slots.empty()) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& g : scn.geo_slots) arr.push_back({{"longitude_deg", g.longitude_deg}});
        j["geo_satellites"] = arr;
    }
    j["operators"] = {{"count", scn.operator_count}};
    if (scn.geo_owner >= 0) j["operators"]["geo_owner"] = operator_label(scn.geo_owner);
    j["ground"] = {{"user", site_to_json(scn.user)},
                   {"ogs", site_to_json(scn.ogs)},
                   {"dn", site_to_json(scn.dn)}};
    const LinkConfig& lc = scn.links;
    j["links"] = {
        {"wavelength_nm", lc.wavelength_nm},
        {"other_losses_db", lc.other_losses_db},
        {"distance_threshold_km", lc.distance_threshold_m / 1000.0},
        {"required_rx_power_dbm", lc.required_rx_power_dbm},
        {"geo_distance_unlimited", lc.geo_distance_unlimited},
        {"min_elevation_deg", lc.min_elevation_deg},
        {"occlusion_margin_km", lc.occlusion_margin_m / 1000.0},
        {"max_isl_neighbors", lc.max_isl_neighbors},
        {"max_geo_neighbors", lc.max_geo_neighbors},
        {"leo", {{"pt_dbm", lc.leo.pt_dbm}, {"gt_dbi", lc.leo.gt_dbi}, {"gr_dbi", lc.leo.gr_dbi}}},
        {"geo", {{"pt_dbm", lc.geo.pt_dbm}, {"gt_dbi", lc.geo.gt_dbi}, {"gr_dbi", lc.geo.gr_dbi}}},
        {"ogs", {{"gr_dbi", lc.ogs_gr_dbi}}},
        {"user_attachment",
         lc.user_attachment == LinkConfig::UserAttachment::all_visible ? "all_visible" : "nearest"},
    };
    if (lc.user_rf) {
        j["links"]["user_rf"] = {
            {"frequency_hz", lc.user_rf->frequency_hz}, {"pt_dbm", lc.user_rf->pt_dbm},
            {"gt_dbi", lc.user_rf->gt_dbi},             {"gr_dbi", lc.user_rf->gr_dbi},
            {"noise_temp_k", lc.user_rf->noise_temp_k}, {"bandwidth_hz", lc.user_rf->bandwidth_hz},
            {"required_cnr_db", lc.user_rf->required_cnr_db},
        };
    }
    j["orchestrator"] = {
        {"step1_policy", policy_to_json(scn.orchestrator.step1_policy)},
        {"step3_objective", policy_to_json(Policy{{scn.orchestrator.step3_objective}})},
        {"exclude_single_operator", scn.orchestrator.exclude_single_operator},
    };
    if (scn.orchestrator.candidate_cap)
        j["orchestrator"]["candidate_cap"] = *scn.orchestrator.candidate_cap;
    else
        j["orchestrator"]["candidate_cap"] = nullptr;
    nlohmann::json pol;
    for (int i = 0; i < scn.operator_count; ++i)
        pol[operator_label(i)] = policy_to_json(scn.operator_policies[i]);
    j["operator_policies"] = pol;
    j["seed"] = scn.seed;
    j["source"] = scn.source_id;
    j["dest"] = scn.dest_id;
    return j;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open scenario file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw config_error("scenario '" + path + "' is not valid JSON: " + e.what());
    }
    return scenario_from_json(j);
}

RelaxSchedule schedule_from_json(const nlohmann::json& j) {
    if (!j.contains("schedule") || !j.at("schedule").is_array())
        throw config_error("schedule file needs a top-level 'schedule' array");
    RelaxSchedule out;
    for (const auto& a : j.at("schedule")) {
        ScheduledAction sa;
        std::string actor = require<std::string>(a, "actor");
        if (actor == "orchestrator") {
            sa.orchestrator_side = true;
        } else if (actor == "operator") {
            sa.orchestrator_side = false;
            sa.operator_idx = operator_index(require<std::string>(a, "operator"));
        } else {
            throw config_error("schedule actor must be 'orchestrator' or 'operator'");
        }
        std::string action = require<std::string>(a, "action");
        try {
            sa.action.leaf = leaf_kind_from_name(require<std::string>(a, "leaf"));
        } catch (const std::invalid_argument& e) {
            throw config_error(e.what());
        }
        if (action == "increase_bound") {
            sa.action.kind = RelaxKind::increase_bound;
            if (a.contains("epsilon_ms"))
                sa.action.epsilon = require<double>(a, "epsilon_ms") / 1000.0;
            else
                sa.action.epsilon = require<double>(a, "epsilon");
        } else if (action == "drop_leaf") {
            sa.action.kind = RelaxKind::drop_leaf;
        } else if (action == "shrink_avoid_set") {
            sa.action.kind = RelaxKind::shrink_avoid_set;
            sa.action.remove_nodes = require<std::vector<std::string>>(a, "nodes");
        } else {
            throw config_error("unknown schedule action: '" + action + "'");
        }
        out.push_back(sa);
    }
    return out;
}

RelaxSchedule load_schedule(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open schedule file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw config_error("schedule '" + path + "' is not valid JSON: " + e.what());
    }
    return schedule_from_json(j);
}

}  // namespace ntnorch
