#include "ntnorch/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "ntnorch/constants.hpp"

namespace ntnorch {

double EarthRotation::angle_rad(double t_unix_s) const {
    return deg_to_rad(gmst0_deg) + constants::earth_rotation_rad_s * (t_unix_s - epoch_unix_s);
}

void validate(const OrbitElements& e) {
    if (!(e.altitude_km > 0.0))
        throw std::invalid_argument("orbit altitude_km must be > 0");
    if (e.inclination_deg < 0.0 || e.inclination_deg > 180.0)
        throw std::invalid_argument("orbit inclination_deg must be in [0, 180]");
    if (e.eccentricity != 0.0)
        throw std::invalid_argument("only circular orbits (eccentricity 0) are supported");
}

void validate(const GroundSite& s) {
    if (std::abs(s.latitude_deg) > 90.0)
        throw std::invalid_argument("site latitude_deg out of [-90, 90]");
    if (std::abs(s.longitude_deg) > 180.0)
        throw std::invalid_argument("site longitude_deg out of [-180, 180]");
}

void validate(const GeoSlot& g) {
    if (std::abs(g.longitude_deg) > 180.0)
        throw std::invalid_argument("GEO longitude_deg out of [-180, 180]");
}

double orbital_radius_m(const OrbitElements& e) {
    return constants::earth_radius_m + e.altitude_km * 1000.0;
}

double orbital_period_s(const OrbitElements& e) {
    double a = orbital_radius_m(e);
    return 2.0 * M_PI * std::sqrt(a * a * a / constants::mu_earth_m3_s2);
}

EciPosition propagate_orbit(const OrbitElements& e, double t_unix_s) {
    if (e.eccentricity != 0.0)
        throw std::domain_error("propagate_orbit: only circular orbits are supported");

    double a = orbital_radius_m(e);
    double n = std::sqrt(constants::mu_earth_m3_s2 / (a * a * a));
    // Circular orbit: mean anomaly doubles as argument of latitude.
    double u = deg_to_rad(e.mean_anomaly_at_epoch_deg) + n * (t_unix_s - e.epoch_unix_s);
    double raan = deg_to_rad(e.raan_deg);
    double incl = deg_to_rad(e.inclination_deg);

    double cu = std::cos(u), su = std::sin(u);
    double co = std::cos(raan), so = std::sin(raan);
    double ci = std::cos(incl), si = std::sin(incl);

    Vec3 r{a * (co * cu - so * ci * su),
           a * (so * cu + co * ci * su),
           a * (si * su)};
    return {r, t_unix_s};
}

EciPosition site_position(const GroundSite& s, const EarthRotation& rot, double t_unix_s) {
    double r = constants::earth_radius_m + s.altitude_m;
    double lat = deg_to_rad(s.latitude_deg);
    double lon = deg_to_rad(s.longitude_deg) + rot.angle_rad(t_unix_s);
    Vec3 p{r * std::cos(lat) * std::cos(lon),
           r * std::cos(lat) * std::sin(lon),
           r * std::sin(lat)};
    return {p, t_unix_s};
}

EciPosition geo_position(const GeoSlot& g, const EarthRotation& rot, double t_unix_s) {
    double lon = deg_to_rad(g.longitude_deg) + rot.angle_rad(t_unix_s);
    Vec3 p{constants::geo_radius_m * std::cos(lon),
           constants::geo_radius_m * std::sin(lon),
           0.0};
    return {p, t_unix_s};
}

bool line_of_sight(const EciPosition& a, const EciPosition& b, double occlusion_radius_m) {
    Vec3 d = b.r_m - a.r_m;
    double len2 = d.norm2();
    double min_dist;
    if (len2 == 0.0) {
        min_dist = a.r_m.norm();
    } else {
        // Closest point of the segment to the Earth's center.
        double t = -a.r_m.dot(d) / len2;
        t = std::fmin(1.0, std::fmax(0.0, t));
        min_dist = (a.r_m + d * t).norm();
    }
    // Millimeter slack: a ground endpoint sits numerically on the sphere and
    // must not occlude itself.
    return min_dist >= occlusion_radius_m - 1e-3;
}

double elevation_deg(const EciPosition& site, const EciPosition& sat) {
    Vec3 rel = sat.r_m - site.r_m;
    double rel_norm = rel.norm();
    if (rel_norm == 0.0)
        throw std::domain_error("elevation_deg: coincident positions");
    double s = site.r_m.normalized().dot(rel) / rel_norm;
    s = std::fmin(1.0, std::fmax(-1.0, s));
    return rad_to_deg(std::asin(s));
}

}  // namespace ntnorch
