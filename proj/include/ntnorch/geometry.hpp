#pragma once

#include "ntnorch/util.hpp"

namespace ntnorch {

// Circular two-body orbit. Only eccentricity 0 is supported; anything else is
// rejected at propagation time.
struct OrbitElements {
    double altitude_km = 0.0;
    double inclination_deg = 0.0;
    double raan_deg = 0.0;
    double eccentricity = 0.0;
    double mean_anomaly_at_epoch_deg = 0.0;
    double epoch_unix_s = 0.0;
};

enum class SiteRole { user, ogs, dn };

struct GroundSite {
    double latitude_deg = 0.0;
    double longitude_deg = 0.0;
    double altitude_m = 0.0;
    SiteRole role = SiteRole::user;
};

// Geostationary slot, identified by sub-satellite longitude.
struct GeoSlot {
    double longitude_deg = 0.0;
};

struct EciPosition {
    Vec3 r_m;
    double t_unix_s = 0.0;
};

// Rotation model shared by ground sites and GEO slots: a uniformly spinning
// spherical Earth with a configurable rotation angle at the scenario epoch.
struct EarthRotation {
    double epoch_unix_s = 0.0;
    double gmst0_deg = 0.0;

    double angle_rad(double t_unix_s) const;
};

// Throw std::invalid_argument on invariant violations.
void validate(const OrbitElements& e);
void validate(const GroundSite& s);
void validate(const GeoSlot& g);

double orbital_radius_m(const OrbitElements& e);
double orbital_period_s(const OrbitElements& e);

// Position on the circular orbit at time t (either side of the epoch).
// Throws std::domain_error for nonzero eccentricity.
EciPosition propagate_orbit(const OrbitElements& e, double t_unix_s);

EciPosition site_position(const GroundSite& s, const EarthRotation& rot, double t_unix_s);

EciPosition geo_position(const GeoSlot& g, const EarthRotation& rot, double t_unix_s);

// True iff the segment a-b stays outside the sphere of the given radius
// centered at the Earth's center. Both positions must be at the same time.
bool line_of_sight(const EciPosition& a, const EciPosition& b, double occlusion_radius_m);

// Elevation of sat above the local horizontal plane of site, in [-90, 90] deg.
// Throws std::domain_error for coincident positions.
double elevation_deg(const EciPosition& site, const EciPosition& sat);

}  // namespace ntnorch
