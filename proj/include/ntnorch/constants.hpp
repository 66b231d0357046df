#pragma once

namespace ntnorch::constants {

inline constexpr double earth_radius_m = 6378.137e3;
inline constexpr double mu_earth_m3_s2 = 3.986004418e14;
inline constexpr double earth_rotation_rad_s = 7.2921159e-5;
inline constexpr double speed_of_light_m_s = 3.0e8;
inline constexpr double boltzmann_j_k = 1.38e-23;
inline constexpr double geo_radius_m = 42164.2e3;

}  // namespace ntnorch::constants
