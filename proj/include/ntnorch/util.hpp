#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ntnorch {

// Raised for malformed scenario/schedule/CLI input. Maps to exit code 2.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(dot(*this)); }
    double norm2() const { return dot(*this); }

    Vec3 normalized() const {
        double n = norm();
        return {x / n, y / n, z / n};
    }
};

inline double distance_m(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

inline double deg_to_rad(double deg) { return deg * M_PI / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / M_PI; }

// Seconds since the Unix epoch, UTC, whole-second resolution.
using UtcSeconds = std::int64_t;

// Parses "YYYY-MM-DDTHH:MM:SSZ" (seconds optional). Throws config_error.
UtcSeconds parse_utc(const std::string& iso);
std::string format_utc(UtcSeconds t);

// splitmix64: tiny deterministic PRNG, identical output on every platform.
// Used for all Monte-Carlo draws so result files are byte-reproducible.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n) via 128-bit multiply (no modulo bias worth caring about here,
    // and bit-stable across platforms).
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * n) >> 64);
    }

    double next_double() { return (next() >> 11) * 0x1.0p-53; }
};

// Stable seed derivation for per-trial sub-streams.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t a, std::uint64_t b) {
    SplitMix64 rng(root ^ (a * 0x9e3779b97f4a7c15ULL) ^ (b * 0xc2b2ae3d27d4eb4fULL));
    rng.next();
    return rng.next();
}

// Draws k distinct values from [0, n) by partial Fisher-Yates, ascending output.
std::vector<int> sample_without_replacement(int n, int k, SplitMix64& rng);

// Fixed-decimal formatting for CSV output (never locale-dependent).
inline std::string fmt_fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

// Runs fn(i) for i in [0, n). Work is split into contiguous chunks, so any
// per-index output written to a preallocated slot is identical for every
// thread count.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace ntnorch
