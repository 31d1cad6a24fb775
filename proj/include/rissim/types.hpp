#pragma once

#include <cmath>
#include <complex>
#include <numbers>

namespace rissim {

using cdouble = std::complex<double>;

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

/// Link direction in the TDD frame. Uplink: antenna 2 transmits and
/// antenna 1 receives. Downlink is the reverse.
enum class Direction { Uplink, Downlink };

inline Direction reverse(Direction d) {
    return d == Direction::Uplink ? Direction::Downlink : Direction::Uplink;
}

inline const char* to_string(Direction d) {
    return d == Direction::Uplink ? "uplink" : "downlink";
}

inline double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Wrap an angle to [0, 360).
inline double wrap_deg_360(double deg) {
    double w = std::fmod(deg, 360.0);
    if (w < 0.0) w += 360.0;
    if (w >= 360.0) w = 0.0;  // fmod can round up to the seam
    return w;
}

/// Wrap an angle to (-180, 180].
inline double wrap_deg_180(double deg) {
    double w = std::fmod(deg, 360.0);
    if (w <= -180.0) w += 360.0;
    if (w > 180.0) w -= 360.0;
    return w;
}

inline double wavelength_m(double f_hz) { return kSpeedOfLight / f_hz; }

inline double db_to_amplitude(double db) { return std::pow(10.0, db / 20.0); }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline double distance(const Vec3& a, const Vec3& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    const double dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

}  // namespace rissim
