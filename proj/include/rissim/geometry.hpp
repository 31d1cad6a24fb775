#pragma once

#include <cmath>
#include <string>

#include "rissim/errors.hpp"
#include "rissim/types.hpp"

namespace rissim {

/// Two-antenna link layout around a panel at the origin: d1/theta1 locate
/// antenna 1, d2/theta2 locate antenna 2, both in the x-z elevation plane.
struct LinkGeometry {
    double d1_m = 1.5;
    double theta1_deg = 30.0;
    double d2_m = 0.5;
    double theta2_deg = 0.0;
    double f_hz = 4.25e9;
    double pt_dbm = 0.0;

    void validate() const {
        if (!(d1_m > 0.0)) throw ConfigError("geometry.d1_m must be > 0");
        if (!(d2_m > 0.0)) throw ConfigError("geometry.d2_m must be > 0");
        if (!(std::abs(theta1_deg) < 90.0))
            throw ConfigError("geometry.theta1_deg must satisfy |theta| < 90");
        if (!(std::abs(theta2_deg) < 90.0))
            throw ConfigError("geometry.theta2_deg must satisfy |theta| < 90");
        if (!(f_hz > 0.0)) throw ConfigError("geometry.f_hz must be > 0");
    }

    friend bool operator==(const LinkGeometry&, const LinkGeometry&) = default;
};

/// Antenna position for a given range and elevation angle, with the panel in
/// the z = 0 plane and boresight +z.
inline Vec3 antenna_position(double d_m, double theta_deg) {
    if (!(d_m > 0.0)) throw ConfigError("antenna distance must be > 0");
    const double t = deg2rad(theta_deg);
    return {d_m * std::sin(t), 0.0, d_m * std::cos(t)};
}

/// Spherical-spreading hop factor g = (lambda / 4 pi r) * exp(-j 2 pi r / lambda).
inline cdouble propagation_factor(const Vec3& a, const Vec3& b, double lambda_m) {
    const double r = distance(a, b);
    if (r == 0.0) throw SingularityError("propagation: coincident points");
    const double amplitude = lambda_m / (4.0 * std::numbers::pi * r);
    const double phase = -2.0 * std::numbers::pi * r / lambda_m;
    return std::polar(amplitude, phase);
}

}  // namespace rissim
