#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <string>

#include "rissim/geometry.hpp"
#include "rissim/pattern.hpp"

namespace rissim {

/// Direct (non-RIS) path model. None yields exactly zero; FreeSpaceLoS uses
/// the spherical-spreading factor between the two antennas; FixedComplex is
/// a configured constant standing in for an unknown static environment.
struct DirectLink {
    enum class Kind { None, FreeSpaceLoS, FixedComplex };
    Kind kind = Kind::None;
    cdouble value{0.0, 0.0};

    static DirectLink none() { return {Kind::None, {0.0, 0.0}}; }
    static DirectLink free_space() { return {Kind::FreeSpaceLoS, {0.0, 0.0}}; }
    static DirectLink fixed(cdouble v) { return {Kind::FixedComplex, v}; }
    friend bool operator==(const DirectLink&, const DirectLink&) = default;
};

inline const char* to_string(DirectLink::Kind k) {
    switch (k) {
        case DirectLink::Kind::None: return "none";
        case DirectLink::Kind::FreeSpaceLoS: return "free_space";
        case DirectLink::Kind::FixedComplex: return "fixed";
    }
    return "?";
}

/// Everything needed to evaluate one link: panel state, static pattern,
/// antennas, and the direct-path model.
struct Scene {
    Panel panel;
    CodingPattern pattern;
    LinkGeometry geometry;
    DirectLink direct;
    std::string pattern_id = "pattern";
};

/// One evaluated channel.
struct ChannelSample {
    cdouble h_d;
    cdouble h_ris;
    cdouble h_total;
    Direction direction = Direction::Uplink;
    double f_hz = 0.0;
    std::string pattern_id;
};

/// Two-hop cascaded channel: sum over elements of Gamma_n * g(tx, n) * g(n, rx),
/// with tx/rx assigned from the direction. The spreading factors are symmetric
/// in their endpoints, so the per-element product is evaluated in the fixed
/// order Gamma_n * g(antenna1, n) * g(n, antenna2); summation is row-major for
/// bitwise reproducibility.
inline cdouble cascaded_channel(const Panel& panel, std::span<const cdouble> coefficients,
                                const LinkGeometry& geometry, Direction /*direction*/) {
    if (static_cast<int>(coefficients.size()) != panel.element_count())
        throw ConfigError("cascaded channel: coefficient count must equal element count");
    geometry.validate();
    const double lambda = wavelength_m(geometry.f_hz);
    const Vec3 a1 = antenna_position(geometry.d1_m, geometry.theta1_deg);
    const Vec3 a2 = antenna_position(geometry.d2_m, geometry.theta2_deg);

    cdouble sum{0.0, 0.0};
    for (int n = 0; n < panel.element_count(); ++n) {
        const Vec3& p = panel.element_positions[n];
        sum += coefficients[n] * propagation_factor(a1, p, lambda) *
               propagation_factor(p, a2, lambda);
    }
    return sum;
}

/// Direct path coefficient; identical for both directions by construction.
inline cdouble direct_channel(const LinkGeometry& geometry, const DirectLink& model) {
    switch (model.kind) {
        case DirectLink::Kind::None: return {0.0, 0.0};
        case DirectLink::Kind::FixedComplex: return model.value;
        case DirectLink::Kind::FreeSpaceLoS: {
            geometry.validate();
            return propagation_factor(antenna_position(geometry.d1_m, geometry.theta1_deg),
                                      antenna_position(geometry.d2_m, geometry.theta2_deg),
                                      wavelength_m(geometry.f_hz));
        }
    }
    return {0.0, 0.0};
}

/// Incident power at the panel for the transmitting side of the given
/// direction (transmit power scaled by one spreading hop to the panel
/// center). Only nonlinear cells consume this.
inline double incident_power_w(const LinkGeometry& geometry, Direction direction) {
    const double d_tx = direction == Direction::Uplink ? geometry.d2_m : geometry.d1_m;
    const double hop = wavelength_m(geometry.f_hz) / (4.0 * std::numbers::pi * d_tx);
    return dbm_to_watts(geometry.pt_dbm) * hop * hop;
}

/// Full link evaluation: per-element coefficients, cascaded sum, direct path.
inline ChannelSample evaluate_link(const Scene& scene, Direction direction) {
    scene.geometry.validate();
    const bool uplink = direction == Direction::Uplink;
    const double theta_in = uplink ? scene.geometry.theta2_deg : scene.geometry.theta1_deg;
    const double theta_out = uplink ? scene.geometry.theta1_deg : scene.geometry.theta2_deg;

    const auto coeffs = apply_pattern(scene.panel, scene.pattern, theta_in, theta_out, direction,
                                      incident_power_w(scene.geometry, direction));
    ChannelSample sample;
    sample.h_ris = cascaded_channel(scene.panel, coeffs, scene.geometry, direction);
    sample.h_d = direct_channel(scene.geometry, scene.direct);
    sample.h_total = sample.h_d + sample.h_ris;
    sample.direction = direction;
    sample.f_hz = scene.geometry.f_hz;
    sample.pattern_id = scene.pattern_id;
    return sample;
}

/// Received power in dBm. A null channel maps to -inf ("below floor" in the
/// rendering layer).
inline double received_power_dbm(double pt_dbm, cdouble h) {
    const double mag = std::abs(h);
    if (mag == 0.0) return -std::numeric_limits<double>::infinity();
    return pt_dbm + 20.0 * std::log10(mag);
}

struct ReciprocityReport {
    cdouble h_up;
    cdouble h_down;
    double magnitude_deviation_db = 0.0;
    double phase_deviation_deg = 0.0;
    bool reciprocal = true;
};

/// Evaluates both directions with identical panel state and compares them.
/// Deviations are kept at full precision; quantize only when rendering.
inline ReciprocityReport reciprocity_report(const Scene& scene, double tol_db = 1e-9,
                                            double tol_deg = 1e-9) {
    ReciprocityReport rep;
    rep.h_up = evaluate_link(scene, Direction::Uplink).h_total;
    rep.h_down = evaluate_link(scene, Direction::Downlink).h_total;

    const double mag_up = std::abs(rep.h_up);
    const double mag_down = std::abs(rep.h_down);
    if (mag_up == 0.0 && mag_down == 0.0) {
        rep.magnitude_deviation_db = 0.0;
        rep.phase_deviation_deg = 0.0;
    } else if (mag_up == 0.0 || mag_down == 0.0) {
        rep.magnitude_deviation_db = std::numeric_limits<double>::infinity();
        rep.phase_deviation_deg = 0.0;
    } else {
        rep.magnitude_deviation_db = std::abs(20.0 * std::log10(mag_up / mag_down));
        rep.phase_deviation_deg =
            std::abs(wrap_deg_180(rad2deg(std::arg(rep.h_up) - std::arg(rep.h_down))));
    }
    rep.reciprocal = rep.magnitude_deviation_db <= tol_db && rep.phase_deviation_deg <= tol_deg;
    return rep;
}

}  // namespace rissim
