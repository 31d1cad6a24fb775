#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <vector>

#include "rissim/errors.hpp"
#include "rissim/panel.hpp"
#include "rissim/spectrum.hpp"

namespace rissim {

/// Far-field harmonic radiation amplitudes over (harmonic, observation angle).
struct RadiationMap {
    double f_hz = 0.0;
    double f_m_hz = 0.0;
    std::vector<int> ks;
    std::vector<double> theta_deg;
    std::vector<cdouble> amplitude;  // [k index * theta count + theta index]

    cdouble at(std::size_t k_index, std::size_t theta_index) const {
        return amplitude[k_index * theta_deg.size() + theta_index];
    }
};

inline std::vector<double> make_theta_grid(double min_deg, double max_deg, double step_deg) {
    if (!(step_deg > 0.0) || !(max_deg > min_deg))
        throw RangeError("theta grid: need max > min and step > 0");
    const int n = static_cast<int>(std::floor((max_deg - min_deg) / step_deg + 0.5)) + 1;
    std::vector<double> grid(n);
    for (int i = 0; i < n; ++i) grid[i] = min_deg + i * step_deg;
    while (!grid.empty() && grid.back() > max_deg + 1e-12) grid.pop_back();
    return grid;
}

/// Symmetric grid containing exact negation pairs and zero; spans
/// [-limit, +limit] in uniform steps, never reaching +-90.
inline std::vector<double> make_symmetric_theta_grid(double limit_deg, double step_deg) {
    int half = static_cast<int>(std::floor(limit_deg / step_deg + 1e-9));
    while (half > 0 && half * step_deg >= 90.0) --half;
    std::vector<double> grid(2 * half + 1);
    for (int i = 0; i <= 2 * half; ++i) grid[i] = (i - half) * step_deg;
    return grid;
}

/// Plane-wave array response of the modulated panel: for harmonic k and
/// observation angle theta,
///   A(k, theta) = sum_n a_{k,n} exp(j kappa_in sin(theta_in) x_n
///                                   + j kappa_k sin(theta) x_n),
/// where kappa_k = 2 pi (f + k f_m) / c uses the shifted frequency. Elements
/// inherit the spectrum row of their super-column. Far-field treatment; the
/// y coordinate drops out of the two-angle elevation parameterization.
inline RadiationMap harmonic_radiation(const Panel& panel, const HarmonicSpectrum& spectrum,
                                       double theta_in_deg, double f_hz,
                                       const std::vector<double>& theta_grid, int k_min,
                                       int k_max) {
    if (theta_grid.empty()) throw RangeError("harmonic radiation: empty angle grid");
    for (const double t : theta_grid)
        if (std::abs(t) >= 90.0)
            throw RangeError("harmonic radiation: grid angles must satisfy |theta| < 90");
    if (std::abs(theta_in_deg) >= 90.0)
        throw RangeError("harmonic radiation: incidence angle must satisfy |theta| < 90");
    if (k_min > k_max) throw RangeError("harmonic radiation: empty harmonic range");
    if (spectrum.channel_count() != panel.group_count())
        throw ConfigError("harmonic radiation: spectrum channels do not match panel groups");
    const double f_m = spectrum.modulation_frequency_hz();
    if (f_hz + k_min * f_m <= 0.0)
        throw ConfigError("harmonic radiation: harmonic range reaches non-positive frequency");

    RadiationMap map;
    map.f_hz = f_hz;
    map.f_m_hz = f_m;
    map.theta_deg = theta_grid;
    for (int k = std::max(k_min, -spectrum.k_max()); k <= std::min(k_max, spectrum.k_max()); ++k)
        map.ks.push_back(k);
    map.amplitude.resize(map.ks.size() * theta_grid.size());

    // Rows share x per column, so collapse to per-column sums once per k.
    const double kappa_in = 2.0 * std::numbers::pi * f_hz / kSpeedOfLight;
    const double sin_in = std::sin(deg2rad(theta_in_deg));
    std::vector<double> col_x(panel.cols);
    for (int c = 0; c < panel.cols; ++c) col_x[c] = panel.element_positions[c].x;

    std::vector<cdouble> col_coeff(panel.cols);
    for (std::size_t ki = 0; ki < map.ks.size(); ++ki) {
        const int k = map.ks[ki];
        const double kappa_k = 2.0 * std::numbers::pi * (f_hz + k * f_m) / kSpeedOfLight;
        for (int c = 0; c < panel.cols; ++c)
            col_coeff[c] = static_cast<double>(panel.rows) * spectrum.at(k, c / panel.group_cols);
        for (std::size_t ti = 0; ti < theta_grid.size(); ++ti) {
            const double psi = kappa_in * sin_in + kappa_k * std::sin(deg2rad(theta_grid[ti]));
            cdouble acc{0.0, 0.0};
            for (int c = 0; c < panel.cols; ++c)
                acc += col_coeff[c] * std::polar(1.0, psi * col_x[c]);
            map.amplitude[ki * theta_grid.size() + ti] = acc;
        }
    }
    return map;
}

struct DominantResponse {
    int k = 0;
    double theta_deg = 0.0;
    cdouble amplitude{0.0, 0.0};
};

/// Arg-max of |amplitude| over the map; ties broken by smaller |k|, then
/// smaller theta. Returns nothing for an all-zero map.
inline std::optional<DominantResponse> dominant_response(const RadiationMap& map) {
    if (map.ks.empty() || map.theta_deg.empty())
        throw RangeError("dominant response: empty map");
    DominantResponse best;
    double best_mag = 0.0;
    bool found = false;
    for (std::size_t ki = 0; ki < map.ks.size(); ++ki) {
        for (std::size_t ti = 0; ti < map.theta_deg.size(); ++ti) {
            const cdouble a = map.at(ki, ti);
            const double mag = std::abs(a);
            if (mag == 0.0) continue;
            const bool wins =
                !found || mag > best_mag ||
                (mag == best_mag && (std::abs(map.ks[ki]) < std::abs(best.k) ||
                                     (std::abs(map.ks[ki]) == std::abs(best.k) &&
                                      map.theta_deg[ti] < best.theta_deg)));
            if (wins) {
                best = {map.ks[ki], map.theta_deg[ti], a};
                best_mag = mag;
                found = true;
            }
        }
    }
    if (!found) return std::nullopt;
    return best;
}

/// Least-squares slope of the unwrapped phase of harmonic k across the
/// channel positions; the tangential momentum the schedule imparts per
/// interaction at that harmonic. Zero when the harmonic row is (nearly)
/// empty or the aperture is a single channel.
inline double spatial_phase_gradient(const HarmonicSpectrum& spectrum, int k,
                                     const std::vector<double>& channel_x_m) {
    if (static_cast<int>(channel_x_m.size()) != spectrum.channel_count())
        throw ConfigError("spatial gradient: position count must match channels");
    const int n = spectrum.channel_count();
    if (n < 2) return 0.0;
    std::vector<double> phase(n);
    for (int g = 0; g < n; ++g) {
        const cdouble a = spectrum.at(k, g);
        if (std::abs(a) < 1e-12) return 0.0;  // numerically dead harmonic row
        phase[g] = std::arg(a);
        if (g > 0) {
            const double turns =
                std::round((phase[g - 1] - phase[g]) / (2.0 * std::numbers::pi));
            phase[g] += 2.0 * std::numbers::pi * turns;
        }
    }
    double sx = 0.0, sp = 0.0, sxx = 0.0, sxp = 0.0;
    for (int g = 0; g < n; ++g) {
        sx += channel_x_m[g];
        sp += phase[g];
        sxx += channel_x_m[g] * channel_x_m[g];
        sxp += channel_x_m[g] * phase[g];
    }
    const double det = n * sxx - sx * sx;
    if (det == 0.0) return 0.0;
    return (n * sxp - sx * sp) / det;
}

struct BounceResult {
    int k = 0;                 // dominant harmonic
    double theta_out_deg = 0;  // mirror-convention reflection angle
    double f_out_hz = 0.0;
    cdouble amplitude{0.0, 0.0};
};

struct RoundTripOptions {
    double grid_step_deg = 0.01;
    double grid_limit_deg = 89.99;
    int k_max = 8;
    double angle_tolerance_deg = 0.01;
};

/// One interaction with the modulated panel: grid-search the dominant
/// (harmonic, beam) pair for a wave incident at theta_in/f. The reported
/// reflection angle uses the mirror convention (specular comes back at the
/// incidence angle), i.e. the sign-flipped array-response peak.
inline BounceResult single_bounce(const Panel& panel, const HarmonicSpectrum& spectrum,
                                  double theta_in_deg, double f_hz,
                                  const RoundTripOptions& opts = {}) {
    const auto grid = make_symmetric_theta_grid(opts.grid_limit_deg, opts.grid_step_deg);
    const auto map =
        harmonic_radiation(panel, spectrum, theta_in_deg, f_hz, grid, -opts.k_max, opts.k_max);
    const auto dom = dominant_response(map);
    if (!dom) throw ConfigError("single bounce: panel radiates no signal");
    return {dom->k, -dom->theta_deg, f_hz + dom->k * spectrum.modulation_frequency_hz(),
            dom->amplitude};
}

struct MomentumLedger {
    double beta_s_rad_per_m = 0.0;  // spatial phase gradient of the dominant harmonic
    double lhs = 0.0;               // kappa_3 sin(theta_3)
    double rhs = 0.0;               // kappa_1 sin(theta_1) + (k1 + k2) beta_s
    double tolerance = 0.0;         // grid-resolution bound
    bool balanced = false;
};

struct RoundTripResult {
    double theta2_deg = 0.0;
    double f2_hz = 0.0;
    double theta3_deg = 0.0;
    double f3_hz = 0.0;
    int k1 = 0;
    int k2 = 0;
    bool reciprocal = false;
    MomentumLedger ledger;
};

/// Uplink/downlink double bounce off the modulated panel. Pass 1 sends a wave
/// in at (theta1, f1) and takes the dominant beam (k1, theta2) with
/// f2 = f1 + k1 f_m; pass 2 re-illuminates from theta2 at f2 and yields
/// (k2, theta3), f3 = f2 + k2 f_m. The link is reciprocal only when the wave
/// returns at the original angle and frequency, which a static schedule
/// guarantees and a travelling phase ramp breaks.
inline RoundTripResult round_trip_test(const Panel& panel, const ControlSchedule& schedule,
                                       double theta1_deg, double f1_hz,
                                       const RoundTripOptions& opts = {}) {
    if (schedule.group_count() != panel.group_count())
        throw ConfigError("round trip: schedule groups do not match panel groups");
    const auto spectrum = fourier_coefficients(schedule, panel.cell_model, opts.k_max);
    const double f_m = spectrum.modulation_frequency_hz();

    const BounceResult pass1 = single_bounce(panel, spectrum, theta1_deg, f1_hz, opts);
    const BounceResult pass2 =
        single_bounce(panel, spectrum, pass1.theta_out_deg, pass1.f_out_hz, opts);

    RoundTripResult result;
    result.k1 = pass1.k;
    result.k2 = pass2.k;
    result.theta2_deg = pass1.theta_out_deg;
    result.f2_hz = pass1.f_out_hz;
    result.theta3_deg = pass2.theta_out_deg;
    result.f3_hz = f1_hz + (pass1.k + pass2.k) * f_m;
    result.reciprocal = std::abs(result.theta3_deg - theta1_deg) <= opts.angle_tolerance_deg &&
                        result.f3_hz == f1_hz;

    auto& ledger = result.ledger;
    ledger.beta_s_rad_per_m =
        spatial_phase_gradient(spectrum, result.k1, panel.group_centers_x());
    const double kappa1 = 2.0 * std::numbers::pi * f1_hz / kSpeedOfLight;
    const double kappa2 = 2.0 * std::numbers::pi * result.f2_hz / kSpeedOfLight;
    const double kappa3 = 2.0 * std::numbers::pi * result.f3_hz / kSpeedOfLight;
    ledger.lhs = kappa3 * std::sin(deg2rad(result.theta3_deg));
    ledger.rhs = kappa1 * std::sin(deg2rad(theta1_deg)) +
                 (result.k1 + result.k2) * ledger.beta_s_rad_per_m;
    ledger.tolerance = 2.0 * (kappa2 + kappa3) * deg2rad(opts.grid_step_deg);
    ledger.balanced = std::abs(ledger.lhs - ledger.rhs) <= ledger.tolerance;
    return result;
}

/// Brute-force spectral validator: synthesizes the reflected time signal at
/// one observation angle sample-by-sample (midpoint sampling), then projects
/// it onto the harmonic lines f + k f_m. Independent of the closed-form path;
/// exists to cross-check fourier_coefficients and harmonic_radiation. The
/// retardation x_n sin(theta_out) / c of each element is applied inside the
/// periodic waveform, which reproduces the shifted per-harmonic wavenumber.
inline std::map<int, cdouble> time_domain_oracle(const Panel& panel,
                                                 const ControlSchedule& schedule,
                                                 double theta_in_deg, double f_hz,
                                                 double theta_out_deg, int n_periods,
                                                 int samples_per_period, int k_max) {
    if (samples_per_period < 64)
        throw RangeError("time-domain oracle: samples_per_period must be >= 64");
    if (n_periods < 4) throw RangeError("time-domain oracle: n_periods must be >= 4");
    if (samples_per_period <= 4 * k_max)
        throw RangeError("time-domain oracle: samples_per_period must exceed 4 * k_max");
    if (schedule.group_count() != panel.group_count())
        throw ConfigError("time-domain oracle: schedule groups do not match panel groups");
    if (std::abs(theta_in_deg) >= 90.0 || std::abs(theta_out_deg) >= 90.0)
        throw RangeError("time-domain oracle: angles must satisfy |theta| < 90");

    const double f_m = schedule.modulation_frequency_hz();
    const double kappa_in = 2.0 * std::numbers::pi * f_hz / kSpeedOfLight;
    const double kappa_carrier = 2.0 * std::numbers::pi * f_hz / kSpeedOfLight;
    const double sin_in = std::sin(deg2rad(theta_in_deg));
    const double sin_out = std::sin(deg2rad(theta_out_deg));

    // Per-segment coefficients evaluated once per group.
    const EvalContext ctx{};
    std::vector<std::vector<cdouble>> group_gamma(schedule.group_count());
    for (int g = 0; g < schedule.group_count(); ++g) {
        const auto& segs = schedule.segments(g);
        group_gamma[g].resize(segs.size());
        for (std::size_t i = 0; i < segs.size(); ++i)
            group_gamma[g][i] =
                reflection_coefficient(panel.cell_model, segs[i].control_value, ctx);
    }
    const auto gamma_at = [&](int g, double u) {
        double frac = u - std::floor(u);
        if (frac >= 1.0) frac = 0.0;
        const auto& segs = schedule.segments(g);
        for (std::size_t i = segs.size(); i-- > 0;)
            if (frac >= segs[i].start_frac) return group_gamma[g][i];
        return group_gamma[g].front();
    };

    const int cols = panel.cols;
    std::vector<int> col_group(cols);
    std::vector<double> col_shift(cols);
    std::vector<cdouble> col_static(cols);
    for (int c = 0; c < cols; ++c) {
        const double x = panel.element_positions[c].x;
        col_group[c] = c / panel.group_cols;
        col_shift[c] = x * sin_out / kSpeedOfLight * f_m;  // seconds * f_m = period fraction
        col_static[c] = static_cast<double>(panel.rows) *
                        std::polar(1.0, (kappa_in * sin_in + kappa_carrier * sin_out) * x);
    }

    const long total = static_cast<long>(n_periods) * samples_per_period;
    std::vector<cdouble> signal(total);
    for (long m = 0; m < total; ++m) {
        const double u = (m + 0.5) / samples_per_period;  // time in periods
        cdouble y{0.0, 0.0};
        for (int c = 0; c < cols; ++c) y += gamma_at(col_group[c], u + col_shift[c]) * col_static[c];
        signal[m] = y;
    }

    std::map<int, cdouble> lines;
    for (int k = -k_max; k <= k_max; ++k) {
        cdouble acc{0.0, 0.0};
        for (long m = 0; m < total; ++m) {
            const double u = (m + 0.5) / samples_per_period;
            acc += signal[m] * std::polar(1.0, -2.0 * std::numbers::pi * k * u);
        }
        lines[k] = acc / static_cast<double>(total);
    }
    return lines;
}

}  // namespace rissim
