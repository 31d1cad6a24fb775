#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "rissim/channel.hpp"
#include "rissim/circlefit.hpp"

namespace rissim {

/// A named, fully resolved measurement setup. The four reference setups ship
/// as fixture files with reserved ids "ris1-a", "ris1-b", "ris2-a", "ris2-b".
struct Scenario {
    std::string id;
    LinkGeometry geometry;
    Panel panel;
    PatternKind pattern_kind = PatternKind::Identical;
    PatternParams pattern_params;
    DirectLink direct;
    bool report_phase = true;

    friend bool operator==(const Scenario& a, const Scenario& b) {
        return a.id == b.id && a.geometry == b.geometry && a.panel == b.panel &&
               a.pattern_kind == b.pattern_kind && a.pattern_params == b.pattern_params &&
               a.direct == b.direct && a.report_phase == b.report_phase;
    }
};

/// Pattern selection for table/report runs.
struct PatternSpec {
    PatternKind kind = PatternKind::Identical;
    PatternParams params;
    std::string label;
};

inline PatternSpec pattern_spec(PatternKind kind, PatternParams params = {}) {
    return {kind, params, to_string(kind)};
}

inline Scene make_scene(const Scenario& scenario, PatternKind kind, const PatternParams& params,
                        const std::string& label) {
    Scene scene{scenario.panel, make_pattern(kind, scenario.panel, params), scenario.geometry,
                scenario.direct, label};
    return scene;
}

inline Scene make_scene(const Scenario& scenario) {
    return make_scene(scenario, scenario.pattern_kind, scenario.pattern_params,
                      to_string(scenario.pattern_kind));
}

/// One point of a control-voltage sweep, evaluated in both directions.
struct TrajectoryPoint {
    double voltage_v = 0.0;
    cdouble h_up{0.0, 0.0};
    cdouble h_down{0.0, 0.0};
};

/// Applies the same voltage to every super-column and traces the received
/// signal across v_steps equally spaced voltages over the model's control
/// range, in both directions.
inline std::vector<TrajectoryPoint> voltage_sweep(const Scenario& scenario, int v_steps) {
    if (v_steps < 2) throw RangeError("voltage sweep: need at least 2 steps");
    if (!is_continuous_model(scenario.panel.cell_model))
        throw ConfigError("voltage sweep: unsupported for binary cell models");
    const auto [v_lo, v_hi] = control_range(scenario.panel.cell_model);

    std::vector<TrajectoryPoint> trajectory(v_steps);
    for (int i = 0; i < v_steps; ++i) {
        const double v = v_lo + (v_hi - v_lo) * i / (v_steps - 1);
        const Scene scene = make_scene(scenario, PatternKind::Identical, PatternParams{.value = v},
                                       "sweep");
        trajectory[i] = {v, evaluate_link(scene, Direction::Uplink).h_total,
                         evaluate_link(scene, Direction::Downlink).h_total};
    }
    return trajectory;
}

/// Reciprocity report table row; mirrors the CSV schema.
struct ReportRow {
    std::string scenario;
    std::string pattern;
    double p_up_dbm = 0.0;
    double p_down_dbm = 0.0;
    double phase_up_deg = 0.0;
    double phase_down_deg = 0.0;
    bool phase_na = false;  // setups measured without phase render "NA"
};

inline std::vector<ReportRow> pattern_table(const std::vector<Scenario>& scenarios,
                                            const std::vector<PatternSpec>& patterns) {
    std::vector<ReportRow> rows;
    rows.reserve(scenarios.size() * patterns.size());
    for (const Scenario& scenario : scenarios) {
        for (const PatternSpec& spec : patterns) {
            const Scene scene = make_scene(scenario, spec.kind, spec.params, spec.label);
            const ChannelSample up = evaluate_link(scene, Direction::Uplink);
            const ChannelSample down = evaluate_link(scene, Direction::Downlink);
            ReportRow row;
            row.scenario = scenario.id;
            row.pattern = spec.label;
            row.p_up_dbm = received_power_dbm(scenario.geometry.pt_dbm, up.h_total);
            row.p_down_dbm = received_power_dbm(scenario.geometry.pt_dbm, down.h_total);
            row.phase_up_deg = rad2deg(std::arg(up.h_total));
            row.phase_down_deg = rad2deg(std::arg(down.h_total));
            row.phase_na = !scenario.report_phase;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

enum class OptimizeMode { ContinuousAlign, ExhaustiveBits, GreedyBits };

inline const char* to_string(OptimizeMode m) {
    switch (m) {
        case OptimizeMode::ContinuousAlign: return "continuous_align";
        case OptimizeMode::ExhaustiveBits: return "exhaustive_bits";
        case OptimizeMode::GreedyBits: return "greedy_bits";
    }
    return "?";
}

struct OptimizeResult {
    CodingPattern pattern;
    double gain_db = 0.0;  // received-power gain over the Identical baseline
};

namespace detail {

inline double pattern_power(const Scenario& scenario, const CodingPattern& pattern) {
    Scene scene{scenario.panel, pattern, scenario.geometry, scenario.direct, "optimize"};
    return std::abs(evaluate_link(scene, Direction::Uplink).h_total);
}

inline CodingPattern identical_baseline(const Scenario& scenario) {
    const double v_lo = control_range(scenario.panel.cell_model).first;
    return make_pattern(PatternKind::Identical, scenario.panel, PatternParams{.value = v_lo});
}

}  // namespace detail

/// Pattern search. ContinuousAlign rotates each super-column's contribution
/// onto the direct path's phase (or 0° without a direct path); the bit modes
/// search the binary configuration space, exhaustively or by single-flip
/// sweeps to a fixed point. Passivity makes the uplink and downlink gains
/// identical.
inline OptimizeResult optimize_pattern(const Scenario& scenario, OptimizeMode mode) {
    const Panel& panel = scenario.panel;
    const int groups = panel.group_count();
    const CodingPattern baseline = detail::identical_baseline(scenario);
    const double base_mag = detail::pattern_power(scenario, baseline);

    CodingPattern best;
    switch (mode) {
        case OptimizeMode::ContinuousAlign: {
            if (!is_continuous_model(panel.cell_model))
                throw ConfigError("continuous alignment requires a continuous-phase cell model");
            scenario.geometry.validate();
            const double lambda = wavelength_m(scenario.geometry.f_hz);
            const Vec3 a1 = antenna_position(scenario.geometry.d1_m, scenario.geometry.theta1_deg);
            const Vec3 a2 = antenna_position(scenario.geometry.d2_m, scenario.geometry.theta2_deg);
            std::vector<cdouble> group_sum(groups, cdouble{0.0, 0.0});
            for (int n = 0; n < panel.element_count(); ++n) {
                const Vec3& p = panel.element_positions[n];
                group_sum[panel.group_of(n)] +=
                    propagation_factor(a1, p, lambda) * propagation_factor(p, a2, lambda);
            }
            const cdouble h_d = direct_channel(scenario.geometry, scenario.direct);
            const double target_deg = std::abs(h_d) > 0.0 ? rad2deg(std::arg(h_d)) : 0.0;
            best.kind = PatternKind::Custom;
            best.values.resize(groups);
            for (int g = 0; g < groups; ++g) {
                const double phase_deg =
                    wrap_deg_360(target_deg - rad2deg(std::arg(group_sum[g])));
                best.values[g] = invert_phase(panel.cell_model, phase_deg);
            }
            break;
        }
        case OptimizeMode::ExhaustiveBits: {
            if (!is_binary_model(panel.cell_model))
                throw ConfigError("exhaustive bit search requires a binary cell model");
            if (groups > 20)
                throw ConfigError("exhaustive bit search is limited to 20 super-columns");
            best = baseline;
            double best_mag = base_mag;
            CodingPattern candidate{PatternKind::Custom, std::vector<double>(groups, 0.0)};
            for (unsigned mask = 0; mask < (1u << groups); ++mask) {
                for (int g = 0; g < groups; ++g)
                    candidate.values[g] = (mask >> g) & 1u ? 1.0 : 0.0;
                const double mag = detail::pattern_power(scenario, candidate);
                if (mag > best_mag) {
                    best_mag = mag;
                    best = candidate;
                }
            }
            break;
        }
        case OptimizeMode::GreedyBits: {
            if (!is_binary_model(panel.cell_model))
                throw ConfigError("greedy bit search requires a binary cell model");
            best = CodingPattern{PatternKind::Custom, std::vector<double>(groups, 0.0)};
            double current = detail::pattern_power(scenario, best);
            bool improved = true;
            while (improved) {
                improved = false;
                for (int g = 0; g < groups; ++g) {
                    CodingPattern flipped = best;
                    flipped.values[g] = flipped.values[g] == 0.0 ? 1.0 : 0.0;
                    const double mag = detail::pattern_power(scenario, flipped);
                    if (mag > current) {
                        best = flipped;
                        current = mag;
                        improved = true;
                    }
                }
            }
            break;
        }
    }

    const double best_mag = detail::pattern_power(scenario, best);
    OptimizeResult result;
    result.pattern = best;
    if (best_mag == 0.0 && base_mag == 0.0)
        result.gain_db = 0.0;
    else
        result.gain_db = 20.0 * std::log10(best_mag / base_mag);
    return result;
}

}  // namespace rissim
