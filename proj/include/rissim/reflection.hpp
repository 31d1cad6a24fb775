#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rissim/errors.hpp"
#include "rissim/types.hpp"

namespace rissim {

/// One row of a varactor response table. Phase is stored unwrapped so that
/// interpolation never crosses a 360° seam.
struct VaractorTableSample {
    double voltage_v = 0.0;
    double magnitude = 0.0;
    double phase_deg = 0.0;
    friend bool operator==(const VaractorTableSample&, const VaractorTableSample&) = default;
};

/// Continuously tunable cell: phase affine in voltage, constant magnitude.
struct IdealVaractor {
    double v_min_v = 0.0;
    double v_max_v = 21.0;
    double phase_span_deg = 360.0;
    double magnitude = 1.0;
    friend bool operator==(const IdealVaractor&, const IdealVaractor&) = default;
};

/// Measured cell response, interpolated linearly in (magnitude, unwrapped phase).
struct TableVaractor {
    std::vector<VaractorTableSample> samples;
    friend bool operator==(const TableVaractor&, const TableVaractor&) = default;
};

/// 1-bit programmable cell with two phase states.
struct IdealPin {
    double phase_state_0_deg = 0.0;
    double phase_state_1_deg = 180.0;
    double magnitude = 1.0;
    friend bool operator==(const IdealPin&, const IdealPin&) = default;
};

enum class ActiveState { Bidirectional, ForwardOnly, BackwardOnly, Off };

inline const char* to_string(ActiveState s) {
    switch (s) {
        case ActiveState::Bidirectional: return "bidirectional";
        case ActiveState::ForwardOnly: return "forward_only";
        case ActiveState::BackwardOnly: return "backward_only";
        case ActiveState::Off: return "off";
    }
    return "?";
}

/// Amplifier-backed one-way cell. "Forward" is the downlink pass direction;
/// the blocked direction is attenuated by the isolation figure.
struct ActiveCell {
    ActiveState state = ActiveState::ForwardOnly;
    double gain_db = 13.0;
    double isolation_db = 60.0;
    friend bool operator==(const ActiveCell&, const ActiveCell&) = default;
};

/// Power-dependent transmissive cell with asymmetric coupling into its
/// resonator: amplitude = t_max / (1 + (c_dir * P / p_ref)^exponent).
/// Downlink couples through c_fwd, uplink through c_rev, with c_fwd < c_rev.
struct NonlinearCell {
    double t_max = 0.9;
    double c_fwd = 0.01;
    double c_rev = 100.0;
    double exponent = 2.0;
    double p_ref_w = 1e-3;
    friend bool operator==(const NonlinearCell&, const NonlinearCell&) = default;
};

class ReflectionModel;

/// Wraps a base cell with a symmetric cos^q(theta_in) * cos^q(theta_out) taper.
struct AngleDependent {
    std::shared_ptr<const ReflectionModel> base;
    double q = 1.0;
};

bool operator==(const AngleDependent& a, const AngleDependent& b);

/// Parametric unit-cell response. Construct through the named factories,
/// which validate the per-variant invariants.
class ReflectionModel {
  public:
    using Variant =
        std::variant<IdealVaractor, TableVaractor, IdealPin, ActiveCell, NonlinearCell, AngleDependent>;

    /// Defaults to the full-span ideal varactor.
    ReflectionModel() : var_(IdealVaractor{}) {}

    static ReflectionModel ideal_varactor(double v_min_v, double v_max_v, double phase_span_deg,
                                          double magnitude) {
        if (!(v_min_v < v_max_v))
            throw ConfigError("ideal varactor: v_min must be below v_max");
        if (!(magnitude >= 0.0 && magnitude <= 1.0))
            throw ConfigError("ideal varactor: magnitude must be within [0, 1]");
        return ReflectionModel(IdealVaractor{v_min_v, v_max_v, phase_span_deg, magnitude});
    }

    /// Accepts samples with wrapped phases; stores them unwrapped.
    static ReflectionModel table_varactor(std::vector<VaractorTableSample> samples) {
        if (samples.empty()) throw ConfigError("table varactor: empty table");
        for (std::size_t i = 0; i < samples.size(); ++i) {
            if (!(samples[i].magnitude >= 0.0 && samples[i].magnitude <= 1.0))
                throw ConfigError("table varactor: magnitude must be within [0, 1]");
            if (i > 0 && !(samples[i].voltage_v > samples[i - 1].voltage_v))
                throw ConfigError("table varactor: voltages must be strictly increasing");
        }
        for (std::size_t i = 1; i < samples.size(); ++i) {
            const double turns = std::round((samples[i - 1].phase_deg - samples[i].phase_deg) / 360.0);
            samples[i].phase_deg += 360.0 * turns;
        }
        return ReflectionModel(TableVaractor{std::move(samples)});
    }

    static ReflectionModel ideal_pin(double phase_state_0_deg, double phase_state_1_deg,
                                     double magnitude) {
        if (!(magnitude >= 0.0 && magnitude <= 1.0))
            throw ConfigError("ideal pin: magnitude must be within [0, 1]");
        return ReflectionModel(IdealPin{phase_state_0_deg, phase_state_1_deg, magnitude});
    }

    static ReflectionModel active_cell(ActiveState state, double gain_db, double isolation_db) {
        if (isolation_db < 0.0) throw ConfigError("active cell: isolation must be >= 0 dB");
        return ReflectionModel(ActiveCell{state, gain_db, isolation_db});
    }

    static ReflectionModel nonlinear_cell(double t_max, double c_fwd, double c_rev, double exponent,
                                          double p_ref_w) {
        if (!(t_max > 0.0 && t_max <= 1.0))
            throw ConfigError("nonlinear cell: t_max must be in (0, 1]");
        if (!(c_fwd > 0.0 && c_rev > 0.0 && c_fwd < c_rev))
            throw ConfigError("nonlinear cell: requires 0 < c_fwd < c_rev");
        if (!(exponent > 0.0)) throw ConfigError("nonlinear cell: exponent must be > 0");
        if (!(p_ref_w > 0.0)) throw ConfigError("nonlinear cell: p_ref must be > 0");
        return ReflectionModel(NonlinearCell{t_max, c_fwd, c_rev, exponent, p_ref_w});
    }

    static ReflectionModel angle_dependent(ReflectionModel base, double q) {
        if (!(q >= 0.0)) throw ConfigError("angle taper: exponent q must be >= 0");
        AngleDependent a;
        a.base = std::make_shared<const ReflectionModel>(std::move(base));
        a.q = q;
        return ReflectionModel(std::move(a));
    }

    const Variant& variant() const { return var_; }

    template <typename T>
    const T* get_if() const {
        return std::get_if<T>(&var_);
    }

    friend bool operator==(const ReflectionModel& a, const ReflectionModel& b) {
        return a.var_ == b.var_;
    }

  private:
    explicit ReflectionModel(Variant v) : var_(std::move(v)) {}
    Variant var_;
};

inline bool operator==(const AngleDependent& a, const AngleDependent& b) {
    if (a.q != b.q) return false;
    if (a.base == b.base) return true;
    if (!a.base || !b.base) return false;
    return *a.base == *b.base;
}

/// Strips angle tapers; returns the innermost cell model.
inline const ReflectionModel& base_model(const ReflectionModel& m) {
    if (const auto* a = m.get_if<AngleDependent>()) return base_model(*a->base);
    return m;
}

inline bool is_continuous_model(const ReflectionModel& m) {
    const auto& b = base_model(m);
    return b.get_if<IdealVaractor>() != nullptr || b.get_if<TableVaractor>() != nullptr;
}

inline bool is_binary_model(const ReflectionModel& m) {
    return base_model(m).get_if<IdealPin>() != nullptr;
}

inline bool is_passive_model(const ReflectionModel& m) {
    return base_model(m).get_if<ActiveCell>() == nullptr;
}

/// Legal control range: voltage span for varactors, {0, 1} for PIN cells.
/// Control-free cells (active, nonlinear) report (0, 0).
inline std::pair<double, double> control_range(const ReflectionModel& m) {
    const auto& b = base_model(m);
    if (const auto* v = b.get_if<IdealVaractor>()) return {v->v_min_v, v->v_max_v};
    if (const auto* t = b.get_if<TableVaractor>())
        return {t->samples.front().voltage_v, t->samples.back().voltage_v};
    if (b.get_if<IdealPin>()) return {0.0, 1.0};
    return {0.0, 0.0};
}

/// Directional gain of a one-way cell. Passing direction gets the amplifier
/// gain, the blocked direction gets the isolation floor; Off kills both.
inline cdouble active_gain(const ActiveCell& cell, Direction direction) {
    const double pass = db_to_amplitude(cell.gain_db);
    const double blocked = db_to_amplitude(-cell.isolation_db);
    switch (cell.state) {
        case ActiveState::Bidirectional: return {pass, 0.0};
        case ActiveState::Off: return {0.0, 0.0};
        case ActiveState::ForwardOnly:
            return direction == Direction::Downlink ? cdouble{pass, 0.0} : cdouble{blocked, 0.0};
        case ActiveState::BackwardOnly:
            return direction == Direction::Uplink ? cdouble{pass, 0.0} : cdouble{blocked, 0.0};
    }
    return {0.0, 0.0};
}

/// Saturating transmission amplitude of the asymmetric nonlinear cell.
inline double nonlinear_transmission(const NonlinearCell& cell, Direction direction,
                                     double p_in_w) {
    if (p_in_w < 0.0) throw RangeError("nonlinear transmission: incident power must be >= 0");
    const double c_dir = direction == Direction::Downlink ? cell.c_fwd : cell.c_rev;
    return cell.t_max / (1.0 + std::pow(c_dir * p_in_w / cell.p_ref_w, cell.exponent));
}

/// Evaluation context for a unit-cell response. Angles are the panel-level
/// incidence and observation elevations; incident power only matters for
/// nonlinear cells.
struct EvalContext {
    double theta_in_deg = 0.0;
    double theta_out_deg = 0.0;
    Direction direction = Direction::Downlink;
    double incident_power_w = 0.0;
};

namespace detail {

inline cdouble varactor_coefficient(const IdealVaractor& m, double control) {
    if (control < m.v_min_v || control > m.v_max_v)
        throw RangeError("control voltage outside [" + std::to_string(m.v_min_v) + ", " +
                         std::to_string(m.v_max_v) + "] V");
    const double phase_deg =
        m.phase_span_deg * (control - m.v_min_v) / (m.v_max_v - m.v_min_v);
    return std::polar(m.magnitude, deg2rad(phase_deg));
}

inline cdouble table_coefficient(const TableVaractor& m, double control) {
    const auto& s = m.samples;
    if (control < s.front().voltage_v || control > s.back().voltage_v)
        throw RangeError("control voltage outside table range");
    auto hi = std::lower_bound(s.begin(), s.end(), control,
                               [](const VaractorTableSample& a, double v) { return a.voltage_v < v; });
    if (hi == s.begin()) return std::polar(hi->magnitude, deg2rad(hi->phase_deg));
    if (hi == s.end() || hi->voltage_v != control) {
        auto lo = hi - 1;
        const double t = (control - lo->voltage_v) / (hi->voltage_v - lo->voltage_v);
        const double mag = lo->magnitude + t * (hi->magnitude - lo->magnitude);
        const double phase = lo->phase_deg + t * (hi->phase_deg - lo->phase_deg);
        return std::polar(mag, deg2rad(phase));
    }
    return std::polar(hi->magnitude, deg2rad(hi->phase_deg));
}

inline cdouble pin_coefficient(const IdealPin& m, double control) {
    if (control == 0.0) return std::polar(m.magnitude, deg2rad(m.phase_state_0_deg));
    if (control == 1.0) return std::polar(m.magnitude, deg2rad(m.phase_state_1_deg));
    throw RangeError("PIN control must be exactly 0 or 1");
}

}  // namespace detail

/// Complex reflection coefficient of one unit cell under the given control
/// value. Passive variants are direction-independent; active and nonlinear
/// cells resolve the direction (and, for the latter, the incident power)
/// through the context.
inline cdouble reflection_coefficient(const ReflectionModel& model, double control,
                                      const EvalContext& ctx) {
    if (std::abs(ctx.theta_in_deg) >= 90.0 || std::abs(ctx.theta_out_deg) >= 90.0)
        throw RangeError("incidence/observation angles must satisfy |theta| < 90 deg");
    return std::visit(
        [&](const auto& m) -> cdouble {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, IdealVaractor>) {
                return detail::varactor_coefficient(m, control);
            } else if constexpr (std::is_same_v<T, TableVaractor>) {
                return detail::table_coefficient(m, control);
            } else if constexpr (std::is_same_v<T, IdealPin>) {
                return detail::pin_coefficient(m, control);
            } else if constexpr (std::is_same_v<T, ActiveCell>) {
                return active_gain(m, ctx.direction);
            } else if constexpr (std::is_same_v<T, NonlinearCell>) {
                return {nonlinear_transmission(m, ctx.direction, ctx.incident_power_w), 0.0};
            } else {
                // Symmetric taper: invariant under swap of the two angles.
                const double taper = std::pow(std::cos(deg2rad(ctx.theta_in_deg)), m.q) *
                                     std::pow(std::cos(deg2rad(ctx.theta_out_deg)), m.q);
                return reflection_coefficient(*m.base, control, ctx) * taper;
            }
        },
        model.variant());
}

inline cdouble reflection_coefficient(const ReflectionModel& model, double control,
                                      double theta_in_deg, double theta_out_deg,
                                      Direction direction) {
    return reflection_coefficient(model, control,
                                  EvalContext{theta_in_deg, theta_out_deg, direction, 0.0});
}

/// Control value that realizes the target reflection phase (degrees, any
/// representative; wrapped into [0, 360) before matching).
inline double invert_phase(const ReflectionModel& model, double target_phase_deg) {
    const auto& b = base_model(model);
    const double target = wrap_deg_360(target_phase_deg);
    if (const auto* v = b.get_if<IdealVaractor>()) {
        if (v->phase_span_deg <= 0.0)
            throw UnreachablePhaseError("varactor has non-positive phase span");
        if (target > v->phase_span_deg)
            throw UnreachablePhaseError("phase " + std::to_string(target) +
                                        " deg outside achievable span");
        return v->v_min_v + (v->v_max_v - v->v_min_v) * target / v->phase_span_deg;
    }
    if (const auto* t = b.get_if<TableVaractor>()) {
        const auto& s = t->samples;
        if (s.size() < 2) throw UnreachablePhaseError("table too short to invert");
        const bool increasing = s.back().phase_deg > s.front().phase_deg;
        for (std::size_t i = 1; i < s.size(); ++i) {
            const double step = s[i].phase_deg - s[i - 1].phase_deg;
            if ((increasing && step <= 0.0) || (!increasing && step >= 0.0))
                throw ConfigError("table phase curve is not monotone; cannot invert");
        }
        const double lo = std::min(s.front().phase_deg, s.back().phase_deg);
        const double hi = std::max(s.front().phase_deg, s.back().phase_deg);
        double cand = target + 360.0 * std::ceil((lo - target) / 360.0);
        if (cand > hi) throw UnreachablePhaseError("phase target outside achievable span");
        const auto unwrapped_phase_at = [&](double v) {
            auto hi_it = std::lower_bound(
                s.begin(), s.end(), v,
                [](const VaractorTableSample& a, double volts) { return a.voltage_v < volts; });
            if (hi_it == s.begin()) return hi_it->phase_deg;
            if (hi_it == s.end()) return s.back().phase_deg;
            auto lo_it = hi_it - 1;
            const double u = (v - lo_it->voltage_v) / (hi_it->voltage_v - lo_it->voltage_v);
            return lo_it->phase_deg + u * (hi_it->phase_deg - lo_it->phase_deg);
        };
        // Bisection on the piecewise-linear unwrapped phase curve.
        double va = s.front().voltage_v, vb = s.back().voltage_v;
        for (int it = 0; it < 200; ++it) {
            const double vm = 0.5 * (va + vb);
            if ((unwrapped_phase_at(vm) < cand) == increasing)
                va = vm;
            else
                vb = vm;
        }
        return 0.5 * (va + vb);
    }
    throw ConfigError("phase inversion requires a continuous-phase cell model");
}

enum class NonreciprocalMechanism { Active, TimeVarying, Nonlinear };

inline const char* to_string(NonreciprocalMechanism m) {
    switch (m) {
        case NonreciprocalMechanism::Active: return "active";
        case NonreciprocalMechanism::TimeVarying: return "time_varying";
        case NonreciprocalMechanism::Nonlinear: return "nonlinear";
    }
    return "?";
}

/// Scattering-symmetry classification: a model is reciprocal iff its
/// direction-resolved response is identical for uplink and downlink at
/// fixed control, fixed time, and swapped angles.
struct ReciprocityClass {
    bool reciprocal = true;
    std::optional<NonreciprocalMechanism> mechanism;

    static ReciprocityClass reciprocal_class() { return {true, std::nullopt}; }
    static ReciprocityClass nonreciprocal(NonreciprocalMechanism m) { return {false, m}; }
    friend bool operator==(const ReciprocityClass&, const ReciprocityClass&) = default;
};

inline ReciprocityClass reciprocity_class(const ReflectionModel& model) {
    const auto& b = base_model(model);
    if (const auto* a = b.get_if<ActiveCell>()) {
        // One-way states break the symmetry; bidirectional and off do not.
        if (a->state == ActiveState::ForwardOnly || a->state == ActiveState::BackwardOnly)
            return ReciprocityClass::nonreciprocal(NonreciprocalMechanism::Active);
        return ReciprocityClass::reciprocal_class();
    }
    if (b.get_if<NonlinearCell>() != nullptr)
        return ReciprocityClass::nonreciprocal(NonreciprocalMechanism::Nonlinear);
    return ReciprocityClass::reciprocal_class();
}

}  // namespace rissim
