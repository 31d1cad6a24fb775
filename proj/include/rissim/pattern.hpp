#pragma once

#include <string>
#include <vector>

#include "rissim/errors.hpp"
#include "rissim/panel.hpp"
#include "rissim/reflection.hpp"

namespace rissim {

enum class PatternKind { Identical, Gradient, Stripe, Custom };

inline const char* to_string(PatternKind k) {
    switch (k) {
        case PatternKind::Identical: return "Identical";
        case PatternKind::Gradient: return "Gradient";
        case PatternKind::Stripe: return "Stripe";
        case PatternKind::Custom: return "Custom";
    }
    return "?";
}

/// Static per-super-column control assignment (volts for varactor cells,
/// bit values 0/1 for PIN cells).
struct CodingPattern {
    PatternKind kind = PatternKind::Identical;
    std::vector<double> values;
    friend bool operator==(const CodingPattern&, const CodingPattern&) = default;
};

struct PatternParams {
    double value = 0.0;            // Identical: control shared by every group
    double delta_phase_deg = 90.0;  // Gradient: per-group phase step
    std::vector<double> values;    // Custom: explicit per-group controls
    friend bool operator==(const PatternParams&, const PatternParams&) = default;
};

inline CodingPattern make_pattern(PatternKind kind, const Panel& panel,
                                  const PatternParams& params = {}) {
    const int groups = panel.group_count();
    CodingPattern pattern{kind, {}};
    switch (kind) {
        case PatternKind::Identical:
            pattern.values.assign(groups, params.value);
            break;
        case PatternKind::Gradient: {
            if (!is_continuous_model(panel.cell_model))
                throw ConfigError("gradient pattern requires a continuous-phase cell model");
            pattern.values.resize(groups);
            for (int g = 0; g < groups; ++g)
                pattern.values[g] =
                    invert_phase(panel.cell_model, wrap_deg_360(g * params.delta_phase_deg));
            break;
        }
        case PatternKind::Stripe: {
            if (!is_binary_model(panel.cell_model))
                throw ConfigError("stripe pattern requires a binary cell model");
            pattern.values.resize(groups);
            for (int g = 0; g < groups; ++g) pattern.values[g] = g % 2 == 0 ? 0.0 : 1.0;
            break;
        }
        case PatternKind::Custom:
            if (static_cast<int>(params.values.size()) != groups)
                throw ConfigError("custom pattern: need one control value per super-column");
            pattern.values = params.values;
            break;
    }
    return pattern;
}

/// Per-element reflection coefficients under a static pattern. Every element
/// takes the coefficient of its super-column; output is row-major and has
/// one entry per element.
inline std::vector<cdouble> apply_pattern(const Panel& panel, const CodingPattern& pattern,
                                          double theta_in_deg, double theta_out_deg,
                                          Direction direction, double incident_power_w = 0.0) {
    if (static_cast<int>(pattern.values.size()) != panel.group_count())
        throw ConfigError("pattern has " + std::to_string(pattern.values.size()) +
                          " groups, panel expects " + std::to_string(panel.group_count()));
    const EvalContext ctx{theta_in_deg, theta_out_deg, direction, incident_power_w};
    std::vector<cdouble> per_group(pattern.values.size());
    for (std::size_t g = 0; g < pattern.values.size(); ++g)
        per_group[g] = reflection_coefficient(panel.cell_model, pattern.values[g], ctx);

    std::vector<cdouble> coeffs(panel.element_count());
    for (int n = 0; n < panel.element_count(); ++n) coeffs[n] = per_group[panel.group_of(n)];
    return coeffs;
}

}  // namespace rissim
