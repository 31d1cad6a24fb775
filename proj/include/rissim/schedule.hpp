#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "rissim/errors.hpp"
#include "rissim/reflection.hpp"
#include "rissim/types.hpp"

namespace rissim {

/// One piecewise-constant dwell: control value held on [start_frac, end_frac)
/// of the period.
struct ScheduleSegment {
    double start_frac = 0.0;
    double end_frac = 1.0;
    double control_value = 0.0;
    friend bool operator==(const ScheduleSegment&, const ScheduleSegment&) = default;
};

/// Periodic per-group control waveform. Each group's segments must tile
/// [0, 1) without overlap; modulation frequency is 1 / period.
class ControlSchedule {
  public:
    static ControlSchedule make(double period_s, std::vector<std::vector<ScheduleSegment>> groups) {
        if (!(period_s > 0.0)) throw ScheduleError("schedule: period must be > 0");
        if (groups.empty()) throw ScheduleError("schedule: needs at least one group");
        constexpr double kTileTol = 1e-12;
        for (std::size_t g = 0; g < groups.size(); ++g) {
            auto& segs = groups[g];
            if (segs.empty())
                throw ScheduleError("schedule: group " + std::to_string(g) + " has no segments");
            std::stable_sort(segs.begin(), segs.end(),
                             [](const ScheduleSegment& a, const ScheduleSegment& b) {
                                 return a.start_frac < b.start_frac;
                             });
            for (const auto& s : segs)
                if (!(s.end_frac > s.start_frac))
                    throw ScheduleError("schedule: group " + std::to_string(g) +
                                        " has an empty or inverted segment");
            if (std::abs(segs.front().start_frac) > kTileTol ||
                std::abs(segs.back().end_frac - 1.0) > kTileTol)
                throw ScheduleError("schedule: group " + std::to_string(g) +
                                    " must cover [0, 1)");
            for (std::size_t i = 1; i < segs.size(); ++i) {
                const double gap = segs[i].start_frac - segs[i - 1].end_frac;
                if (gap > kTileTol)
                    throw ScheduleError("schedule: group " + std::to_string(g) +
                                        " leaves a gap at " + std::to_string(segs[i].start_frac));
                if (gap < -kTileTol)
                    throw ScheduleError("schedule: group " + std::to_string(g) +
                                        " has overlapping segments at " +
                                        std::to_string(segs[i].start_frac));
            }
        }
        return ControlSchedule(period_s, std::move(groups));
    }

    double period_s() const { return period_s_; }
    double modulation_frequency_hz() const { return 1.0 / period_s_; }
    int group_count() const { return static_cast<int>(groups_.size()); }
    const std::vector<ScheduleSegment>& segments(int group) const { return groups_.at(group); }

    /// Control value at phase fraction u of the period (any real; wrapped).
    double value_at_fraction(int group, double u) const {
        double frac = u - std::floor(u);
        if (frac >= 1.0) frac = 0.0;
        const auto& segs = groups_.at(group);
        for (std::size_t i = segs.size(); i-- > 0;)
            if (frac >= segs[i].start_frac) return segs[i].control_value;
        return segs.front().control_value;
    }

    double value_at_time(int group, double t_s) const {
        return value_at_fraction(group, t_s / period_s_);
    }

    bool constant() const {
        for (const auto& segs : groups_) {
            for (const auto& s : segs)
                if (s.control_value != segs.front().control_value) return false;
            if (segs.front().control_value != groups_.front().front().control_value) return false;
        }
        return true;
    }

    friend bool operator==(const ControlSchedule& a, const ControlSchedule& b) {
        return a.period_s_ == b.period_s_ && a.groups_ == b.groups_;
    }

  private:
    ControlSchedule(double period_s, std::vector<std::vector<ScheduleSegment>> groups)
        : period_s_(period_s), groups_(std::move(groups)) {}

    double period_s_;
    std::vector<std::vector<ScheduleSegment>> groups_;
};

/// Instantaneous per-group controls with the schedule frozen at time t.
inline std::vector<double> freeze_controls(const ControlSchedule& schedule, double t_s) {
    std::vector<double> controls(schedule.group_count());
    for (int g = 0; g < schedule.group_count(); ++g)
        controls[g] = schedule.value_at_time(g, t_s);
    return controls;
}

/// Same control waveform on every group.
inline ControlSchedule make_uniform_schedule(int n_groups, double period_s,
                                             std::vector<ScheduleSegment> segments) {
    std::vector<std::vector<ScheduleSegment>> groups(n_groups, segments);
    return ControlSchedule::make(period_s, std::move(groups));
}

/// 50% duty two-state square wave shared by all groups.
inline ControlSchedule make_square_schedule(int n_groups, double period_s, double value_a,
                                            double value_b) {
    return make_uniform_schedule(n_groups, period_s,
                                 {{0.0, 0.5, value_a}, {0.5, 1.0, value_b}});
}

/// Space-time staircase: every group steps its reflection phase through
/// `time_steps` equal dwells covering a full turn, with a per-group static
/// phase offset beta_rad_per_m * x_g. The k = +1 harmonic then carries the
/// spatial gradient beta across the aperture. Control values are obtained by
/// inverting the cell model's phase curve.
inline ControlSchedule make_phase_ramp_schedule(const std::vector<double>& group_x_m,
                                                const ReflectionModel& model, double period_s,
                                                int time_steps, double beta_rad_per_m) {
    if (time_steps < 2) throw ScheduleError("phase ramp schedule: need at least 2 time steps");
    if (group_x_m.empty()) throw ScheduleError("phase ramp schedule: no groups");
    std::vector<std::vector<ScheduleSegment>> groups;
    groups.reserve(group_x_m.size());
    for (const double x : group_x_m) {
        const double offset_deg = rad2deg(beta_rad_per_m * x);
        std::vector<ScheduleSegment> segs(time_steps);
        for (int m = 0; m < time_steps; ++m) {
            const double phase = wrap_deg_360(360.0 * m / time_steps + offset_deg);
            segs[m] = {static_cast<double>(m) / time_steps,
                       static_cast<double>(m + 1) / time_steps, invert_phase(model, phase)};
        }
        segs.back().end_frac = 1.0;
        groups.push_back(std::move(segs));
    }
    return ControlSchedule::make(period_s, std::move(groups));
}

/// A schedule is reciprocal only when it never actually varies.
inline ReciprocityClass reciprocity_class(const ControlSchedule& schedule) {
    if (schedule.constant()) return ReciprocityClass::reciprocal_class();
    return ReciprocityClass::nonreciprocal(NonreciprocalMechanism::TimeVarying);
}

}  // namespace rissim
