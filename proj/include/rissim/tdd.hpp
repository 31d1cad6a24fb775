#pragma once

#include <cmath>
#include <string>

#include "rissim/channel.hpp"
#include "rissim/schedule.hpp"

namespace rissim {

/// Channel seen by a TDD slot that starts at slot_time: the schedule is
/// frozen at slot_time mod T0, the instantaneous per-group controls become a
/// static pattern, and the link is evaluated as usual. Slots at different
/// times generally see different channels, which is the time-varying way to
/// break uplink/downlink symmetry.
inline ChannelSample tdd_slot_channel(const Scene& scene, const ControlSchedule& schedule,
                                      double slot_time_s, Direction direction) {
    if (slot_time_s < 0.0) throw RangeError("tdd slot: slot_time must be >= 0");
    if (schedule.group_count() != scene.panel.group_count())
        throw ConfigError("tdd slot: schedule groups do not match panel groups");

    Scene slot_scene = scene;
    slot_scene.pattern.kind = PatternKind::Custom;
    slot_scene.pattern.values = freeze_controls(schedule, slot_time_s);
    slot_scene.pattern_id =
        scene.pattern_id + "@t=" + std::to_string(slot_time_s / schedule.period_s()) + "T0";
    return evaluate_link(slot_scene, direction);
}

}  // namespace rissim
