// Copyright (C) 2026 The headcue Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "headcue/scene.hpp"
#include "headcue/signals.hpp"

namespace headcue {

/// A detected instant and the distance reached there.
struct EventPoint {
    std::int64_t frame = 0;
    double value = 0.0;

    bool operator==(const EventPoint&) const = default;
};

struct EventTimes {
    std::optional<EventPoint> gazing_target;
    std::optional<EventPoint> touching_object;
    std::optional<EventPoint> target_object;

    bool operator==(const EventTimes&) const = default;
};

struct AnticipationResult {
    std::string session_id;
    std::optional<std::string> action_label;
    Phase phase = Phase::reach;
    std::int64_t gazing_frame = 0;
    std::int64_t hand_event_frame = 0;
    /// (gazing - hand event) / fps; negative when the head leads.
    double anticipation_seconds = 0.0;
    EventTimes events;
    double fps = 30.0;
};

/// Earliest local minimum of the valid samples inside `window`.
///
/// t qualifies when s[t] <= the previous valid sample and s[t] <= the next
/// valid sample, both taken inside the window (so the first and last valid
/// samples compare only toward the interior). Plateaus therefore report
/// their first frame. With no qualifying frame the earliest argmin is
/// returned. series[k] belongs to frame first_frame + k.
///
/// Throws Error(empty_window) when the window holds no valid sample.
EventPoint first_window_min(std::span<const Sample> series, std::int64_t first_frame,
                            const FrameWindow& window);

/// Windows for a session: explicit ones from the configuration when
/// auto_split is off, otherwise reach = [first, t* + margin] and
/// transport = [t* + 1, last] with t* the earliest global minimum of the
/// smoothed d_H. The reach window end is clipped to the session; the
/// transport window is empty when t* is the last frame.
///
/// Throws Error(cannot_split) when d_H has no valid sample.
AnalysisWindows split_windows(const SignalSet& smoothed, const AnalysisWindows& configured);

/// Earliest global minimum of the valid samples, as a frame index.
std::optional<EventPoint> series_argmin(std::span<const Sample> series, std::int64_t first_frame);

/// Event search on smoothed signals. Reach fills gazing_target and
/// touching_object; transport fills gazing_target and target_object.
EventTimes detect_events(const SignalSet& smoothed, const AnalysisWindows& windows, Phase phase);

/// Throws Error(missing_event) naming the absent time.
AnticipationResult compute_anticipation(const EventTimes& events, double fps, Phase phase);

/// {"session_id","action_label","phase","gazing_frame","hand_event_frame","anticipation_seconds"}
/// on one line, fields in that order.
std::string event_record_json(const AnticipationResult& result);
AnticipationResult parse_event_record(std::string_view line);

/// Table column naming what was measured: "reach object" or "object to target".
const char* measured_quantity(Phase phase);

}  // namespace headcue
