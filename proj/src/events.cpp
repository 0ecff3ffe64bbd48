// Copyright (C) 2026 The headcue Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "headcue/events.hpp"

#include <algorithm>

#include <json.hpp>

#include "headcue/error.hpp"

namespace headcue {

namespace {

std::string window_text(const FrameWindow& w) {
    return "[" + std::to_string(w.first) + ", " + std::to_string(w.last) + "]";
}

}  // namespace

EventPoint first_window_min(std::span<const Sample> series, std::int64_t first_frame,
                            const FrameWindow& window) {
    const auto n = static_cast<std::int64_t>(series.size());
    const std::int64_t lo = std::max<std::int64_t>(window.first - first_frame, 0);
    const std::int64_t hi = std::min<std::int64_t>(window.last - first_frame, n - 1);

    // Walk valid samples keeping one of look-behind; a candidate is settled
    // once the next valid sample (or the window end) is seen. -1 = none.
    std::int64_t prev = -1;
    std::int64_t best = -1;  // argmin fallback
    std::int64_t candidate = -1;
    auto at = [&](std::int64_t k) { return EventPoint{first_frame + k, series[k].value}; };
    for (std::int64_t k = lo; k <= hi; ++k) {
        if (!series[k].valid) continue;
        const double v = series[k].value;
        if (candidate >= 0) {
            if (v >= series[candidate].value) return at(candidate);
            candidate = -1;
        }
        if (prev < 0 || v <= series[prev].value) candidate = k;
        if (best < 0 || v < series[best].value) best = k;
        prev = k;
    }
    if (candidate >= 0) return at(candidate);
    if (best >= 0) return at(best);
    throw Error(ErrorCode::empty_window, "empty window " + window_text(window));
}

std::optional<EventPoint> series_argmin(std::span<const Sample> series, std::int64_t first_frame) {
    std::optional<EventPoint> best;
    for (std::size_t k = 0; k < series.size(); ++k) {
        if (series[k].valid && (!best || series[k].value < best->value))
            best = EventPoint{first_frame + static_cast<std::int64_t>(k), series[k].value};
    }
    return best;
}

AnalysisWindows split_windows(const SignalSet& smoothed, const AnalysisWindows& configured) {
    if (!configured.auto_split) return configured;
    const auto touch = series_argmin(smoothed.d_h, smoothed.first_frame);
    if (!touch) throw Error(ErrorCode::cannot_split, "cannot split: d_H has no valid sample");
    AnalysisWindows out = configured;
    const std::int64_t last = smoothed.last_frame();
    out.reach_window = FrameWindow{smoothed.first_frame, std::min(touch->frame + configured.margin, last)};
    out.transport_window = FrameWindow{touch->frame + 1, last};
    return out;
}

EventTimes detect_events(const SignalSet& s, const AnalysisWindows& windows, Phase phase) {
    auto search = [&](const Series& series, const std::optional<FrameWindow>& window,
                      const char* event, const char* window_name) {
        if (!window)
            throw Error(ErrorCode::empty_window,
                        std::string(event) + ": no " + window_name + " configured");
        try {
            return first_window_min(series, s.first_frame, *window);
        } catch (const Error& e) {
            throw Error(e.code(), std::string(event) + ": " + e.what());
        }
    };

    EventTimes ev;
    if (phase == Phase::reach) {
        ev.gazing_target = search(s.d_g, windows.reach_window, "gazing_target_time", "reach_window");
        ev.touching_object =
            search(s.d_h, windows.reach_window, "touching_object_time", "reach_window");
    } else {
        if (!s.has_d_o())
            throw Error(ErrorCode::missing_event, "target_object_time: no d_O series");
        ev.gazing_target =
            search(s.d_g, windows.transport_window, "gazing_target_time", "transport_window");
        ev.target_object =
            search(s.d_o, windows.transport_window, "target_object_time", "transport_window");
    }
    return ev;
}

AnticipationResult compute_anticipation(const EventTimes& events, double fps, Phase phase) {
    if (!(fps > 0.0)) throw Error(ErrorCode::config, "fps must be positive");
    if (!events.gazing_target)
        throw Error(ErrorCode::missing_event, "missing gazing_target_time");
    const auto& hand = phase == Phase::reach ? events.touching_object : events.target_object;
    if (!hand)
        throw Error(ErrorCode::missing_event, phase == Phase::reach
                                                  ? "missing touching_object_time"
                                                  : "missing target_object_time");
    AnticipationResult r;
    r.phase = phase;
    r.events = events;
    r.fps = fps;
    r.gazing_frame = events.gazing_target->frame;
    r.hand_event_frame = hand->frame;
    r.anticipation_seconds = static_cast<double>(r.gazing_frame - r.hand_event_frame) / fps;
    return r;
}

std::string event_record_json(const AnticipationResult& r) {
    nlohmann::ordered_json j;
    j["session_id"] = r.session_id;
    j["action_label"] = r.action_label ? nlohmann::ordered_json(*r.action_label) : nullptr;
    j["phase"] = to_string(r.phase);
    j["gazing_frame"] = r.gazing_frame;
    j["hand_event_frame"] = r.hand_event_frame;
    j["anticipation_seconds"] = r.anticipation_seconds;
    return j.dump();
}

AnticipationResult parse_event_record(std::string_view line) {
    AnticipationResult r;
    try {
        const auto j = nlohmann::json::parse(line);
        r.session_id = j.at("session_id").get<std::string>();
        if (!j.at("action_label").is_null()) r.action_label = j["action_label"].get<std::string>();
        const auto phase = j.at("phase").get<std::string>();
        if (phase == "reach") r.phase = Phase::reach;
        else if (phase == "transport") r.phase = Phase::transport;
        else throw Error(ErrorCode::parse, "unknown phase '" + phase + "'");
        r.gazing_frame = j.at("gazing_frame").get<std::int64_t>();
        r.hand_event_frame = j.at("hand_event_frame").get<std::int64_t>();
        r.anticipation_seconds = j.at("anticipation_seconds").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::parse, std::string("bad event record: ") + e.what());
    }
    return r;
}

const char* measured_quantity(Phase phase) {
    return phase == Phase::reach ? "reach object" : "object to target";
}

}  // namespace headcue
