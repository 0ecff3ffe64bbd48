// Copyright (C) 2026 The headcue Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "headcue/pipeline.hpp"

namespace headcue {

std::vector<std::size_t> applicable_targets(const SceneConfig& scene,
                                            const std::optional<std::string>& action_label) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < scene.targets.size(); ++i) {
        if (scene.targets[i].applies(action_label)) out.push_back(i);
    }
    return out;
}

bool SessionAnalysis::ok() const {
    if (!error.empty()) return false;
    for (const auto& t : targets) {
        if (t.error_code) return false;
    }
    return true;
}

std::vector<AnticipationResult> SessionAnalysis::results() const {
    std::vector<AnticipationResult> out;
    for (const auto& t : targets) {
        if (t.result) out.push_back(*t.result);
    }
    return out;
}

std::vector<std::string> SessionAnalysis::errors() const {
    std::vector<std::string> out;
    if (!error.empty()) out.push_back(error);
    for (const auto& t : targets) {
        if (t.error_code) out.push_back(t.error);
    }
    return out;
}

SessionAnalysis analyze_session(const Session& session, const SceneConfig& scene) {
    SessionAnalysis out;
    out.header = session.header;
    const auto indices = applicable_targets(scene, session.header.action_label);
    if (indices.empty()) {
        out.error = "no target applies to action '" +
                    session.header.action_label.value_or("") + "'";
        return out;
    }
    const Session repaired = repair_gaps(session, scene.max_gap);

    for (std::size_t index : indices) {
        const TargetSpec& target = scene.targets[index];
        TargetOutcome t;
        t.target_index = index;
        try {
            t.smoothed = smooth(build_signals(repaired, scene, target), scene.smoothing_half_width);
            t.windows = split_windows(*t.smoothed, scene.windows);
            const EventTimes ev = detect_events(*t.smoothed, *t.windows, target.phase());
            AnticipationResult r = compute_anticipation(ev, session.header.fps, target.phase());
            r.session_id = session.header.session_id;
            r.action_label = session.header.action_label;
            t.result = std::move(r);
        } catch (const Error& e) {
            t.error_code = e.code();
            t.error = e.what();
        }
        out.targets.push_back(std::move(t));
    }
    return out;
}

}  // namespace headcue
