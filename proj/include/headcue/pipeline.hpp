// Copyright (C) 2026 The headcue Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "headcue/error.hpp"
#include "headcue/events.hpp"
#include "headcue/ingest.hpp"
#include "headcue/scene.hpp"
#include "headcue/signals.hpp"

namespace headcue {

/// Indices of the configured targets that apply to a session's action label.
std::vector<std::size_t> applicable_targets(const SceneConfig& scene,
                                            const std::optional<std::string>& action_label);

/// Everything computed for one target of one session. On failure `error`
/// is set and the later stages are absent.
struct TargetOutcome {
    std::size_t target_index = 0;
    std::optional<SignalSet> smoothed;
    std::optional<AnalysisWindows> windows;
    std::optional<AnticipationResult> result;
    std::optional<ErrorCode> error_code;
    std::string error;
};

struct SessionAnalysis {
    SessionHeader header;
    std::vector<TargetOutcome> targets;
    /// Session-level failure (e.g. no target applies).
    std::string error;

    bool ok() const;
    std::vector<AnticipationResult> results() const;
    std::vector<std::string> errors() const;
};

/// Repair, signals, smoothing, windows, events and anticipation for each
/// applicable target. Per-target failures are recorded, not thrown.
SessionAnalysis analyze_session(const Session& session, const SceneConfig& scene);

}  // namespace headcue
