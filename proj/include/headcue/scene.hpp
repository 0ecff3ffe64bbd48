// Copyright (C) 2026 The headcue Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "headcue/geometry.hpp"

namespace headcue {

enum class ProjectionMode { mode_3d, mode_2d };
enum class HandSelection { left, right, automatic };
enum class TargetKind { object, position };
enum class Phase { reach, transport };

const char* to_string(Phase phase);

/// What the gaze is expected to land on.
///
/// kind == object: the tracked object of class object_class (a reach).
/// kind == position: the fixed target_position; object_class names the
/// transported object (a transport).
struct TargetSpec {
    TargetKind kind = TargetKind::object;
    std::string object_class;
    std::optional<Vec3> target_position;
    /// z is absent when the position was given as an image point.
    bool target_has_depth = false;
    std::optional<Vec3> initial_object_position;
    /// Action labels this target applies to; empty means every session.
    std::vector<std::string> applies_to;

    Phase phase() const { return kind == TargetKind::object ? Phase::reach : Phase::transport; }
    bool applies(const std::optional<std::string>& action_label) const;
};

/// Closed frame-index interval.
struct FrameWindow {
    std::int64_t first = 0;
    std::int64_t last = 0;

    bool contains(std::int64_t f) const { return f >= first && f <= last; }
    bool operator==(const FrameWindow&) const = default;
};

inline constexpr int kDefaultSplitMargin = 5;

struct AnalysisWindows {
    std::optional<FrameWindow> reach_window;
    std::optional<FrameWindow> transport_window;
    bool auto_split = true;
    int margin = kDefaultSplitMargin;

    bool operator==(const AnalysisWindows&) const = default;
};

struct SceneConfig {
    ProjectionMode projection_mode = ProjectionMode::mode_3d;
    std::optional<Plane> table_plane;
    std::optional<TableLine> table_line;
    std::vector<TargetSpec> targets;
    HandSelection hand = HandSelection::right;
    AnalysisWindows windows;
    int smoothing_half_width = 2;
    int max_gap = 5;
    double association_radius = 80.0;
    double confidence_threshold = 0.3;

    /// Throws Error(config) when the selected mode lacks its geometry or a
    /// threshold is out of range.
    void validate() const;
};

SceneConfig parse_scene_config(std::string_view json_text);
SceneConfig load_scene_config(const std::string& path);
std::string scene_config_to_json(const SceneConfig& scene);

}  // namespace headcue
