// Copyright (C) 2026 The headcue Authors
// SPDX-License-Identifier: Apache-2.0
//
// Small builders shared by the unit tests.

#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "headcue/ingest.hpp"
#include "headcue/signals.hpp"

namespace headcue::testing {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// NaN entries become invalid samples.
inline Series series(const std::vector<double>& values) {
    Series s;
    s.reserve(values.size());
    for (double v : values) s.push_back(std::isnan(v) ? Sample{} : Sample{v, true});
    return s;
}

inline FrameRecord frame(std::int64_t index, double fps = 30.0) {
    FrameRecord f;
    f.frame_index = index;
    f.timestamp = static_cast<double>(index) / fps;
    return f;
}

inline Keypoint keypoint(std::string_view id, double x, double y,
                         std::optional<double> z = std::nullopt, double conf = 0.9) {
    return {std::string(id), x, y, z, conf};
}

inline Detection detection(const std::string& cls, double cx, double cy, double half = 10.0,
                           double conf = 0.9) {
    return {cls, {cx - half, cy - half, cx + half, cy + half}, conf};
}

inline HeadPose pose(double yaw, double pitch, double roll = 0.0, double conf = 0.9) {
    return {yaw, pitch, roll, conf};
}

inline Session session(std::vector<FrameRecord> frames, std::string id = "s",
                       std::optional<std::string> label = std::nullopt) {
    Session s;
    s.header = {std::move(id), 30.0, std::move(label)};
    s.frames = std::move(frames);
    return s;
}

}  // namespace headcue::testing
