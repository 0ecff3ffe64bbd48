// Copyright (C) 2026 The headcue Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "headcue/signals.hpp"

// Per-frame data-parallel kernels. Each has an OpenMP version (used by the
// batch pipeline) and a serial reference with identical arithmetic, kept for
// tests and the benchmark.

namespace headcue::kernels {

using PointSeries = std::vector<std::optional<Vec3>>;

/// Distance between two optional points; invalid when either is missing.
Sample distance_sample(const std::optional<Vec3>& a, const std::optional<Vec3>& b);

/// Median of the valid samples in series[t - half_width, t + half_width].
Sample median_at(std::span<const Sample> series, std::size_t t, int half_width);

PointSeries gaze_points(std::span<const FrameRecord> frames, const PointMapper& mapper);
PointSeries gaze_points_serial(std::span<const FrameRecord> frames, const PointMapper& mapper);

PointSeries wrist_points(std::span<const FrameRecord> frames, const PointMapper& mapper, Hand hand);
PointSeries wrist_points_serial(std::span<const FrameRecord> frames, const PointMapper& mapper,
                                Hand hand);

Series distances(std::span<const std::optional<Vec3>> a, std::span<const std::optional<Vec3>> b);
Series distances_serial(std::span<const std::optional<Vec3>> a,
                        std::span<const std::optional<Vec3>> b);

Series distances_to(std::span<const std::optional<Vec3>> a, const Vec3& fixed);
Series distances_to_serial(std::span<const std::optional<Vec3>> a, const Vec3& fixed);

Series median_smooth(std::span<const Sample> series, int half_width);
Series median_smooth_serial(std::span<const Sample> series, int half_width);

}  // namespace headcue::kernels
