// Copyright (C) 2026 The headcue Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "headcue/kernels.hpp"

#include <algorithm>
#include <cstdint>

#include <omp.h>

namespace headcue::kernels {

namespace {

using Index = std::int64_t;

}  // namespace

Sample distance_sample(const std::optional<Vec3>& a, const std::optional<Vec3>& b) {
    if (!a || !b) return {};
    return {point_distance(*a, *b), true};
}

Sample median_at(std::span<const Sample> series, std::size_t t, int half_width) {
    thread_local std::vector<double> scratch;
    scratch.clear();
    const std::size_t h = static_cast<std::size_t>(std::max(0, half_width));
    const std::size_t lo = t >= h ? t - h : 0;
    const std::size_t hi = std::min(series.size() - 1, t + h);
    for (std::size_t k = lo; k <= hi; ++k) {
        if (series[k].valid) scratch.push_back(series[k].value);
    }
    if (scratch.empty()) return {};
    std::sort(scratch.begin(), scratch.end());
    const std::size_t m = scratch.size() / 2;
    if (scratch.size() % 2 == 1) return {scratch[m], true};
    return {(scratch[m - 1] + scratch[m]) / 2.0, true};
}

PointSeries gaze_points(std::span<const FrameRecord> frames, const PointMapper& mapper) {
    PointSeries out(frames.size());
    const Index n = static_cast<Index>(frames.size());
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < n; ++i) out[i] = mapper.gaze(frames[i]);
    return out;
}

PointSeries gaze_points_serial(std::span<const FrameRecord> frames, const PointMapper& mapper) {
    PointSeries out(frames.size());
    for (std::size_t i = 0; i < frames.size(); ++i) out[i] = mapper.gaze(frames[i]);
    return out;
}

PointSeries wrist_points(std::span<const FrameRecord> frames, const PointMapper& mapper,
                         Hand hand) {
    PointSeries out(frames.size());
    const Index n = static_cast<Index>(frames.size());
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < n; ++i) out[i] = mapper.wrist(frames[i], hand);
    return out;
}

PointSeries wrist_points_serial(std::span<const FrameRecord> frames, const PointMapper& mapper,
                                Hand hand) {
    PointSeries out(frames.size());
    for (std::size_t i = 0; i < frames.size(); ++i) out[i] = mapper.wrist(frames[i], hand);
    return out;
}

Series distances(std::span<const std::optional<Vec3>> a, std::span<const std::optional<Vec3>> b) {
    const std::size_t size = std::min(a.size(), b.size());
    Series out(size);
    const Index n = static_cast<Index>(size);
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < n; ++i) out[i] = distance_sample(a[i], b[i]);
    return out;
}

Series distances_serial(std::span<const std::optional<Vec3>> a,
                        std::span<const std::optional<Vec3>> b) {
    const std::size_t size = std::min(a.size(), b.size());
    Series out(size);
    for (std::size_t i = 0; i < size; ++i) out[i] = distance_sample(a[i], b[i]);
    return out;
}

Series distances_to(std::span<const std::optional<Vec3>> a, const Vec3& fixed) {
    Series out(a.size());
    const Index n = static_cast<Index>(a.size());
    const std::optional<Vec3> target = fixed;
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < n; ++i) out[i] = distance_sample(a[i], target);
    return out;
}

Series distances_to_serial(std::span<const std::optional<Vec3>> a, const Vec3& fixed) {
    Series out(a.size());
    const std::optional<Vec3> target = fixed;
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = distance_sample(a[i], target);
    return out;
}

Series median_smooth(std::span<const Sample> series, int half_width) {
    if (half_width <= 0) return Series(series.begin(), series.end());
    Series out(series.size());
    const Index n = static_cast<Index>(series.size());
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < n; ++i) out[i] = median_at(series, static_cast<std::size_t>(i), half_width);
    return out;
}

Series median_smooth_serial(std::span<const Sample> series, int half_width) {
    if (half_width <= 0) return Series(series.begin(), series.end());
    Series out(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) out[i] = median_at(series, i, half_width);
    return out;
}

}  // namespace headcue::kernels
