// Copyright (C) 2026 The headcue Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "headcue/geometry.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace headcue {

namespace {

constexpr double kParallelEps = 1e-9;

constexpr double deg2rad(double d) { return d * std::numbers::pi / 180.0; }

}  // namespace

const char* to_string(GazeFailure f) {
    switch (f) {
        case GazeFailure::no_head_pose: return "no head pose";
        case GazeFailure::no_anchor: return "gaze undefined (no facial keypoint)";
        case GazeFailure::no_depth: return "gaze undefined (anchor has no depth)";
        case GazeFailure::parallel_to_table: return "ray parallel to table";
        case GazeFailure::away_from_table: return "gaze away from table";
    }
    return "gaze undefined";
}

Vec3 head_pose_to_direction(const HeadPose& pose) {
    // R_y(yaw) * R_x(pitch) * R_z(roll) applied to (0, 0, 1).
    const double yaw = deg2rad(pose.yaw);
    const double pitch = deg2rad(pose.pitch);
    const double cp = std::cos(pitch);
    return {std::sin(yaw) * cp, std::sin(pitch), std::cos(yaw) * cp};
}

std::optional<ObservedPoint> head_anchor(const FrameRecord& frame, double confidence_threshold) {
    if (const Keypoint* nose = frame.find_keypoint(kNose);
        nose != nullptr && nose->confidence >= confidence_threshold) {
        return ObservedPoint{{nose->x, nose->y, nose->z.value_or(0.0)}, nose->z.has_value()};
    }

    constexpr std::array<std::string_view, 4> kFace = {kLeftEye, kRightEye, kLeftEar, kRightEar};
    double wsum = 0.0, wx = 0.0, wy = 0.0;
    double zsum = 0.0, wz = 0.0;
    for (auto id : kFace) {
        const Keypoint* kp = frame.find_keypoint(id);
        if (kp == nullptr || kp->confidence < confidence_threshold || kp->confidence <= 0.0)
            continue;
        wsum += kp->confidence;
        wx += kp->confidence * kp->x;
        wy += kp->confidence * kp->y;
        if (kp->z) {
            zsum += kp->confidence;
            wz += kp->confidence * *kp->z;
        }
    }
    if (wsum <= 0.0) return std::nullopt;
    ObservedPoint p;
    p.position = {wx / wsum, wy / wsum, zsum > 0.0 ? wz / zsum : 0.0};
    p.depth_known = zsum > 0.0;
    return p;
}

GazeProjection gaze_point_on_plane(const GazeRay& ray, const Plane& table) {
    const double denom = dot(table.normal, ray.direction);
    if (std::abs(denom) < kParallelEps) return GazeFailure::parallel_to_table;
    const double t = (table.offset - dot(table.normal, ray.origin)) / denom;
    if (!(t > 0.0)) return GazeFailure::away_from_table;
    return GazeHit{ray.origin + ray.direction * t, t};
}

GazeProjection gaze_point_on_line(const Vec3& anchor, const Vec3& direction,
                                  const TableLine& line) {
    // Solve anchor + t * d = a + s * (b - a) in the image plane.
    const double dx = direction.x, dy = direction.y;
    const double ex = line.b.x - line.a.x, ey = line.b.y - line.a.y;
    const double dlen = std::hypot(dx, dy);
    const double elen = std::hypot(ex, ey);
    if (dlen < kParallelEps || elen == 0.0) return GazeFailure::parallel_to_table;
    const double det = dx * (-ey) - dy * (-ex);
    if (std::abs(det) < kParallelEps * dlen * elen) return GazeFailure::parallel_to_table;
    const double rx = line.a.x - anchor.x, ry = line.a.y - anchor.y;
    const double t = (rx * (-ey) - ry * (-ex)) / det;
    if (!(t > 0.0)) return GazeFailure::away_from_table;
    return GazeHit{{anchor.x + t * dx, anchor.y + t * dy, 0.0}, t};
}

Vec3 bbox_centroid(const BoundingBox& box) {
    return {(box.x0 + box.x1) / 2.0, (box.y0 + box.y1) / 2.0, 0.0};
}

std::optional<ObservedPoint> wrist_position(const FrameRecord& frame, Hand hand,
                                            double confidence_threshold) {
    const Keypoint* kp = frame.find_keypoint(hand == Hand::left ? kLeftWrist : kRightWrist);
    if (kp == nullptr || kp->confidence < confidence_threshold) return std::nullopt;
    return ObservedPoint{{kp->x, kp->y, kp->z.value_or(0.0)}, kp->z.has_value()};
}

std::optional<Vec3> lift_to_plane(double x, double y, const Plane& plane) {
    if (std::abs(plane.normal.z) < kParallelEps) return std::nullopt;
    const double z = (plane.offset - plane.normal.x * x - plane.normal.y * y) / plane.normal.z;
    return Vec3{x, y, z};
}

}  // namespace headcue
