// Copyright (C) 2026 The headcue Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <optional>
#include <string>
#include <variant>

#include "headcue/ingest.hpp"
#include "headcue/vec3.hpp"

namespace headcue {

enum class FrameTag { image, scene };

/// {p : normal . p = offset}; normal is unit length.
struct Plane {
    Vec3 normal{0.0, 0.0, 1.0};
    double offset = 0.0;
    FrameTag frame_tag = FrameTag::scene;
};

/// Infinite image line through two points (z ignored).
struct TableLine {
    Vec3 a;
    Vec3 b;
};

struct GazeRay {
    Vec3 origin;
    Vec3 direction;  // unit length
};

/// A keypoint-derived position; depth_known is false when z was unavailable.
struct ObservedPoint {
    Vec3 position;
    bool depth_known = false;
};

enum class Hand { left, right };

enum class GazeFailure {
    no_head_pose,
    no_anchor,
    no_depth,
    parallel_to_table,
    away_from_table,
};

const char* to_string(GazeFailure f);

struct GazeHit {
    Vec3 point;
    double ray_parameter = 0.0;
};

using GazeProjection = std::variant<GazeHit, GazeFailure>;

/// Forward head axis for a yaw/pitch/roll triple (degrees).
///
/// Frame: x to the image right, y to the image bottom, z toward the camera.
/// The head frame at zero pose has its forward axis on +z. Rotations are
/// intrinsic yaw (about y), then pitch (about x, positive tilts the gaze
/// toward +y), then roll (about the forward axis), so roll never moves the
/// returned vector.
Vec3 head_pose_to_direction(const HeadPose& pose);

/// Nose if it clears the threshold, otherwise the confidence-weighted mean
/// of the facial keypoints that do. nullopt means gaze is undefined.
std::optional<ObservedPoint> head_anchor(const FrameRecord& frame, double confidence_threshold);

GazeProjection gaze_point_on_plane(const GazeRay& ray, const Plane& table);

/// Image-space variant: the forward axis projected onto the image plane is
/// extended from the anchor until it meets the table line.
GazeProjection gaze_point_on_line(const Vec3& anchor, const Vec3& direction,
                                  const TableLine& line);

/// Box centre with z = 0 (image frame).
Vec3 bbox_centroid(const BoundingBox& box);
inline Vec3 bbox_centroid(const Detection& d) { return bbox_centroid(d.box); }

std::optional<ObservedPoint> wrist_position(const FrameRecord& frame, Hand hand,
                                            double confidence_threshold);

/// Moves an image point along z onto the plane. nullopt when the plane is
/// parallel to the z axis.
std::optional<Vec3> lift_to_plane(double x, double y, const Plane& plane);

}  // namespace headcue
