// Copyright (C) 2026 The headcue Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "headcue/geometry.hpp"
#include "headcue/ingest.hpp"
#include "headcue/scene.hpp"

namespace headcue {

struct Sample {
    double value = 0.0;
    bool valid = false;

    bool operator==(const Sample&) const = default;
};

/// One sample per frame; sample k belongs to frame first_frame + k.
using Series = std::vector<Sample>;

enum class UnitsTag { pixels, millimeters };

const char* to_string(UnitsTag units);

struct SignalSet {
    std::int64_t first_frame = 0;
    Series d_g;  // gaze point to target
    Series d_h;  // wrist to object
    Series d_o;  // object to target position; empty for reach targets
    UnitsTag units = UnitsTag::pixels;
    double fps = 30.0;
    Hand hand = Hand::right;

    std::size_t frame_count() const { return d_g.size(); }
    bool has_d_o() const { return !d_o.empty(); }
    std::int64_t last_frame() const {
        return first_frame + static_cast<std::int64_t>(frame_count()) - 1;
    }
};

/// Per-frame points the distances are measured between. nullopt marks a
/// frame where the point is undefined.
struct SignalTrace {
    std::int64_t first_frame = 0;
    std::vector<std::optional<Vec3>> gaze;
    std::vector<std::optional<Vec3>> hand;
    std::vector<std::optional<Vec3>> object;
    std::optional<Vec3> target_position;  // position targets only
};

/// Sequential nearest-neighbour association of one object class.
///
/// The first association takes the highest-confidence detection of the class
/// (or the one nearest initial_hint when given); afterwards the detection
/// nearest the last tracked centroid within the association radius wins.
/// Frames without such a detection are reported as nullopt and leave the
/// track where it was.
class ObjectTracker {
public:
    ObjectTracker(std::string object_class, double association_radius,
                  std::optional<Vec3> initial_hint = std::nullopt);

    /// Image-frame centroid tracked in this frame.
    std::optional<Vec3> update(const FrameRecord& frame);

    bool started() const { return last_.has_value(); }
    const std::optional<Vec3>& initial_position() const { return initial_; }

private:
    std::string object_class_;
    double radius_;
    std::optional<Vec3> hint_;
    std::optional<Vec3> last_;
    std::optional<Vec3> initial_;
};

struct ObjectTrack {
    std::int64_t first_frame = 0;
    std::vector<std::optional<Vec3>> centroids;
    std::optional<Vec3> initial_position;
};

/// Throws Error(target_unresolvable) when the class never appears.
ObjectTrack select_target_object(const Session& session, const TargetSpec& target,
                                 double association_radius);

/// Maps frame-level observations into the distance frame of the projection
/// mode: the table plane (MODE_3D, points lacking depth are lifted onto it)
/// or the image plane (MODE_2D).
class PointMapper {
public:
    explicit PointMapper(const SceneConfig& scene);

    std::optional<Vec3> gaze(const FrameRecord& frame) const;
    std::optional<Vec3> wrist(const FrameRecord& frame, Hand hand) const;
    std::optional<Vec3> object(const Vec3& image_centroid) const;
    /// Throws Error(config) when a target position cannot be placed.
    Vec3 target(const TargetSpec& target) const;
    UnitsTag units() const;

private:
    const SceneConfig* scene_;
};

/// Euclidean distance; points that coincide to within floating-point
/// resolution of their magnitudes are at distance 0.
double point_distance(const Vec3& a, const Vec3& b);

SignalTrace trace_points(const Session& session, const SceneConfig& scene,
                         const TargetSpec& target, Hand hand);

/// Distances underlying event detection for one target. With
/// HandSelection::automatic both wrists are traced and the one with the
/// smaller d_h minimum is kept (right on ties).
SignalSet build_signals(const Session& session, const SceneConfig& scene,
                        const TargetSpec& target);
SignalSet build_signals(const Session& session, const SceneConfig& scene,
                        const TargetSpec& target, Hand hand);

/// Moving median over the valid samples of [t - half_width, t + half_width].
Series smooth(std::span<const Sample> series, int half_width);
SignalSet smooth(const SignalSet& signals, int half_width);

/// CSV with header frame,t_seconds,d_g,d_h,d_o,valid_g,valid_h,valid_o.
std::string signals_to_csv(const SignalSet& signals);

}  // namespace headcue
