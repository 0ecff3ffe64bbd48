// Copyright (C) 2026 The headcue Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "headcue/signals.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <sstream>

#include "headcue/error.hpp"
#include "headcue/kernels.hpp"

namespace headcue {

const char* to_string(UnitsTag units) {
    return units == UnitsTag::pixels ? "pixels" : "millimeters";
}

double point_distance(const Vec3& a, const Vec3& b) {
    const double d = norm(a - b);
    if (d <= 1e-12 * (norm(a) + norm(b))) return 0.0;
    return d;
}

// ---------------------------------------------------------------------------

ObjectTracker::ObjectTracker(std::string object_class, double association_radius,
                             std::optional<Vec3> initial_hint)
    : object_class_(std::move(object_class)), radius_(association_radius), hint_(initial_hint) {}

std::optional<Vec3> ObjectTracker::update(const FrameRecord& frame) {
    const Detection* chosen = nullptr;
    if (!last_ && !hint_) {
        for (const auto& det : frame.detections) {
            if (det.class_label != object_class_) continue;
            if (chosen == nullptr || det.confidence > chosen->confidence) chosen = &det;
        }
    } else {
        const Vec3 anchor = last_ ? *last_ : *hint_;
        double best = std::numeric_limits<double>::infinity();
        for (const auto& det : frame.detections) {
            if (det.class_label != object_class_) continue;
            const Vec3 c = bbox_centroid(det);
            const double d = std::hypot(c.x - anchor.x, c.y - anchor.y);
            if (d <= radius_ && d < best) {
                best = d;
                chosen = &det;
            }
        }
    }
    if (chosen == nullptr) return std::nullopt;
    const Vec3 c = bbox_centroid(*chosen);
    if (!initial_) initial_ = c;
    last_ = c;
    return c;
}

ObjectTrack select_target_object(const Session& session, const TargetSpec& target,
                                 double association_radius) {
    ObjectTracker tracker(target.object_class, association_radius, target.initial_object_position);
    ObjectTrack track;
    track.first_frame = session.frames.empty() ? 0 : session.frames.front().frame_index;
    track.centroids.reserve(session.frames.size());
    for (const auto& f : session.frames) track.centroids.push_back(tracker.update(f));
    if (!tracker.started())
        throw Error(ErrorCode::target_unresolvable,
                    "target unresolvable: class '" + target.object_class + "' never detected in '" +
                        session.header.session_id + "'");
    track.initial_position = tracker.initial_position();
    return track;
}

// ---------------------------------------------------------------------------

PointMapper::PointMapper(const SceneConfig& scene) : scene_(&scene) {}

UnitsTag PointMapper::units() const {
    return scene_->projection_mode == ProjectionMode::mode_3d ? UnitsTag::millimeters
                                                              : UnitsTag::pixels;
}

std::optional<Vec3> PointMapper::gaze(const FrameRecord& frame) const {
    if (!frame.head_pose) return std::nullopt;
    const auto anchor = head_anchor(frame, scene_->confidence_threshold);
    if (!anchor) return std::nullopt;
    const Vec3 dir = head_pose_to_direction(*frame.head_pose);

    GazeProjection hit;
    if (scene_->projection_mode == ProjectionMode::mode_3d) {
        if (!anchor->depth_known) return std::nullopt;
        hit = gaze_point_on_plane(GazeRay{anchor->position, dir}, *scene_->table_plane);
    } else {
        hit = gaze_point_on_line(anchor->position, dir, *scene_->table_line);
    }
    if (const auto* h = std::get_if<GazeHit>(&hit)) return h->point;
    return std::nullopt;
}

std::optional<Vec3> PointMapper::wrist(const FrameRecord& frame, Hand hand) const {
    const auto w = wrist_position(frame, hand, scene_->confidence_threshold);
    if (!w) return std::nullopt;
    if (scene_->projection_mode == ProjectionMode::mode_2d)
        return Vec3{w->position.x, w->position.y, 0.0};
    if (w->depth_known) return w->position;
    return lift_to_plane(w->position.x, w->position.y, *scene_->table_plane);
}

std::optional<Vec3> PointMapper::object(const Vec3& c) const {
    if (scene_->projection_mode == ProjectionMode::mode_2d) return Vec3{c.x, c.y, 0.0};
    return lift_to_plane(c.x, c.y, *scene_->table_plane);
}

Vec3 PointMapper::target(const TargetSpec& target) const {
    if (!target.target_position)
        throw Error(ErrorCode::config, "target of class '" + target.object_class +
                                           "' has no target_position");
    const Vec3 p = *target.target_position;
    if (scene_->projection_mode == ProjectionMode::mode_2d) return {p.x, p.y, 0.0};
    if (target.target_has_depth) return p;
    const auto lifted = lift_to_plane(p.x, p.y, *scene_->table_plane);
    if (!lifted)
        throw Error(ErrorCode::config, "target_position cannot be lifted onto the table plane");
    return *lifted;
}

// ---------------------------------------------------------------------------

namespace {

bool is_dense(const Session& s) {
    for (std::size_t i = 1; i < s.frames.size(); ++i) {
        if (s.frames[i].frame_index != s.frames[i - 1].frame_index + 1) return false;
    }
    return true;
}

const Session& dense_view(const Session& session, Session& storage) {
    if (is_dense(session)) return session;
    storage = repair_gaps(session, 0);
    return storage;
}

bool any_valid(const Series& s) {
    return std::any_of(s.begin(), s.end(), [](const Sample& x) { return x.valid; });
}

std::optional<double> series_min(const Series& s) {
    std::optional<double> m;
    for (const auto& x : s) {
        if (x.valid && (!m || x.value < *m)) m = x.value;
    }
    return m;
}

}  // namespace

SignalTrace trace_points(const Session& session, const SceneConfig& scene,
                         const TargetSpec& target, Hand hand) {
    Session storage;
    const Session& dense = dense_view(session, storage);
    const PointMapper mapper(scene);
    const std::span<const FrameRecord> frames(dense.frames);

    SignalTrace trace;
    trace.first_frame = frames.empty() ? 0 : frames.front().frame_index;
    trace.gaze = kernels::gaze_points(frames, mapper);
    trace.hand = kernels::wrist_points(frames, mapper, hand);

    const ObjectTrack track = select_target_object(dense, target, scene.association_radius);
    trace.object.resize(track.centroids.size());
    for (std::size_t i = 0; i < track.centroids.size(); ++i) {
        if (track.centroids[i]) trace.object[i] = mapper.object(*track.centroids[i]);
    }
    if (target.kind == TargetKind::position) trace.target_position = mapper.target(target);
    return trace;
}

namespace {

SignalSet assemble(const SignalTrace& trace, const Session& session, const SceneConfig& scene,
                   const TargetSpec& target, Hand hand) {
    SignalSet s;
    s.first_frame = trace.first_frame;
    s.fps = session.header.fps;
    s.units = PointMapper(scene).units();
    s.hand = hand;
    if (target.kind == TargetKind::object) {
        s.d_g = kernels::distances(trace.gaze, trace.object);
    } else {
        s.d_g = kernels::distances_to(trace.gaze, *trace.target_position);
        s.d_o = kernels::distances_to(trace.object, *trace.target_position);
    }
    s.d_h = kernels::distances(trace.hand, trace.object);
    return s;
}

void require_signal(const SignalSet& s, const Session& session) {
    if (!any_valid(s.d_g) && !any_valid(s.d_h) && !any_valid(s.d_o))
        throw Error(ErrorCode::no_signal,
                    "no signal: every frame of '" + session.header.session_id + "' is invalid");
}

}  // namespace

SignalSet build_signals(const Session& session, const SceneConfig& scene,
                        const TargetSpec& target, Hand hand) {
    SignalSet s = assemble(trace_points(session, scene, target, hand), session, scene, target, hand);
    require_signal(s, session);
    return s;
}

SignalSet build_signals(const Session& session, const SceneConfig& scene,
                        const TargetSpec& target) {
    switch (scene.hand) {
        case HandSelection::left: return build_signals(session, scene, target, Hand::left);
        case HandSelection::right: return build_signals(session, scene, target, Hand::right);
        case HandSelection::automatic: break;
    }
    SignalSet right = assemble(trace_points(session, scene, target, Hand::right), session, scene,
                               target, Hand::right);
    SignalSet left = assemble(trace_points(session, scene, target, Hand::left), session, scene,
                              target, Hand::left);
    const auto rmin = series_min(right.d_h);
    const auto lmin = series_min(left.d_h);
    SignalSet& chosen = (lmin && (!rmin || *lmin < *rmin)) ? left : right;
    require_signal(chosen, session);
    return std::move(chosen);
}

Series smooth(std::span<const Sample> series, int half_width) {
    return kernels::median_smooth(series, half_width);
}

SignalSet smooth(const SignalSet& signals, int half_width) {
    SignalSet out = signals;
    out.d_g = smooth(signals.d_g, half_width);
    out.d_h = smooth(signals.d_h, half_width);
    out.d_o = smooth(signals.d_o, half_width);
    return out;
}

std::string signals_to_csv(const SignalSet& s) {
    std::ostringstream os;
    os << "frame,t_seconds,d_g,d_h,d_o,valid_g,valid_h,valid_o\n";
    auto value = [](const Series& series, std::size_t i) -> std::string {
        if (i >= series.size() || !series[i].valid) return "";
        char v[64];
        std::snprintf(v, sizeof v, "%.6f", series[i].value);
        return v;
    };
    auto flag = [](const Series& series, std::size_t i) {
        return i < series.size() && series[i].valid ? '1' : '0';
    };
    for (std::size_t i = 0; i < s.frame_count(); ++i) {
        const std::int64_t frame = s.first_frame + static_cast<std::int64_t>(i);
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.6f", static_cast<double>(frame) / s.fps);
        os << frame << ',' << buf << ',' << value(s.d_g, i) << ',' << value(s.d_h, i) << ','
           << value(s.d_o, i) << ',' << flag(s.d_g, i) << ',' << flag(s.d_h, i) << ','
           << flag(s.d_o, i) << '\n';
    }
    return os.str();
}

}  // namespace headcue
