// Copyright (C) 2026 The headcue Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "headcue/error.hpp"
#include "headcue/events.hpp"
#include "headcue/sim.hpp"
#include "headcue/signals.hpp"
#include "support.hpp"

using namespace headcue;
using namespace headcue::testing;

namespace {

// Table z = 0, camera looking straight down at it.
SceneConfig flat_scene(const std::string& cls = "bottle") {
    SceneConfig s;
    s.projection_mode = ProjectionMode::mode_3d;
    s.table_plane = Plane{{0, 0, 1}, 0.0};
    TargetSpec t;
    t.kind = TargetKind::object;
    t.object_class = cls;
    s.targets.push_back(t);
    return s;
}

// A head at height 10 looking straight at the table (yaw 180 flips +z to -z).
FrameRecord looking_down(std::int64_t i, double x, double y) {
    FrameRecord f = frame(i);
    f.keypoints.push_back(keypoint(kNose, x, y, 10.0));
    f.head_pose = pose(180.0, 0.0);
    return f;
}

}  // namespace

TEST_CASE("build_signals: 3-4-5 triangle") {
    FrameRecord f = looking_down(0, 0, 0);
    f.detections.push_back(detection("bottle", 3, 4));
    f.keypoints.push_back(keypoint(kRightWrist, 3, 4));
    const SceneConfig scene = flat_scene();
    const SignalSet s = build_signals(session({f}), scene, scene.targets[0]);
    REQUIRE(s.frame_count() == 1);
    REQUIRE(s.d_g[0].valid);
    CHECK(s.d_g[0].value == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(s.d_h[0].valid);
    CHECK(s.d_h[0].value == 0.0);
    CHECK_FALSE(s.has_d_o());
    CHECK(s.units == UnitsTag::millimeters);
}

TEST_CASE("build_signals: missing object masks its frame only") {
    std::vector<FrameRecord> frames;
    for (int i = 0; i < 12; ++i) {
        FrameRecord f = looking_down(i, 0, 0);
        f.keypoints.push_back(keypoint(kRightWrist, 50.0 - i, 0));
        if (i != 7) f.detections.push_back(detection("bottle", 20, 0));
        frames.push_back(f);
    }
    const SceneConfig scene = flat_scene();
    const SignalSet s = build_signals(session(frames), scene, scene.targets[0]);
    CHECK_FALSE(s.d_h[7].valid);
    CHECK_FALSE(s.d_g[7].valid);
    CHECK(s.d_h[6].valid);
    CHECK(s.d_h[8].valid);
    // The tracked centroid is held as "last seen", not reused for frame 7.
    CHECK(s.d_h[8].value == doctest::Approx(22.0));
}

TEST_CASE("build_signals: failure modes") {
    const SceneConfig scene = flat_scene("cup");
    FrameRecord f = looking_down(0, 0, 0);
    f.detections.push_back(detection("bottle", 3, 4));
    try {
        build_signals(session({f}), scene, scene.targets[0]);
        FAIL("expected target_unresolvable");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::target_unresolvable);
    }
    FrameRecord g = frame(0);  // no head pose, no wrist: nothing measurable
    g.detections.push_back(detection("cup", 3, 4));
    try {
        build_signals(session({g}), scene, scene.targets[0]);
        FAIL("expected no_signal");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::no_signal);
    }
}

TEST_CASE("build_signals: position target fills d_o") {
    SceneConfig scene = flat_scene();
    TargetSpec place;
    place.kind = TargetKind::position;
    place.object_class = "bottle";
    place.target_position = Vec3{100, 0, 0};
    scene.targets = {place};
    std::vector<FrameRecord> frames;
    for (int i = 0; i < 5; ++i) {
        FrameRecord f = looking_down(i, 100, 0);
        f.detections.push_back(detection("bottle", 10.0 * i, 0));
        f.keypoints.push_back(keypoint(kRightWrist, 10.0 * i, 0));
        frames.push_back(f);
    }
    const SignalSet s = build_signals(session(frames), scene, place);
    REQUIRE(s.has_d_o());
    for (int i = 0; i < 5; ++i) {
        CHECK(s.d_o[i].value == doctest::Approx(100.0 - 10.0 * i));
        CHECK(s.d_g[i].value == doctest::Approx(0.0));
    }
}

TEST_CASE("build_signals: MODE_2D measures in the image") {
    SceneConfig scene;
    scene.projection_mode = ProjectionMode::mode_2d;
    scene.table_line = TableLine{{0, 100, 0}, {640, 100, 0}};
    TargetSpec t;
    t.object_class = "cup";
    scene.targets = {t};
    FrameRecord f = frame(0);
    f.keypoints.push_back(keypoint(kNose, 50, 0));
    f.keypoints.push_back(keypoint(kRightWrist, 100, 60));
    f.head_pose = pose(0.0, 90.0);  // straight down the image
    f.detections.push_back(detection("cup", 80, 100));
    const SignalSet s = build_signals(session({f}), scene, t);
    CHECK(s.units == UnitsTag::pixels);
    CHECK(s.d_g[0].value == doctest::Approx(30.0));
    CHECK(s.d_h[0].value == doctest::Approx(std::hypot(20.0, 40.0)));
}

TEST_CASE("build_signals: automatic hand picks the closer wrist") {
    SceneConfig scene = flat_scene();
    scene.hand = HandSelection::automatic;
    std::vector<FrameRecord> frames;
    for (int i = 0; i < 5; ++i) {
        FrameRecord f = looking_down(i, 0, 0);
        f.detections.push_back(detection("bottle", 0, 0));
        f.keypoints.push_back(keypoint(kRightWrist, 40, 0));
        f.keypoints.push_back(keypoint(kLeftWrist, 30.0 - 5.0 * i, 0));
        frames.push_back(f);
    }
    CHECK(build_signals(session(frames), scene, scene.targets[0]).hand == Hand::left);
    for (auto& f : frames) f.keypoints.back().x = 50.0;
    CHECK(build_signals(session(frames), scene, scene.targets[0]).hand == Hand::right);
    for (auto& f : frames) f.keypoints.back().x = 40.0;  // tie -> right
    CHECK(build_signals(session(frames), scene, scene.targets[0]).hand == Hand::right);
}

TEST_CASE("select_target_object") {
    TargetSpec t;
    t.object_class = "bottle";
    std::vector<FrameRecord> frames;
    for (int i = 0; i < 6; ++i) {
        FrameRecord f = frame(i);
        f.detections.push_back(detection("bottle", 400.0 + 5 * i, 300));
        frames.push_back(f);
    }
    ObjectTrack track = select_target_object(session(frames), t, 80.0);
    for (int i = 0; i < 6; ++i) CHECK(track.centroids[i] == Vec3{400.0 + 5 * i, 300, 0});

    // A second, static bottle far away never steals the track.
    for (auto& f : frames) f.detections.push_back(detection("bottle", 100, 100, 10.0, 0.99));
    frames[0].detections[0].confidence = 0.999;
    track = select_target_object(session(frames), t, 80.0);
    for (int i = 0; i < 6; ++i) CHECK(track.centroids[i]->x == 400.0 + 5 * i);

    // Hint picks the first association.
    t.initial_object_position = Vec3{110, 90, 0};
    track = select_target_object(session(frames), t, 80.0);
    CHECK(track.centroids[3] == Vec3{100, 100, 0});
}

TEST_CASE("select_target_object: dropout then resume") {
    TargetSpec t;
    t.object_class = "bottle";
    std::vector<FrameRecord> frames;
    for (int i = 0; i < 10; ++i) {
        FrameRecord f = frame(i);
        if (i < 4 || i > 6) f.detections.push_back(detection("bottle", 200.0 + 3 * i, 200));
        frames.push_back(f);
    }
    const ObjectTrack track = select_target_object(session(frames), t, 30.0);
    for (int i = 4; i <= 6; ++i) CHECK_FALSE(track.centroids[i].has_value());
    REQUIRE(track.centroids[7]);
    CHECK(track.centroids[7]->x == 221.0);
}

TEST_CASE("point_distance") {
    CHECK(point_distance({0, 0, 0}, {3, 4, 0}) == 5.0);
    const Vec3 a{1e6, 1e6, 1e6};
    const Vec3 b{1e6 + 1e-9, 1e6, 1e6};
    CHECK(point_distance(a, b) == 0.0);
    CHECK(point_distance({0, 0, 0}, {1e-9, 0, 0}) > 0.0);
}

TEST_CASE("smooth: examples") {
    const Series seven = series({7, 7, 7, 7, 7, 7});
    CHECK(smooth(seven, 2) == seven);
    CHECK(smooth(series({1, 1, 9, 1, 1}), 1) == series({1, 1, 1, 1, 1}));
    const Series any = series({3, kNaN, 8, 1, kNaN, 2, 5});
    CHECK(smooth(any, 0) == any);
    // Invalid samples are skipped; a window with none stays invalid.
    CHECK(smooth(series({kNaN, kNaN, kNaN, 4}), 1) == series({kNaN, kNaN, 4, 4}));
    // Even count: mean of the middle pair.
    CHECK(smooth(series({1, 3, kNaN}), 1)[1].value == 2.0);
}

TEST_CASE("signals_to_csv") {
    SignalSet s;
    s.first_frame = 3;
    s.d_g = series({1.5, kNaN});
    s.d_h = series({kNaN, 2.25});
    const std::string csv = signals_to_csv(s);
    CHECK(csv ==
          "frame,t_seconds,d_g,d_h,d_o,valid_g,valid_h,valid_o\n"
          "3,0.100000,1.500000,,,1,0,0\n"
          "4,0.133333,,2.250000,,0,1,0\n");
}

TEST_CASE("simulated reach: both distances fall, gaze first") {
    SimConfig cfg;
    cfg.action_label = "a";
    cfg.head_lead = 0.5;
    const SimResult sim = simulate_session(cfg);
    SceneConfig scene = benchmark_scene(cfg, {{"a", Phase::reach, "bottle", cfg.object_start}});
    const SignalSet raw = build_signals(sim.session, scene, scene.targets[0]);
    const auto g = series_argmin(raw.d_g, raw.first_frame);
    const auto h = series_argmin(raw.d_h, raw.first_frame);
    REQUIRE(g);
    REQUIRE(h);
    CHECK(g->frame < h->frame);
    for (std::int64_t k = 1; k <= g->frame; ++k) CHECK(raw.d_g[k].value <= raw.d_g[k - 1].value + 1e-9);
    for (std::int64_t k = 1; k <= h->frame; ++k) CHECK(raw.d_h[k].value <= raw.d_h[k - 1].value + 1e-9);
    CHECK(raw.d_g[0].value > raw.d_g[g->frame].value);
    CHECK(raw.d_h[0].value > raw.d_h[h->frame].value);
}
