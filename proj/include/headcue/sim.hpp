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
#include "headcue/ingest.hpp"
#include "headcue/scene.hpp"

namespace headcue {

/// Synthetic tabletop session: a seated subject looks at and reaches for an
/// object, optionally carrying it to a target position.
///
/// Image points (object_start, target_position, gaze_rest, wrist_rest) are
/// pixel coordinates lying on the table plane; head_origin carries depth.
/// Gaze and wrist follow minimum-jerk profiles. The recording starts a third
/// of the way into the reach so both cues are already moving at frame 0.
struct SimConfig {
    double fps = 30.0;
    double duration = 4.0;            // seconds
    Phase kind = Phase::reach;
    double head_lead = 0.5;           // seconds the gaze arrives before the hand
    double reach_duration = 1.6;      // seconds, wrist rest -> object
    double transport_duration = 1.6;  // seconds, object start -> target
    double noise_sigma = 0.0;         // pixels
    double dropout_rate = 0.0;        // per frame and channel
    // The head sits 200 units above the table (along its normal); objects lie
    // in front of the subject so the gaze meets the table at 30-45 degrees.
    Vec3 object_start{440.0, 360.0, 0.0};
    Vec3 target_position{560.0, 390.0, 0.0};
    Vec3 head_origin{320.0, 40.0, 120.0};
    Vec3 gaze_rest{320.0, 330.0, 0.0};
    Vec3 wrist_rest{60.0, 300.0, 0.0};
    Vec3 idle_wrist{610.0, 260.0, 0.0};  // the other hand, resting
    Plane table{{0.0, 0.8, -0.6}, 160.0, FrameTag::scene};
    std::string object_class = "bottle";
    std::string session_id = "sim";
    std::optional<std::string> action_label;
    std::uint64_t seed = 1;

    /// Throws Error(invalid_scenario) for parameters out of range or a
    /// geometry the head cannot look at.
    void validate() const;
};

struct GroundTruth {
    std::int64_t gazing_frame = 0;  // gaze reaches the object
    std::int64_t touch_frame = 0;   // wrist reaches the object
    std::optional<std::int64_t> place_frame;             // object reaches the target
    std::optional<std::int64_t> transport_gazing_frame;  // gaze reaches the target
    double anticipation_seconds = 0.0;                  // -round(lead * fps) / fps
    double head_lead_seconds = 0.0;                      // as requested
    Phase kind = Phase::reach;
};

struct SimResult {
    Session session;
    GroundTruth truth;
};

SimResult simulate_session(const SimConfig& cfg);

/// One action class of the benchmark.
struct SimAction {
    std::string label;
    Phase kind = Phase::reach;
    std::string object_class;
    Vec3 object_start;
};

/// The four tabletop actions of the benchmark: transport, touch and
/// open-close a bottle, and drinking from a glass.
std::vector<SimAction> default_actions();

struct BenchmarkConfig {
    int n_per_action = 32;
    double lead_min = 0.2;  // mean lead 0.5 s
    double lead_max = 0.8;
    std::uint64_t seed = 1;
    SimConfig base;  // kinematics, noise and geometry shared by all sessions
    std::vector<SimAction> actions = default_actions();
};

BenchmarkConfig parse_benchmark_config(std::string_view json_text);
BenchmarkConfig load_benchmark_config(const std::string& path);

struct Benchmark {
    std::vector<SimResult> sessions;  // actions in order, n_per_action each
    SceneConfig scene;                // analysis configuration matching the sessions
};

/// Deterministic for a given config; sessions are generated in parallel.
Benchmark make_benchmark(const BenchmarkConfig& cfg);

/// Analysis configuration for sessions simulated with `base` and `actions`.
SceneConfig benchmark_scene(const SimConfig& base, const std::vector<SimAction>& actions);

/// {"session_id","true_gazing_frame","true_touch_frame","true_place_frame",
///  "true_anticipation_seconds","head_lead_seconds"}
std::string manifest_record_json(const std::string& session_id, const GroundTruth& truth);

/// Writes scene.json, manifest.jsonl and sessions/<session_id>.jsonl.
/// Throws Error(io) on failure.
void write_benchmark(const Benchmark& bench, const std::string& out_dir);

/// Multiplies every spatial quantity by s (> 0); angles and confidences are
/// unchanged.
Session scale_session(const Session& session, double s);
SceneConfig scale_scene(const SceneConfig& scene, double s);

}  // namespace headcue
