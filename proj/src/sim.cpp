// Copyright (C) 2026 The headcue Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "headcue/sim.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

#include "headcue/error.hpp"

namespace headcue {

namespace {

constexpr double kQuantum = 1.0 / 1024.0;  // emitted coordinates sit on this grid
constexpr double kConfidence = 0.9;
constexpr double kBoxHalfWidth = 30.0;
constexpr double kBoxHalfHeight = 40.0;

[[noreturn]] void invalid(const std::string& what) {
    throw Error(ErrorCode::invalid_scenario, "invalid scenario: " + what);
}

double quantize(double v) { return std::round(v / kQuantum) * kQuantum; }

Vec3 quantize2(const Vec3& p) { return {quantize(p.x), quantize(p.y), 0.0}; }

/// Minimum-jerk position profile on [0, 1].
double min_jerk(double tau) {
    tau = std::clamp(tau, 0.0, 1.0);
    const double t3 = tau * tau * tau;
    return t3 * (10.0 - 15.0 * tau + 6.0 * tau * tau);
}

Vec3 lerp(const Vec3& a, const Vec3& b, double s) { return a + (b - a) * s; }

std::int64_t frames_of(double seconds, double fps) {
    return static_cast<std::int64_t>(std::llround(seconds * fps));
}

/// Frame landmarks of the motion, all relative to the first recorded frame.
struct Timeline {
    std::int64_t n_frames;
    std::int64_t pre_roll;  // reach frames elapsed before recording starts
    std::int64_t touch;
    std::int64_t gaze;      // gaze reaches the object
    std::int64_t place;     // transport only
    std::int64_t gaze2;     // transport only: gaze reaches the target
    std::int64_t lead;
};

Timeline timeline(const SimConfig& c) {
    Timeline t{};
    t.n_frames = frames_of(c.duration, c.fps);
    const std::int64_t reach = frames_of(c.reach_duration, c.fps);
    t.pre_roll = std::llround(static_cast<double>(reach) / 3.0);
    t.touch = reach - t.pre_roll;
    t.lead = frames_of(c.head_lead, c.fps);
    t.gaze = t.touch - t.lead;
    t.place = t.touch + frames_of(c.transport_duration, c.fps);
    t.gaze2 = t.place - t.lead;
    return t;
}

Vec3 on_table(const Vec3& image_point, const Plane& table) {
    const auto p = lift_to_plane(image_point.x, image_point.y, table);
    if (!p) invalid("table plane is parallel to the viewing axis");
    return *p;
}

void require_visible(const SimConfig& c, const Vec3& image_point, const char* what) {
    const Vec3 d = on_table(quantize2(image_point), c.table) - c.head_origin;
    if (!(norm(d) > 0.0) || d.z <= 0.0)
        invalid(std::string(what) + " is not in front of the head");
    if (std::abs(dot(c.table.normal, normalized(d))) < 1e-6)
        invalid(std::string(what) + " is seen edge-on from the head");
}

}  // namespace

void SimConfig::validate() const {
    if (!(fps > 0.0)) invalid("fps must be positive");
    if (!(duration > 0.0)) invalid("duration must be positive");
    if (!(head_lead >= 0.0)) invalid("head_lead must be >= 0");
    if (!(noise_sigma >= 0.0)) invalid("noise_sigma must be >= 0");
    if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) invalid("dropout_rate must lie in [0, 1)");
    if (!(reach_duration > 0.0) || !(transport_duration > 0.0)) invalid("durations must be positive");
    if (std::abs(norm(table.normal) - 1.0) > 1e-9) invalid("table normal must be unit length");
    if (std::abs(dot(table.normal, head_origin) - table.offset) < 1e-6)
        invalid("head origin lies on the table");

    const Timeline t = timeline(*this);
    if (t.gaze < 2)
        invalid("head_lead leaves fewer than 2 recorded frames before the gaze arrives");
    if (kind == Phase::reach && t.n_frames < t.touch + 4)
        invalid("duration ends before the reach settles");
    if (kind == Phase::transport) {
        if (t.gaze2 < t.touch + 3) invalid("head_lead exceeds the transport duration");
        if (t.n_frames < t.place + 4) invalid("duration ends before the object is placed");
    }
    require_visible(*this, gaze_rest, "gaze_rest");
    require_visible(*this, object_start, "object_start");
    if (kind == Phase::transport) require_visible(*this, target_position, "target_position");
    if (quantize2(gaze_rest) == quantize2(object_start)) invalid("gaze already rests on the object");
}

SimResult simulate_session(const SimConfig& c) {
    c.validate();
    const Timeline t = timeline(c);
    const bool transport = c.kind == Phase::transport;
    const Vec3 O = quantize2(c.object_start);
    const Vec3 T = quantize2(c.target_position);

    // Noise-free kinematics; everything emitted is quantized.
    auto object_at = [&](std::int64_t f) {
        if (!transport || f <= t.touch) return O;
        return quantize2(lerp(O, T, min_jerk(double(f - t.touch) / double(t.place - t.touch))));
    };
    auto wrist_at = [&](std::int64_t f) {
        if (f >= t.touch) return object_at(f);
        const double tau = double(f + t.pre_roll) / double(t.touch + t.pre_roll);
        return quantize2(lerp(c.wrist_rest, O, min_jerk(tau)));
    };
    auto gaze_at = [&](std::int64_t f) {
        if (transport && f >= t.touch) {
            return quantize2(lerp(O, T, min_jerk(double(f - t.touch) / double(t.gaze2 - t.touch))));
        }
        if (f >= t.gaze) return O;
        const double tau = double(f + t.pre_roll) / double(t.gaze + t.pre_roll);
        return quantize2(lerp(c.gaze_rest, O, min_jerk(tau)));
    };

    std::mt19937_64 rng(c.seed);
    std::normal_distribution<double> noise(0.0, c.noise_sigma > 0.0 ? c.noise_sigma : 1.0);
    std::bernoulli_distribution drop(c.dropout_rate);
    auto jitter = [&](double v) { return quantize(c.noise_sigma > 0.0 ? v + noise(rng) : v); };
    auto dropped = [&] { return c.dropout_rate > 0.0 && drop(rng); };

    SimResult out;
    out.session.header = {c.session_id, c.fps, c.action_label};
    out.session.frames.reserve(static_cast<std::size_t>(t.n_frames));
    const Vec3 H = c.head_origin;
    constexpr double deg = 180.0 / std::numbers::pi;

    for (std::int64_t f = 0; f < t.n_frames; ++f) {
        FrameRecord fr;
        fr.frame_index = f;
        fr.timestamp = static_cast<double>(f) / c.fps;

        if (!dropped()) {
            const Vec3 d = normalized(on_table(gaze_at(f), c.table) - H);
            HeadPose pose;
            pose.yaw = std::atan2(d.x, d.z) * deg;
            pose.pitch = std::asin(std::clamp(d.y, -1.0, 1.0)) * deg;
            pose.roll = 3.0 * std::sin(2.0 * std::numbers::pi * fr.timestamp / 2.0);
            pose.confidence = kConfidence;
            fr.head_pose = pose;
        }
        // Facial landmarks are symmetric about the nose so any full subset
        // averages back to the head origin.
        const struct {
            std::string_view id;
            double dx, dy;
        } face[] = {{kNose, 0, 0}, {kLeftEye, 15, -10}, {kRightEye, -15, -10},
                    {kLeftEar, 35, 10}, {kRightEar, -35, 10}};
        for (const auto& lm : face) {
            if (dropped()) continue;
            fr.keypoints.push_back(
                {std::string(lm.id), jitter(H.x + lm.dx), jitter(H.y + lm.dy), H.z, kConfidence});
        }
        const Vec3 w = wrist_at(f);
        if (!dropped())
            fr.keypoints.push_back({std::string(kRightWrist), jitter(w.x), jitter(w.y),
                                    std::nullopt, kConfidence});
        if (!dropped())
            fr.keypoints.push_back({std::string(kLeftWrist), jitter(quantize(c.idle_wrist.x)),
                                    jitter(quantize(c.idle_wrist.y)), std::nullopt, kConfidence});
        if (!dropped()) {
            const Vec3 o = object_at(f);
            Detection det;
            det.class_label = c.object_class;
            det.box = {jitter(o.x - kBoxHalfWidth), jitter(o.y - kBoxHalfHeight),
                       jitter(o.x + kBoxHalfWidth), jitter(o.y + kBoxHalfHeight)};
            det.confidence = kConfidence;
            fr.detections.push_back(std::move(det));
        }
        out.session.frames.push_back(std::move(fr));
    }

    out.truth.gazing_frame = t.gaze;
    out.truth.touch_frame = t.touch;
    if (transport) {
        out.truth.place_frame = t.place;
        out.truth.transport_gazing_frame = t.gaze2;
    }
    out.truth.anticipation_seconds = -static_cast<double>(t.lead) / c.fps;
    out.truth.head_lead_seconds = c.head_lead;
    out.truth.kind = c.kind;
    return out;
}

// ---------------------------------------------------------------------------

std::vector<SimAction> default_actions() {
    return {
        {"transport bottle", Phase::transport, "bottle", {440.0, 360.0, 0.0}},
        {"touch bottle", Phase::reach, "bottle", {440.0, 360.0, 0.0}},
        {"open-close bottle", Phase::reach, "bottle", {440.0, 360.0, 0.0}},
        {"drinking", Phase::reach, "glass", {250.0, 370.0, 0.0}},
    };
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::string session_name(const std::string& label, int i) {
    std::string id;
    for (char ch : label) id += ch == ' ' ? '_' : ch;
    char buf[16];
    std::snprintf(buf, sizeof buf, "_%03d", i);
    return id + buf;
}

}  // namespace

Benchmark make_benchmark(const BenchmarkConfig& cfg) {
    if (cfg.n_per_action < 1) throw Error(ErrorCode::config, "n_per_action must be >= 1");
    if (!(cfg.lead_min >= 0.0) || cfg.lead_max < cfg.lead_min)
        throw Error(ErrorCode::config, "lead range must satisfy 0 <= min <= max");

    // Leads come from one sequential stream so they do not depend on the
    // thread schedule; each session gets its own derived noise seed.
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> lead(cfg.lead_min, cfg.lead_max);
    std::vector<SimConfig> configs;
    for (const auto& action : cfg.actions) {
        for (int i = 0; i < cfg.n_per_action; ++i) {
            SimConfig c = cfg.base;
            c.kind = action.kind;
            c.object_class = action.object_class;
            c.object_start = action.object_start;
            c.action_label = action.label;
            c.session_id = session_name(action.label, i);
            c.head_lead = lead(rng);
            c.seed = splitmix64(cfg.seed ^ splitmix64(configs.size()));
            c.validate();
            configs.push_back(std::move(c));
        }
    }

    Benchmark bench;
    bench.sessions.resize(configs.size());
    const auto n = static_cast<std::int64_t>(configs.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < n; ++i) bench.sessions[i] = simulate_session(configs[i]);
    bench.scene = benchmark_scene(cfg.base, cfg.actions);
    return bench;
}

SceneConfig benchmark_scene(const SimConfig& base, const std::vector<SimAction>& actions) {
    SceneConfig s;
    s.projection_mode = ProjectionMode::mode_3d;
    s.table_plane = base.table;
    s.hand = HandSelection::right;

    // One reach target per object class, one transport target per class that is carried.
    std::vector<std::string> classes;
    for (const auto& a : actions) {
        if (std::find(classes.begin(), classes.end(), a.object_class) == classes.end())
            classes.push_back(a.object_class);
    }
    for (const auto& cls : classes) {
        TargetSpec reach;
        reach.kind = TargetKind::object;
        reach.object_class = cls;
        for (const auto& a : actions) {
            if (a.object_class == cls) reach.applies_to.push_back(a.label);
        }
        s.targets.push_back(std::move(reach));
    }
    for (const auto& cls : classes) {
        TargetSpec place;
        place.kind = TargetKind::position;
        place.object_class = cls;
        place.target_position = quantize2(base.target_position);
        for (const auto& a : actions) {
            if (a.object_class == cls && a.kind == Phase::transport) place.applies_to.push_back(a.label);
        }
        if (!place.applies_to.empty()) s.targets.push_back(std::move(place));
    }
    return s;
}

std::string manifest_record_json(const std::string& session_id, const GroundTruth& g) {
    nlohmann::ordered_json j;
    j["session_id"] = session_id;
    j["true_gazing_frame"] = g.gazing_frame;
    j["true_touch_frame"] = g.touch_frame;
    j["true_place_frame"] = g.place_frame ? nlohmann::ordered_json(*g.place_frame) : nullptr;
    j["true_anticipation_seconds"] = g.anticipation_seconds;
    j["head_lead_seconds"] = g.head_lead_seconds;
    return j.dump();
}

void write_benchmark(const Benchmark& bench, const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(fs::path(out_dir) / "sessions", ec);
    if (ec) throw Error(ErrorCode::io, "cannot create '" + out_dir + "': " + ec.message());

    auto open = [](const fs::path& p) {
        std::ofstream out(p, std::ios::binary);
        if (!out) throw Error(ErrorCode::io, "cannot write '" + p.string() + "'");
        return out;
    };
    {
        auto out = open(fs::path(out_dir) / "scene.json");
        out << scene_config_to_json(bench.scene) << '\n';
    }
    auto manifest = open(fs::path(out_dir) / "manifest.jsonl");
    for (const auto& s : bench.sessions) {
        auto out = open(fs::path(out_dir) / "sessions" / (s.session.header.session_id + ".jsonl"));
        write_session(out, s.session);
        if (!out) throw Error(ErrorCode::io, "write failed for '" + s.session.header.session_id + "'");
        manifest << manifest_record_json(s.session.header.session_id, s.truth) << '\n';
    }
    if (!manifest) throw Error(ErrorCode::io, "write failed for manifest.jsonl");
}

// ---------------------------------------------------------------------------

Session scale_session(const Session& session, double s) {
    Session out = session;
    for (auto& f : out.frames) {
        for (auto& k : f.keypoints) {
            k.x *= s;
            k.y *= s;
            if (k.z) *k.z *= s;
        }
        for (auto& d : f.detections) {
            d.box.x0 *= s;
            d.box.y0 *= s;
            d.box.x1 *= s;
            d.box.y1 *= s;
        }
    }
    return out;
}

SceneConfig scale_scene(const SceneConfig& scene, double s) {
    SceneConfig out = scene;
    if (out.table_plane) out.table_plane->offset *= s;
    if (out.table_line) {
        out.table_line->a = out.table_line->a * s;
        out.table_line->b = out.table_line->b * s;
    }
    for (auto& t : out.targets) {
        if (t.target_position) *t.target_position = *t.target_position * s;
        if (t.initial_object_position) *t.initial_object_position = *t.initial_object_position * s;
    }
    out.association_radius *= s;
    return out;
}

// ---------------------------------------------------------------------------

namespace {

Vec3 json_point(const nlohmann::json& v, const std::string& key) {
    if (!v.is_array() || v.size() < 2 || v.size() > 3)
        throw Error(ErrorCode::config, "sim config: '" + key + "' must be [x, y] or [x, y, z]");
    Vec3 p{v[0].get<double>(), v[1].get<double>(), 0.0};
    if (v.size() == 3) p.z = v[2].get<double>();
    return p;
}

}  // namespace

BenchmarkConfig parse_benchmark_config(std::string_view text) {
    using nlohmann::json;
    const json j = json::parse(text.begin(), text.end(), nullptr, false);
    if (j.is_discarded() || !j.is_object())
        throw Error(ErrorCode::config, "sim config: not a JSON object");
    BenchmarkConfig cfg;
    SimConfig& b = cfg.base;
    try {
        for (auto it = j.begin(); it != j.end(); ++it) {
            const std::string& k = it.key();
            const json& v = it.value();
            if (k == "n_per_action") cfg.n_per_action = v.get<int>();
            else if (k == "lead_range") {
                if (!v.is_array() || v.size() != 2)
                    throw Error(ErrorCode::config, "sim config: 'lead_range' must be [min, max]");
                cfg.lead_min = v[0].get<double>();
                cfg.lead_max = v[1].get<double>();
            }
            else if (k == "seed") cfg.seed = v.get<std::uint64_t>();
            else if (k == "fps") b.fps = v.get<double>();
            else if (k == "duration") b.duration = v.get<double>();
            else if (k == "reach_duration") b.reach_duration = v.get<double>();
            else if (k == "transport_duration") b.transport_duration = v.get<double>();
            else if (k == "noise_sigma") b.noise_sigma = v.get<double>();
            else if (k == "dropout_rate") b.dropout_rate = v.get<double>();
            else if (k == "target_position") b.target_position = json_point(v, k);
            else if (k == "head_origin") b.head_origin = json_point(v, k);
            else if (k == "gaze_rest") b.gaze_rest = json_point(v, k);
            else if (k == "wrist_rest") b.wrist_rest = json_point(v, k);
            else if (k == "table_plane") {
                b.table.normal = normalized(json_point(v.at("normal"), "table_plane.normal"));
                b.table.offset = v.at("offset").get<double>();
            }
            else throw Error(ErrorCode::config, "sim config: unknown key '" + k + "'");
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::config, std::string("sim config: ") + e.what());
    }
    if (cfg.n_per_action < 1) throw Error(ErrorCode::config, "sim config: n_per_action must be >= 1");
    return cfg;
}

BenchmarkConfig load_benchmark_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::config, "cannot open sim config '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_benchmark_config(buf.str());
}

}  // namespace headcue
