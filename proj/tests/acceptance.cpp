// Copyright (C) 2026 The headcue Authors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance run: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "headcue/cli.hpp"
#include "headcue/error.hpp"
#include "headcue/events.hpp"
#include "headcue/geometry.hpp"
#include "headcue/online.hpp"
#include "headcue/pipeline.hpp"
#include "headcue/sim.hpp"
#include "headcue/stats.hpp"

using namespace headcue;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SimConfig for_action(const SimAction& a) {
    SimConfig c;
    c.kind = a.kind;
    c.object_class = a.object_class;
    c.object_start = a.object_start;
    c.action_label = a.label;
    return c;
}

/// The record measuring the session's own phase.
std::optional<AnticipationResult> phase_record(const SessionAnalysis& a, Phase kind) {
    for (const auto& r : a.results())
        if (r.phase == kind) return r;
    return std::nullopt;
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("headcue_acceptance_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

long rss_kib() {
    std::ifstream in("/proc/self/status");
    for (std::string line; std::getline(in, line);)
        if (line.rfind("VmRSS:", 0) == 0) return std::stol(line.substr(6));
    return -1;
}

// -- 1 ----------------------------------------------------------------------

Outcome noiseless_round_trip() {
    const auto t0 = std::chrono::steady_clock::now();
    int total = 0, exact = 0;
    for (Phase kind : {Phase::reach, Phase::transport}) {
        for (int k = 0; k <= 10; ++k) {
            SimConfig c = for_action({"a", kind, "bottle", SimConfig{}.object_start});
            c.head_lead = k / 10.0;
            const SimResult sim = simulate_session(c);
            const SceneConfig scene = benchmark_scene(c, {{"a", kind, "bottle", c.object_start}});
            const auto r = phase_record(analyze_session(sim.session, scene), kind);
            ++total;
            // Frame-grid exact: -head_lead lands on round(lead * fps) / fps.
            if (r && r->anticipation_seconds == -std::round(c.head_lead * c.fps) / c.fps &&
                r->anticipation_seconds == sim.truth.anticipation_seconds)
                ++exact;
        }
    }
    const double dt = seconds_since(t0);
    return {exact == total && dt < 5.0, fmt("%d/%d exact, %.2f s", exact, total, dt)};
}

// -- 2 ----------------------------------------------------------------------

Outcome noisy_recovery() {
    const auto t0 = std::chrono::steady_clock::now();
    constexpr int kTrials = 200;
    std::mt19937_64 rng(20260);
    std::uniform_real_distribution<double> lead(0.3, 0.9);
    std::vector<SimConfig> cfgs;
    for (int i = 0; i < kTrials; ++i) {
        SimConfig c = for_action({"touch bottle", Phase::reach, "bottle", SimConfig{}.object_start});
        c.head_lead = lead(rng);
        c.noise_sigma = 2.0;
        c.dropout_rate = 0.05;
        c.seed = 1000 + i;
        cfgs.push_back(c);
    }
    std::vector<int> within(kTrials, 0);
    std::vector<double> got(kTrials, 0.0), want(kTrials, 0.0);
    std::vector<int> failed(kTrials, 0);
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < kTrials; ++i) {
        const SimResult sim = simulate_session(cfgs[i]);
        const SceneConfig scene = benchmark_scene(cfgs[i], {{"touch bottle", Phase::reach, "bottle", cfgs[i].object_start}});
        const auto r = phase_record(analyze_session(sim.session, scene), Phase::reach);
        want[i] = sim.truth.anticipation_seconds;
        if (!r) {
            failed[i] = 1;
            continue;
        }
        got[i] = r->anticipation_seconds;
        const double frames = std::abs(got[i] - want[i]) * cfgs[i].fps;
        within[i] = frames <= 2.0 + 1e-9;
    }
    const int n_within = std::accumulate(within.begin(), within.end(), 0);
    const int n_failed = std::accumulate(failed.begin(), failed.end(), 0);
    double mean_got = 0.0, mean_want = 0.0;
    int n = 0;
    for (int i = 0; i < kTrials; ++i) {
        if (failed[i]) continue;
        mean_got += got[i];
        mean_want += want[i];
        ++n;
    }
    const double group_err = n ? std::abs(mean_got - mean_want) / n : 1.0;
    const double dt = seconds_since(t0);
    const bool pass = n_within >= 180 && group_err <= 0.05 && dt < 30.0;
    return {pass, fmt("%d/%d within +-2 frames (need 180), %d unanalysable, group-mean error %.4f s, %.2f s",
                      n_within, kTrials, n_failed, group_err, dt)};
}

// -- 3 ----------------------------------------------------------------------

Outcome benchmark_scale(const std::string& fixture) {
    const fs::path dir = scratch("benchmark");
    {
        std::ofstream(dir / "sim.json")
            << R"({"n_per_action": 32, "lead_range": [0.2, 0.8], "seed": 128, "noise_sigma": 2, "dropout_rate": 0.05})";
    }
    std::ostringstream err;
    if (cli::cmd_simulate((dir / "sim.json").string(), (dir / "bench").string(), err) != cli::kOk)
        return {false, "simulate failed: " + err.str()};
    std::vector<std::string> files;
    for (const auto& e : fs::directory_iterator(dir / "bench" / "sessions")) files.push_back(e.path().string());
    std::sort(files.begin(), files.end());
    const int rc = cli::cmd_analyze((dir / "bench" / "scene.json").string(), files, (dir / "out").string(), err);

    // Grand mean over every event record, read back through the report command.
    std::ostringstream csv, rerr;
    cli::cmd_report((dir / "out").string(), "csv", csv, rerr);
    std::istringstream in(csv.str());
    std::string line;
    std::getline(in, line);
    double sum = 0.0;
    std::size_t count = 0, rows = 0;
    while (std::getline(in, line)) {
        std::vector<std::string> f;
        std::stringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
        if (f.size() != 6) continue;
        const std::size_t n = std::stoul(f[2]);
        sum += n * std::stod(f[3]);
        count += n;
        ++rows;
    }
    const double grand = count ? sum / count : 0.0;

    std::vector<AnticipationResult> trials;
    std::ifstream fx(fixture);
    for (std::string v; std::getline(fx, v);) {
        if (v.empty() || v[0] == '#') continue;
        AnticipationResult r;
        r.action_label = "transport bottle";
        r.anticipation_seconds = std::stod(v);
        trials.push_back(r);
    }
    bool fixture_ok = false;
    std::string fixture_detail = "fixture unreadable";
    if (!trials.empty()) {
        const auto s = aggregate(trials);
        fixture_ok = s.size() == 1 && std::abs(s[0].mean + 0.51) <= 0.005 && std::abs(s[0].median + 0.43) <= 0.005;
        fixture_detail = fmt("fixture mean %.4f median %.4f", s[0].mean, s[0].median);
    }
    fs::remove_all(dir);
    const bool pass = rc == cli::kOk && files.size() == 128 && std::abs(grand + 0.5) <= 0.05 && fixture_ok;
    return {pass, fmt("%zu sessions, %zu records in %zu rows, grand mean %.4f s, analyze exit %d; %s",
                      files.size(), count, rows, grand, rc, fixture_detail.c_str())};
}

// -- 4 ----------------------------------------------------------------------

// Literal definition, scanning neighbours frame by frame.
std::int64_t brute_force_min(const Series& s, const FrameWindow& w) {
    const auto n = static_cast<std::int64_t>(s.size());
    const std::int64_t lo = std::max<std::int64_t>(w.first, 0), hi = std::min(w.last, n - 1);
    for (std::int64_t t = lo; t <= hi; ++t) {
        if (!s[t].valid) continue;
        std::int64_t p = t - 1, q = t + 1;
        while (p >= lo && !s[p].valid) --p;
        while (q <= hi && !s[q].valid) ++q;
        if ((p < lo || s[t].value <= s[p].value) && (q > hi || s[t].value <= s[q].value)) return t;
    }
    std::int64_t best = -1;
    for (std::int64_t t = lo; t <= hi; ++t)
        if (s[t].valid && (best < 0 || s[t].value < s[best].value)) best = t;
    return best;
}

Outcome detector_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<int> len(1, 60), small(0, 5);
    std::uniform_real_distribution<double> real(0.0, 100.0);
    std::bernoulli_distribution drop(0.2), ties(0.5);
    int agree = 0, total = 0;
    for (int i = 0; i < 10000; ++i) {
        const int n = len(rng);
        const bool discrete = ties(rng);
        Series s(n);
        for (auto& x : s) x = drop(rng) ? Sample{} : Sample{discrete ? double(small(rng)) : real(rng), true};
        std::uniform_int_distribution<std::int64_t> pos(0, n - 1);
        std::int64_t a = pos(rng), b = pos(rng);
        if (a > b) std::swap(a, b);
        const std::int64_t want = brute_force_min(s, {a, b});
        ++total;
        try {
            if (first_window_min(s, 0, {a, b}).frame == want) ++agree;
        } catch (const Error& e) {
            if (want < 0 && e.code() == ErrorCode::empty_window) ++agree;
        }
    }
    const double dt = seconds_since(t0);
    return {agree == total && dt < 10.0, fmt("%d/%d agree, %.2f s", agree, total, dt)};
}

// -- 5 ----------------------------------------------------------------------

Outcome geometry_properties() {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> yaw(-180, 180), pitch(-90, 90), roll(-180, 180), u(-1000, 1000);
    double worst_norm = 0.0, worst_roll = 0.0, worst_plane = 0.0;
    int hits = 0;
    for (int i = 0; i < 10000; ++i) {
        const HeadPose p{yaw(rng), pitch(rng), roll(rng), 1.0};
        const Vec3 d = head_pose_to_direction(p);
        worst_norm = std::max(worst_norm, std::abs(norm(d) - 1.0));
        HeadPose q = p;
        q.roll = roll(rng);
        worst_roll = std::max(worst_roll, norm(head_pose_to_direction(q) - d));

        const Plane plane{normalized({u(rng), u(rng), u(rng)}), u(rng)};
        const GazeProjection g = gaze_point_on_plane({{u(rng), u(rng), u(rng)}, d}, plane);
        if (const auto* h = std::get_if<GazeHit>(&g)) {
            ++hits;
            worst_plane = std::max(worst_plane, std::abs(dot(plane.normal, h->point) - plane.offset));
        }
    }
    const bool pass = worst_norm <= 1e-9 && worst_roll <= 1e-9 && worst_plane <= 1e-6;
    return {pass, fmt("max |norm-1| %.2e, roll drift %.2e, plane residual %.2e over %d hits", worst_norm,
                      worst_roll, worst_plane, hits)};
}

// -- 6 ----------------------------------------------------------------------

Outcome batch_online() {
    const fs::path dir = scratch("stream");
    {
        std::ofstream(dir / "sim.json")
            << R"({"n_per_action": 13, "seed": 66, "noise_sigma": 2, "dropout_rate": 0.05})";
    }
    std::ostringstream err;
    if (cli::cmd_simulate((dir / "sim.json").string(), (dir / "bench").string(), err) != cli::kOk)
        return {false, "simulate failed"};
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir / "bench" / "sessions")) files.push_back(e.path());
    std::sort(files.begin(), files.end());
    files.resize(50);
    const std::string scene = (dir / "bench" / "scene.json").string();
    int identical = 0;
    for (const auto& f : files) {
        std::ostringstream e1, out, e2;
        cli::cmd_analyze(scene, {f.string()}, (dir / "out").string(), e1);
        std::ifstream in(f);
        cli::cmd_stream(scene, in, out, e2);
        const std::string batch = slurp(dir / "out" / (f.stem().string() + ".events.jsonl"));
        if (!batch.empty() && out.str() == batch) ++identical;
        fs::remove_all(dir / "out");
    }

    // 10^6 frames: a simulated clip replayed back to back, fed line by line.
    SimConfig c = for_action({"transport bottle", Phase::transport, "bottle", SimConfig{}.object_start});
    c.noise_sigma = 2.0;
    c.dropout_rate = 0.05;
    const SimResult clip = simulate_session(c);
    StreamAnalyzer analyzer(load_scene_config(scene));
    analyzer.feed_line(serialize_header(clip.session.header));
    const auto t0 = std::chrono::steady_clock::now();
    constexpr std::int64_t kFrames = 1000000;
    long rss_start = 0, rss_peak = 0;
    for (std::int64_t k = 0; k < kFrames; ++k) {
        FrameRecord f = clip.session.frames[k % clip.session.frames.size()];
        f.frame_index = k;
        f.timestamp = static_cast<double>(k) / c.fps;
        analyzer.feed_line(serialize_frame(f));
        if (k == 10000) rss_start = rss_kib();
        if (k % 50000 == 0) rss_peak = std::max(rss_peak, rss_kib());
    }
    std::vector<std::string> errors;
    const auto records = analyzer.finish(errors);
    const double dt = seconds_since(t0);
    rss_peak = std::max(rss_peak, rss_kib());
    const long growth = rss_peak - rss_start;
    fs::remove_all(dir);
    constexpr long kBudgetKiB = 8 * 1024;
    const bool pass = identical == 50 && analyzer.frames_seen() == kFrames && !records.empty() &&
                      growth <= kBudgetKiB;
    return {pass, fmt("%d/50 byte-identical; 1e6-frame stream in %.1f s, RSS growth %ld KiB (budget %ld), %zu records",
                      identical, dt, growth, kBudgetKiB, records.size())};
}

// -- 7 ----------------------------------------------------------------------

Outcome scale_invariance() {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0), lead(0.2, 0.8);
    const auto actions = default_actions();
    int same = 0;
    for (int i = 0; i < 100; ++i) {
        SimConfig c = for_action(actions[i % actions.size()]);
        c.head_lead = lead(rng);
        c.noise_sigma = 2.0;
        c.dropout_rate = 0.05;
        c.seed = 7000 + i;
        const double s = 100.0 * (1.0 - unit(rng));  // (0, 100]
        const SimResult sim = simulate_session(c);
        const SceneConfig scene = benchmark_scene(c, actions);
        const SessionAnalysis a = analyze_session(sim.session, scene);
        const SessionAnalysis b = analyze_session(scale_session(sim.session, s), scale_scene(scene, s));
        bool equal = a.targets.size() == b.targets.size() && !a.targets.empty();
        for (std::size_t t = 0; equal && t < a.targets.size(); ++t) {
            const auto& x = a.targets[t].result;
            const auto& y = b.targets[t].result;
            // A target that fails must fail the same way at every scale.
            if (!x || !y) {
                equal = !x && !y && a.targets[t].error == b.targets[t].error;
                continue;
            }
            equal = x->events.gazing_target->frame == y->events.gazing_target->frame &&
                    x->hand_event_frame == y->hand_event_frame &&
                    x->events.touching_object.has_value() == y->events.touching_object.has_value() &&
                    a.targets[t].windows == b.targets[t].windows;
        }
        same += equal;
    }
    return {same == 100, fmt("%d/100 trials with identical event frames and failures", same)};
}

}  // namespace

int main(int argc, char** argv) {
    const std::string fixture = argc > 1 ? argv[1] : "tests/fixtures/transport_bottle_trials.txt";
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"1 noiseless oracle round-trip", noiseless_round_trip},
        {"2 noisy recovery", noisy_recovery},
        {"3 benchmark-scale consistency", [&] { return benchmark_scale(fixture); }},
        {"4 event-detector oracle equivalence", detector_oracle},
        {"5 geometry property suite", geometry_properties},
        {"6 batch/online equivalence", batch_online},
        {"7 argmin scale invariance", scale_invariance},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s criterion %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
        std::fflush(stdout);
        failed += !o.pass;
    }
    return failed;
}
