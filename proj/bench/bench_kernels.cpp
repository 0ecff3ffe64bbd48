// Copyright (C) 2026 The headcue Authors
// SPDX-License-Identifier: Apache-2.0
//
// Serial reference vs OpenMP kernels. Usage: headcue_bench [n_samples]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>

#include "headcue/kernels.hpp"
#include "headcue/sim.hpp"

using namespace headcue;

namespace {

template <class F>
double best_ms(F&& f, int reps = 5) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        best = std::min(best, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

template <class Serial, class Parallel>
void compare(const char* name, Serial&& serial, Parallel&& parallel) {
    decltype(serial()) a, b;
    const double ts = best_ms([&] { a = serial(); });
    const double tp = best_ms([&] { b = parallel(); });
    std::printf("%-14s serial %9.2f ms  parallel %9.2f ms  speedup %5.2fx  %s\n", name, ts, tp, ts / tp,
                a == b ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
    const std::size_t n = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 2000000;
    std::printf("threads %d, %zu samples\n", omp_get_max_threads(), n);

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 500.0);
    std::bernoulli_distribution drop(0.05);
    Series s(n);
    kernels::PointSeries a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!drop(rng)) s[i] = {u(rng), true};
        if (!drop(rng)) a[i] = Vec3{u(rng), u(rng), u(rng)};
        if (!drop(rng)) b[i] = Vec3{u(rng), u(rng), u(rng)};
    }
    compare("median h=2", [&] { return kernels::median_smooth_serial(s, 2); },
            [&] { return kernels::median_smooth(s, 2); });
    compare("median h=7", [&] { return kernels::median_smooth_serial(s, 7); },
            [&] { return kernels::median_smooth(s, 7); });
    compare("distances", [&] { return kernels::distances_serial(a, b); },
            [&] { return kernels::distances(a, b); });

    SimConfig cfg;
    cfg.duration = static_cast<double>(n / 10) / cfg.fps;
    cfg.noise_sigma = 2.0;
    const SimResult sim = simulate_session(cfg);
    const SceneConfig scene = benchmark_scene(cfg, default_actions());
    const PointMapper mapper(scene);
    const auto& frames = sim.session.frames;
    std::printf("gaze/wrist kernels over %zu frames\n", frames.size());
    compare("gaze points", [&] { return kernels::gaze_points_serial(frames, mapper); },
            [&] { return kernels::gaze_points(frames, mapper); });
    compare("wrist points", [&] { return kernels::wrist_points_serial(frames, mapper, Hand::right); },
            [&] { return kernels::wrist_points(frames, mapper, Hand::right); });
    return 0;
}
