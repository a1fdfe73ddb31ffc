// Timing harness comparing the serial reference paths against the
// OpenMP-parallel kernels. Each kernel computes identical results on both
// paths (the parallel tests assert it); this binary reports wall times.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "advstream/gapnorm.hpp"
#include "advstream/parallel.hpp"
#include "advstream/rng.hpp"
#include "advstream/sampler.hpp"
#include "advstream/switcher.hpp"

using namespace advstream;

namespace {

double time_seconds(const std::function<void()>& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void report(const char* name, double serial, double parallel) {
    std::printf("%-28s serial %8.3fs   parallel %8.3fs   speedup %.2fx\n", name, serial, parallel,
                parallel > 0 ? serial / parallel : 0.0);
}

void bench_epsilon_error() {
    Rng rng(1);
    auto sys = FiniteSetSystem::random_system(512, 400, rng);
    std::vector<std::int64_t> X, S;
    for (int i = 0; i < 60000; ++i) X.push_back(rng.next_in(1, 512));
    for (std::size_t i = 0; i < X.size(); i += 3) S.push_back(X[i]);
    double sink = 0.0;
    const double serial = time_seconds([&] { sink += epsilon_approx_error(X, S, sys, Exec::Serial); });
    const double parallel = time_seconds([&] { sink += epsilon_approx_error(X, S, sys, Exec::Parallel); });
    report("epsilon-approx ranges", serial, parallel);
    if (sink < 0) std::printf("%f", sink);
}

void bench_switcher_fanout() {
    auto make = [] {
        RobustConfig cfg;
        cfg.eps = 0.4;
        cfg.delta = 0.1;
        cfg.universe_size = 1 << 20;
        cfg.length_bound = 20000;
        cfg.query = QueryFunction::f0();
        cfg.lambda_override = 64;
        cfg.cyclic = true;
        return SketchSwitcher<KmvSketch>(cfg, [](std::int64_t i) {
            return KmvSketch(4096, splitmix64(0xBEEFu + i));
        });
    };
    auto feed = [](SketchSwitcher<KmvSketch>& sw, Exec exec) {
        Rng rng(2);
        for (int t = 0; t < 20000; ++t) sw.process({rng.next_in(1, 1 << 20), 1}, exec);
    };
    auto serial_sw = make();
    auto parallel_sw = make();
    const double serial = time_seconds([&] { feed(serial_sw, Exec::Serial); });
    const double parallel = time_seconds([&] { feed(parallel_sw, Exec::Parallel); });
    report("switcher copy fan-out", serial, parallel);
}

void bench_gapnorm_covariance() {
    GapNormDefender def(160, 6, 2.0, 3);
    auto ask = [&](std::span<const double> x) { return def.respond(x); };
    auto learn = [&](Exec exec) {
        std::vector<std::vector<double>> learned;
        Rng rng(4);
        gapnorm_learn_round(ask, learned, 160, 20000, rng, nullptr, exec);
    };
    const double serial = time_seconds([&] { learn(Exec::Serial); });
    const double parallel = time_seconds([&] { learn(Exec::Parallel); });
    report("gapnorm covariance", serial, parallel);
}

void bench_trial_pool() {
    auto trial = [](std::int64_t i) {
        auto st = SamplerState::reservoir(8, static_cast<std::uint64_t>(i));
        for (std::int64_t t = 1; t <= 5000; ++t) st.step(t, t);
        return st.sample().back().value;
    };
    std::int64_t sink = 0;
    const double serial = time_seconds([&] {
        for (const auto v : run_trials<std::int64_t>(2000, 1, trial)) sink += v;
    });
    const double parallel = time_seconds([&] {
        for (const auto v : run_trials<std::int64_t>(2000, hardware_workers(), trial)) sink += v;
    });
    report("monte-carlo trial pool", serial, parallel);
    if (sink < 0) std::printf("%lld", static_cast<long long>(sink));
}

}  // namespace

int main() {
    std::printf("workers available: %d\n", hardware_workers());
    bench_epsilon_error();
    bench_switcher_fanout();
    bench_gapnorm_covariance();
    bench_trial_pool();
    return 0;
}
