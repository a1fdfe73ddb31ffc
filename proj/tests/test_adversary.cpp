#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "advstream/defenders.hpp"
#include "advstream/gapnorm.hpp"
#include "advstream/game.hpp"
#include "advstream/interval_attack.hpp"
#include "advstream/rng.hpp"

using namespace advstream;

TEST_CASE("play_game: fixed replay, determinism, round-count contract") {
    const Responder echo = [](const json& sub) -> json { return sub.get<std::int64_t>() * 2; };
    const std::vector<json> recording{3, 1, 4, 1, 5};
    auto tr = play_game(fixed_replay_strategy(recording), echo, 5, 42);
    REQUIRE(tr.rounds.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) CHECK(tr.rounds[i].submission == recording[i]);
    CHECK_FALSE(tr.truncated);

    // Exhaustion past the recording truncates and flags.
    auto longer = play_game(fixed_replay_strategy(recording), echo, 8, 42);
    CHECK(longer.truncated);
    CHECK(longer.rounds.size() == 5);

    // Same seed, response-dependent strategy: identical transcripts.
    const Strategy adaptive = [](const GameTranscript& so_far, Rng& rng) -> std::optional<json> {
        std::int64_t base = so_far.rounds.empty() ? 1 : so_far.rounds.back().response.get<std::int64_t>();
        return base + static_cast<std::int64_t>(rng.next_below(3));
    };
    auto a = play_game(adaptive, echo, 20, 7);
    auto b = play_game(adaptive, echo, 20, 7);
    REQUIRE(a.rounds.size() == b.rounds.size());
    for (std::size_t i = 0; i < a.rounds.size(); ++i) {
        CHECK(a.rounds[i].submission == b.rounds[i].submission);
        CHECK(a.rounds[i].response == b.rounds[i].response);
    }

    CHECK_THROWS_AS(play_game(fixed_replay_strategy(recording), echo, 0, 1), ConfigError);
}

TEST_CASE("transcript jsonl round trip and replay checking") {
    const std::string path = (std::filesystem::temp_directory_path() / "advstream_tr_test.jsonl").string();
    Responder defender = make_defender("bernoulli:p=0.35", 99);
    const Strategy counter = [](const GameTranscript& so_far, Rng&) -> std::optional<json> {
        return static_cast<std::int64_t>(so_far.rounds.size() + 1);
    };
    auto tr = play_game(counter, defender, 40, 5, {{"defender", "bernoulli:p=0.35"}, {"defender_seed", 99}});
    tr.save_jsonl(path);
    auto loaded = GameTranscript::load_jsonl(path);
    REQUIRE(loaded.rounds.size() == tr.rounds.size());

    // A fresh defender with the recorded seed reproduces every response.
    Responder replay_def = make_defender("bernoulli:p=0.35", 99);
    CHECK_FALSE(replay_mismatch(loaded, replay_def).has_value());

    // A defender with different randomness does not.
    Responder other = make_defender("bernoulli:p=0.35", 100);
    CHECK(replay_mismatch(loaded, other).has_value());
    std::remove(path.c_str());
}

TEST_CASE("interval_attack_step: formula and boundary updates") {
    IntervalAttackState st;
    st.low_bound = 1;
    st.high_bound = 11;
    st.effective_rate = 0.5;
    const auto x = interval_attack_submission(st);
    REQUIRE(x.has_value());
    CHECK(*x == 6);
    const auto accepted = interval_attack_step(st, *x, true);
    CHECK(accepted.low_bound == 6);
    CHECK(accepted.high_bound == 11);
    const auto rejected = interval_attack_step(st, *x, false);
    CHECK(rejected.low_bound == 1);
    CHECK(rejected.high_bound == 6);
}

TEST_CASE("interval_attack: effective rate takes the ln(n)/n floor") {
    IntervalAttackParams p;
    p.stream_length = 100;
    p.sampler_rate = 0.001;
    p.universe_size = std::int64_t{1} << 50;
    p.seed = 5;
    const auto result = run_interval_attack(p);
    CHECK(result.effective_rate == doctest::Approx(std::log(100.0) / 100.0));
}

TEST_CASE("interval_attack: invariants and final-error witness on desk runs") {
    int succeeded = 0;
    for (int s = 0; s < 40; ++s) {
        IntervalAttackParams p;
        p.stream_length = 400;
        p.sampler_rate = 0.01;
        p.universe_size = std::int64_t{1} << 40;
        p.seed = splitmix64(404u + s);
        const auto result = run_interval_attack(p);
        CHECK(result.invariant_ok);
        if (result.final_error) {
            // Whenever the invariant holds the witness range [1, max S]
            // forces error at least 1 - |S|/|X|.
            const double floor = 1.0 - static_cast<double>(result.sample_size) /
                                           static_cast<double>(result.stream_size);
            CHECK(*result.final_error >= floor - 1e-12);
            if (*result.final_error >= 0.5) ++succeeded;
        }
    }
    CHECK(succeeded >= 20);
}

TEST_CASE("interval_attack: collapse lemma holds in the uncapped regime") {
    // n = 100 keeps N = 2^(n/2) inside the regime where the gap stays >= n
    // whenever |S| < 2 n p'.
    int checked = 0;
    for (int s = 0; s < 60; ++s) {
        IntervalAttackParams p;
        p.stream_length = 100;
        p.sampler_rate = 0.02;
        p.universe_size = interval_attack_universe(p.stream_length);
        p.seed = splitmix64(7070u + s);
        p.record_transcript = true;
        const auto result = run_interval_attack(p);
        if (!result.sample_bound_held) continue;
        ++checked;
        CHECK_FALSE(result.exhausted);
        for (const auto& round : result.transcript.rounds) {
            const std::int64_t gap = round.markers.at("high").get<std::int64_t>() -
                                     round.markers.at("low").get<std::int64_t>();
            CHECK(gap >= p.stream_length);
        }
    }
    CHECK(checked >= 40);
}

TEST_CASE("interval_attack: duplicate-low fill keeps the stream at full length") {
    IntervalAttackParams p;
    p.stream_length = 2000;
    p.sampler_rate = 0.25;  // aggressive rate collapses the interval quickly
    p.universe_size = std::int64_t{1} << 40;
    p.seed = 31;
    p.fill = IntervalFill::DuplicateLow;
    const auto result = run_interval_attack(p);
    CHECK(result.exhausted);
    CHECK(result.stream_size == 2000);
    CHECK(result.invariant_ok);  // concession rounds are exempt
    REQUIRE(result.final_error.has_value());
    // A 25% Bernoulli sample of a mostly-constant stream approximates it.
    CHECK(*result.final_error < 0.25);

    IntervalAttackParams trunc = p;
    trunc.fill = IntervalFill::Truncate;
    const auto truncated = run_interval_attack(trunc);
    CHECK(truncated.exhausted);
    CHECK(truncated.transcript.truncated);
    CHECK(truncated.stream_size < 2000);
}

TEST_CASE("gapnorm defender: contract on zero, row-space, and kernel inputs") {
    const std::int64_t n = 40, r = 4;
    GapNormDefender def(n, r, 2.0, 77);
    const std::vector<double> zero(n, 0.0);
    CHECK(def.respond(zero) == 0);

    // Norm-B vector inside the row space: projection preserves norm.
    std::vector<double> aligned(n, 0.0);
    for (std::int64_t i = 0; i < n; ++i) aligned[static_cast<std::size_t>(i)] = 2.0 * def.row(0)[static_cast<std::size_t>(i)];
    CHECK(def.respond(aligned) == 1);

    // Norm-B vector in the kernel: a forced mistake by construction.
    Rng rng(3);
    std::vector<double> kernel(n);
    for (auto& v : kernel) v = rng.next_gaussian();
    for (std::int64_t i = 0; i < r; ++i) {
        double c = 0.0;
        for (std::int64_t j = 0; j < n; ++j) c += kernel[static_cast<std::size_t>(j)] * def.row(i)[static_cast<std::size_t>(j)];
        for (std::int64_t j = 0; j < n; ++j) kernel[static_cast<std::size_t>(j)] -= c * def.row(i)[static_cast<std::size_t>(j)];
    }
    double len = 0.0;
    for (double v : kernel) len += v * v;
    len = std::sqrt(len);
    for (auto& v : kernel) v *= 2.0 / len;
    CHECK(def.respond(kernel) == 0);

    CHECK_THROWS_AS(GapNormDefender(10, 10, 2.0, 1), ConfigError);
    CHECK_THROWS_AS(GapNormDefender(10, 2, 1.5, 1), ConfigError);
}

TEST_CASE("gapnorm attack: learned vectors stay orthonormal, capture grows") {
    GapNormAttackParams p;
    p.dimension = 60;
    p.sketch_rows = 3;
    p.gap = 2.0;
    p.probes_per_round = 4000;
    p.attack_rounds = 50;
    p.seed = 1234;
    const auto result = run_gapnorm_attack(p);
    REQUIRE(result.learned_projections.size() == 3);
    // Monotone subspace quality round over round.
    for (std::size_t i = 1; i < result.rowspace_capture.size(); ++i) {
        CHECK(result.rowspace_capture[i] >= result.rowspace_capture[i - 1] - 1e-9);
    }
    CHECK(result.kernel_rounds > 0);
    CHECK(result.fooled_kernel_rounds > 0);
}

TEST_CASE("gapnorm attack: learned vectors are orthonormal within 1e-9") {
    std::vector<std::vector<double>> learned;
    GapNormDefender def(50, 3, 2.0, 9);
    Rng rng(17);
    auto ask = [&](std::span<const double> x) { return def.respond(x); };
    for (int round = 0; round < 3; ++round) {
        const auto v = gapnorm_learn_round(ask, learned, 50, 3000, rng);
        REQUIRE_FALSE(v.empty());
    }
    for (std::size_t i = 0; i < learned.size(); ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double dot = 0.0;
            for (std::size_t c = 0; c < learned[i].size(); ++c) dot += learned[i][c] * learned[j][c];
            CHECK(std::abs(dot - (i == j ? 1.0 : 0.0)) < 1e-9);
        }
    }
}

TEST_CASE("gapnorm attack: perfect kernel knowledge errs on every kernel round") {
    // Hand the adversary the true rows as "learned": every kernel-complement
    // submission is a genuine kernel vector and must be answered 0.
    const std::int64_t n = 30, r = 3;
    GapNormDefender def(n, r, 2.0, 55);
    Rng rng(8);
    std::int64_t kernel_rounds = 0, fooled = 0;
    std::vector<std::vector<double>> learned;
    for (std::int64_t i = 0; i < r; ++i) {
        learned.emplace_back(def.row(i).begin(), def.row(i).end());
    }
    for (int t = 0; t < 200; ++t) {
        if (rng.coin(0.5)) continue;  // zero-vector rounds never err
        std::vector<double> z(n);
        for (auto& v : z) v = rng.next_gaussian();
        for (const auto& u : learned) {
            double c = 0.0;
            for (std::size_t j = 0; j < z.size(); ++j) c += z[j] * u[j];
            for (std::size_t j = 0; j < z.size(); ++j) z[j] -= c * u[j];
        }
        double len = 0.0;
        for (double v : z) len += v * v;
        len = std::sqrt(len);
        for (auto& v : z) v *= 2.0 / len;
        ++kernel_rounds;
        if (def.respond(z) == 0) ++fooled;
    }
    CHECK(kernel_rounds > 0);
    CHECK(fooled == kernel_rounds);
}

TEST_CASE("gapnorm attack: empty sketch answers 0 so kernel rounds all fool") {
    GapNormAttackParams p;
    p.dimension = 20;
    p.sketch_rows = 0;
    p.gap = 2.0;
    p.attack_rounds = 200;
    p.seed = 5;
    const auto result = run_gapnorm_attack(p);
    CHECK(result.fooled_kernel_rounds == result.kernel_rounds);
    CHECK(result.fooling_rate > 0.3);  // coin lands kernel about half the time
    CHECK(result.fooling_rate < 0.7);
}

TEST_CASE("gapnorm attack: round-1 learned vector aligns with the row space") {
    int good = 0;
    const int seeds = 10;
    for (int s = 0; s < seeds; ++s) {
        GapNormAttackParams p;
        p.dimension = 100;
        p.sketch_rows = 5;
        p.gap = 2.0;
        p.probes_per_round = 16000;
        p.attack_rounds = 1;
        p.seed = splitmix64(600u + s);
        GapNormDefender def(p.dimension, p.sketch_rows, p.gap, p.seed);
        Rng rng(splitmix64(p.seed ^ 0xBB67AE8584CAA73BULL));
        std::vector<std::vector<double>> learned;
        auto ask = [&](std::span<const double> x) { return def.respond(x); };
        const auto v = gapnorm_learn_round(ask, learned, p.dimension, p.probes_per_round, rng);
        REQUIRE_FALSE(v.empty());
        if (def.sketched_norm(v) >= 0.9) ++good;
    }
    CHECK(good >= 9);
}
