#include <doctest.h>

#include <cmath>
#include <sstream>

#include "advstream/rng.hpp"
#include "advstream/stream.hpp"
#include "oracles.hpp"

using namespace advstream;
using test_oracles::flip_number_brute_force;

TEST_CASE("apply_update: single coordinate additivity and cancellation") {
    const StreamModel turnstile = StreamModel::turnstile(3, 100, 1000);
    FrequencyVector f(3);
    f = apply_update(std::move(f), {2, 5}, turnstile);
    CHECK(f.at(1) == 0);
    CHECK(f.at(2) == 5);
    CHECK(f.at(3) == 0);
    f = apply_update(std::move(f), {2, -5}, turnstile);
    CHECK(f.at(2) == 0);
}

TEST_CASE("apply_update: error paths") {
    const StreamModel ins = StreamModel::insertion_only(2, 100);
    FrequencyVector f(2);
    f = apply_update(std::move(f), {1, 1}, ins);
    f = apply_update(std::move(f), {2, 1}, ins);
    CHECK_THROWS_AS(apply_update(f, {1, -1}, ins), MalformedStream);
    CHECK_THROWS_AS(apply_update(f, {3, 1}, ins), MalformedStream);
    CHECK_THROWS_AS(apply_update(f, {0, 1}, ins), MalformedStream);
    const StreamModel capped = StreamModel::turnstile(2, 100, 10);
    CHECK_THROWS_AS(apply_update(f, {1, 100}, capped), MalformedStream);
}

TEST_CASE("evaluate_query: F0, Fp, F2") {
    FrequencyVector f(4);
    const StreamModel m = StreamModel::turnstile(4, 100, 100);
    f = apply_update(std::move(f), {2, 5}, m);
    f = apply_update(std::move(f), {4, -2}, m);
    CHECK(evaluate_query(QueryFunction::f0(), f) == doctest::Approx(2.0));

    FrequencyVector g(2);
    const StreamModel m2 = StreamModel::turnstile(2, 100, 100);
    g = apply_update(std::move(g), {1, 3}, m2);
    g = apply_update(std::move(g), {2, 4}, m2);
    CHECK(evaluate_query(QueryFunction::fp(2.0), g) == doctest::Approx(25.0));
    CHECK(evaluate_query(QueryFunction::f2(), g) == doctest::Approx(25.0));

    FrequencyVector h(3);
    const StreamModel m3 = StreamModel::insertion_only(3, 100);
    h = apply_update(std::move(h), {1, 2}, m3);
    h = apply_update(std::move(h), {2, 3}, m3);
    CHECK(evaluate_query(QueryFunction::fp(1.0), h) == doctest::Approx(5.0));
}

TEST_CASE("evaluate_query: F2 equals Fp(2) on random vectors") {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        FrequencyVector f(8);
        const StreamModel m = StreamModel::turnstile(8, 10000, 10000);
        for (int i = 0; i < 30; ++i) {
            f = apply_update(std::move(f), {rng.next_in(1, 8), rng.next_in(-5, 5)}, m);
        }
        CHECK(evaluate_query(QueryFunction::f2(), f) ==
              doctest::Approx(evaluate_query(QueryFunction::fp(2.0), f)));
    }
}

TEST_CASE("flip_number: worked examples") {
    CHECK(flip_number(std::vector<double>{5, 5, 5, 5}, 0.1) == 1);
    CHECK(flip_number(std::vector<double>{1, 2, 4, 8}, 0.0) == 4);
    CHECK(flip_number(std::vector<double>{1, 10, 1, 10, 1}, 0.5) == 5);
    CHECK_THROWS_AS(flip_number(std::vector<double>{}, 0.5), ConfigError);
}

TEST_CASE("flip_number: zero center admits only zero") {
    // (1 +- eps) * 0 is the singleton {0}: any nonzero predecessor flips.
    CHECK(in_relative_window(0.0, 0.0, 0.5));
    CHECK_FALSE(in_relative_window(1.0, 0.0, 0.5));
    CHECK(flip_number(std::vector<double>{1, 0, 1, 0}, 0.9) == 4);
    CHECK(flip_number(std::vector<double>{0, 0, 0}, 0.5) == 1);
}

TEST_CASE("flip_number: negative centers use the spanned interval") {
    CHECK(in_relative_window(-1.0, -1.0, 0.5));
    CHECK_FALSE(in_relative_window(1.0, -1.0, 0.5));
    CHECK(flip_number(std::vector<double>{-1, -10, -1}, 0.5) == 3);
}

TEST_CASE("flip_number: equals brute force on short random sequences") {
    Rng rng(2024);
    for (int trial = 0; trial < 300; ++trial) {
        const int len = 1 + static_cast<int>(rng.next_below(12));
        std::vector<double> y(static_cast<std::size_t>(len));
        for (auto& v : y) v = static_cast<double>(rng.next_in(0, 6));
        const double eps = rng.next_double() * 0.9;
        CAPTURE(trial);
        CHECK(flip_number(y, eps) == flip_number_brute_force(y, eps));
    }
}

TEST_CASE("flip_number: nonincreasing in eps") {
    Rng rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const int len = 2 + static_cast<int>(rng.next_below(20));
        std::vector<double> y(static_cast<std::size_t>(len));
        for (auto& v : y) v = rng.next_double() * 20.0;
        const double e1 = rng.next_double() * 0.5;
        const double e2 = e1 + rng.next_double() * 0.4;
        CHECK(flip_number(y, e1) >= flip_number(y, e2));
    }
}

TEST_CASE("flip_number_bound: arithmetic and error paths") {
    CHECK(flip_number_bound(QueryFunction::f0(), 0.5, 1024, 1000000) == 222);
    const std::int64_t n_as_e = static_cast<std::int64_t>(std::ceil(std::exp(1.0)));
    CHECK(flip_number_bound(QueryFunction::fp(1.0), 1.0, n_as_e, 50) ==
          static_cast<std::int64_t>(std::ceil(8.0 * std::log(static_cast<double>(n_as_e)))));
    CHECK_THROWS_AS(flip_number_bound(QueryFunction::f0(), 0.0, 10, 10), ConfigError);
    // p > 2 scales with the moment.
    CHECK(flip_number_bound(QueryFunction::fp(4.0), 0.5, 1024, 100) ==
          static_cast<std::int64_t>(std::ceil(8.0 * 4.0 * std::log(1024.0) / 0.5)));
}

TEST_CASE("replay determinism and insertion-only monotonicity") {
    Rng rng(99);
    const StreamModel m = StreamModel::insertion_only(16, 1000);
    std::vector<StreamUpdate> updates;
    for (int i = 0; i < 200; ++i) updates.push_back({rng.next_in(1, 16), rng.next_in(0, 3)});

    FrequencyVector a(16), b(16);
    double prev_f0 = 0.0, prev_f1 = 0.0;
    for (const auto& u : updates) {
        a = apply_update(std::move(a), u, m);
        b = apply_update(std::move(b), u, m);
        const double f0 = evaluate_query(QueryFunction::f0(), a);
        const double f1 = evaluate_query(QueryFunction::fp(1.0), a);
        CHECK(f0 >= prev_f0);
        CHECK(f1 >= prev_f1);
        prev_f0 = f0;
        prev_f1 = f1;
    }
    CHECK(a == b);
    // counts[i] equals the sum of deltas applied at i.
    std::vector<std::int64_t> sums(16, 0);
    for (const auto& u : updates) sums[static_cast<std::size_t>(u.index - 1)] += u.delta;
    for (int i = 1; i <= 16; ++i) CHECK(a.at(i) == sums[static_cast<std::size_t>(i - 1)]);
}

TEST_CASE("measured flip number stays under the insertion-only bound") {
    Rng rng(5);
    const std::int64_t universe = 256;
    const std::int64_t length = 4000;
    const double eps = 0.5;
    const StreamModel m = StreamModel::insertion_only(universe, length);
    for (int trial = 0; trial < 10; ++trial) {
        FrequencyVector f(universe);
        std::vector<double> truth{0.0};
        for (std::int64_t t = 0; t < length; ++t) {
            f = apply_update(std::move(f), {rng.next_in(1, universe), 1}, m);
            truth.push_back(evaluate_query(QueryFunction::f0(), f));
        }
        CHECK(flip_number(truth, eps) <= flip_number_bound(QueryFunction::f0(), eps, universe, length));
    }
}

TEST_CASE("stream text round trip with comments") {
    std::istringstream in("# header comment\n1 5\n\n2 -3\n# tail\n7 0\n");
    const auto updates = parse_stream(in);
    REQUIRE(updates.size() == 3);
    CHECK(updates[0].index == 1);
    CHECK(updates[0].delta == 5);
    CHECK(updates[1].index == 2);
    CHECK(updates[1].delta == -3);
    CHECK(updates[2].index == 7);
    CHECK(updates[2].delta == 0);

    std::istringstream bad("1 two\n");
    CHECK_THROWS_AS(parse_stream(bad), ConfigError);
}
