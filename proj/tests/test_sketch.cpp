#include <doctest.h>

#include <array>
#include <cmath>

#include "advstream/hash.hpp"
#include "advstream/rng.hpp"
#include "advstream/sketch.hpp"

using namespace advstream;

TEST_CASE("four-wise sign hash: sign patterns of 4 fixed indices are uniform") {
    // 16 possible sign patterns over 4 indices; chi-square with 15 degrees of
    // freedom, threshold frozen at the 0.999 quantile 37.697.
    const std::array<std::uint64_t, 4> idx{3, 17, 901, 65536};
    std::array<std::int64_t, 16> counts{};
    const int trials = 32000;
    for (int s = 0; s < trials; ++s) {
        FourWiseSignHash h(splitmix64(0xFEEDu + s));
        unsigned pattern = 0;
        for (std::size_t j = 0; j < idx.size(); ++j) {
            if (h.sign(idx[j]) > 0) pattern |= 1u << j;
        }
        ++counts[pattern];
    }
    const double expected = trials / 16.0;
    double chi2 = 0.0;
    for (std::int64_t c : counts) {
        const double dev = static_cast<double>(c) - expected;
        chi2 += dev * dev / expected;
    }
    CHECK(chi2 < 37.697);
}

TEST_CASE("ams_new: dimensions, fresh estimate, determinism") {
    AmsSketch sk(0.5, std::exp(-1.0), 42);
    CHECK(sk.rows() == 8);
    CHECK(sk.cols() == 32);
    CHECK(sk.estimate() == doctest::Approx(0.0));

    AmsSketch a(0.5, 0.25, 7), b(0.5, 0.25, 7);
    for (int i = 1; i <= 20; ++i) {
        a.update({i % 5 + 1, i});
        b.update({i % 5 + 1, i});
    }
    CHECK(std::equal(a.cells().begin(), a.cells().end(), b.cells().begin()));
    CHECK_THROWS_AS(AmsSketch(0.0, 0.5, 1), ConfigError);
    CHECK_THROWS_AS(AmsSketch(0.5, 1.5, 1), ConfigError);
}

TEST_CASE("ams_update: sign definition, linearity, offline replay") {
    AmsSketch sk(0.5, 0.3, 123);
    sk.update({4, 1});
    for (std::int64_t c : sk.cells()) CHECK(std::abs(c) == 1);
    sk.update({4, -1});
    for (std::int64_t c : sk.cells()) CHECK(c == 0);

    // Cells equal <f, s> recomputed offline from the per-cell signs.
    Rng rng(5);
    std::vector<std::int64_t> f(10, 0);
    for (int t = 0; t < 60; ++t) {
        const std::int64_t i = rng.next_in(1, 10);
        const std::int64_t d = rng.next_in(-4, 4);
        sk.update({i, d});
        f[static_cast<std::size_t>(i - 1)] += d;
    }
    // after the +1/-1 pair above, sk holds exactly the random stream
    for (int r = 0; r < sk.rows(); ++r) {
        for (int c = 0; c < sk.cols(); ++c) {
            std::int64_t dot = 0;
            for (int i = 1; i <= 10; ++i) {
                dot += f[static_cast<std::size_t>(i - 1)] * sk.cell_sign(r, c, i);
            }
            CHECK(sk.cells()[static_cast<std::size_t>(r) * sk.cols() + c] == dot);
        }
    }
}

TEST_CASE("ams: sign-plane cache matches the hash path exactly") {
    AmsSketch plain(0.4, 0.2, 77);
    AmsSketch cached(0.4, 0.2, 77, 32);
    Rng rng(8);
    for (int t = 0; t < 300; ++t) {
        const StreamUpdate u{rng.next_in(1, 32), rng.next_in(-3, 3)};
        plain.update(u);
        cached.update(u);
    }
    CHECK(std::equal(plain.cells().begin(), plain.cells().end(), cached.cells().begin()));
}

TEST_CASE("ams: linearity over a stream split") {
    Rng rng(31);
    std::vector<StreamUpdate> stream;
    for (int t = 0; t < 100; ++t) stream.push_back({rng.next_in(1, 16), rng.next_in(-5, 5)});
    AmsSketch whole(0.5, 0.3, 999);
    AmsSketch first(0.5, 0.3, 999), second(0.5, 0.3, 999);
    for (std::size_t t = 0; t < stream.size(); ++t) {
        whole.update(stream[t]);
        (t < 40 ? first : second).update(stream[t]);
    }
    for (std::size_t c = 0; c < whole.cells().size(); ++c) {
        CHECK(whole.cells()[c] == first.cells()[c] + second.cells()[c]);
    }
}

TEST_CASE("ams: single insertion estimates exactly 1") {
    AmsSketch sk(0.3, 0.1, 2718);
    sk.update({7, 1});
    CHECK(sk.estimate() == doctest::Approx(1.0));
}

TEST_CASE("ams: one-cell unbiasedness and variance bound on f=(3,4)") {
    // E[cell^2] = F2 = 25 within 3 standard errors; Var[cell^2] <= 2 F2^2.
    const int trials = 10000;
    double sum = 0.0, sum_sq = 0.0;
    for (int s = 0; s < trials; ++s) {
        FourWiseSignHash h(splitmix64(40000u + s));
        const double cell = 3.0 * h.sign(1) + 4.0 * h.sign(2);
        sum += cell * cell;
        sum_sq += cell * cell * cell * cell;
    }
    const double mean = sum / trials;
    const double var = sum_sq / trials - mean * mean;
    const double se = std::sqrt(2.0 * 25.0 * 25.0 / trials);
    CHECK(std::abs(mean - 25.0) <= 3.0 * se);
    CHECK(var <= 2.0 * 25.0 * 25.0 * 1.2);
}

TEST_CASE("ams: Monte-Carlo accuracy on f=(3,4) at eps=0.5") {
    const int trials = 1000;
    int failures = 0;
    for (int s = 0; s < trials; ++s) {
        AmsSketch sk(0.5, std::exp(-1.0), splitmix64(777u + s));
        sk.update({1, 3});
        sk.update({2, 4});
        if (std::abs(sk.estimate() - 25.0) > 0.5 * 25.0) ++failures;
    }
    // delta = 1/e ~ 0.368; allow Monte-Carlo slack.
    CHECK(static_cast<double>(failures) / trials <= std::exp(-1.0) + 0.05);
}

TEST_CASE("ams: union-bounded tolerance tracks a whole stream") {
    // Per-point tolerance delta/m amplifies to a whole-sequence guarantee.
    const int trials = 300;
    const int length = 100;
    const double eps = 0.5;
    const double delta = 0.4;
    int failures = 0;
    for (int s = 0; s < trials; ++s) {
        AmsSketch sk(eps, delta / length, splitmix64(31337u + s), 32);
        Rng rng(splitmix64(s));
        std::vector<std::int64_t> f(32, 0);
        std::vector<double> outputs, truths;
        for (int t = 0; t < length; ++t) {
            const std::int64_t i = rng.next_in(1, 32);
            sk.update({i, 1});
            f[static_cast<std::size_t>(i - 1)] += 1;
            double f2 = 0.0;
            for (std::int64_t v : f) f2 += static_cast<double>(v) * static_cast<double>(v);
            outputs.push_back(sk.estimate());
            truths.push_back(f2);
        }
        if (!strong_tracking_check(outputs, truths, eps)) ++failures;
    }
    CHECK(static_cast<double>(failures) / trials <= 0.4 + 0.1);
}

TEST_CASE("kmv: exact below capacity and idempotent duplicates") {
    KmvSketch sk(64, 5);
    sk.insert(10);
    sk.insert(20);
    sk.insert(30);
    CHECK(sk.estimate() == doctest::Approx(3.0));
    for (int rep = 0; rep < 50; ++rep) sk.insert(10);
    CHECK(sk.estimate() == doctest::Approx(3.0));

    KmvSketch ones(8, 9);
    for (int rep = 0; rep < 100; ++rep) ones.insert(42);
    CHECK(ones.estimate() == doctest::Approx(1.0));
}

TEST_CASE("kmv: insertion-only update contract") {
    KmvSketch sk(8, 1);
    sk.update({5, 3});
    CHECK(sk.estimate() == doctest::Approx(1.0));
    sk.update({6, 0});  // no-op
    CHECK(sk.estimate() == doctest::Approx(1.0));
    CHECK_THROWS_AS(sk.update({5, -1}), MalformedStream);
}

TEST_CASE("kmv: Monte-Carlo relative error at k=1024 over 10^4 distinct") {
    const int trials = 60;
    int ok = 0;
    for (int s = 0; s < trials; ++s) {
        KmvSketch sk(1024, splitmix64(4242u + s));
        for (std::int64_t i = 1; i <= 10000; ++i) sk.insert(i);
        if (std::abs(sk.estimate() - 10000.0) <= 0.1 * 10000.0) ++ok;
    }
    CHECK(static_cast<double>(ok) / trials >= 0.9);
}

TEST_CASE("sketch snapshots round-trip") {
    AmsSketch sk(0.5, 0.3, 11, 16);
    Rng rng(3);
    for (int t = 0; t < 50; ++t) sk.update({rng.next_in(1, 16), rng.next_in(-2, 2)});
    const auto blob = sk.snapshot();
    AmsSketch back = AmsSketch::restore(blob);
    CHECK(back.estimate() == doctest::Approx(sk.estimate()));
    CHECK(std::equal(sk.cells().begin(), sk.cells().end(), back.cells().begin()));
    // Restored sketches keep tracking identically.
    sk.update({3, 2});
    back.update({3, 2});
    CHECK(std::equal(sk.cells().begin(), sk.cells().end(), back.cells().begin()));

    KmvSketch km(32, 77);
    for (std::int64_t i = 1; i <= 500; ++i) km.insert(i);
    KmvSketch km_back = KmvSketch::restore(km.snapshot());
    CHECK(km_back.estimate() == doctest::Approx(km.estimate()));
    km.insert(501);
    km_back.insert(501);
    CHECK(km_back.estimate() == doctest::Approx(km.estimate()));

    std::vector<std::uint8_t> junk{1, 2, 3};
    CHECK_THROWS_AS(AmsSketch::restore(junk), ConfigError);
}

TEST_CASE("strong_tracking_check: contract") {
    std::vector<double> truths{1, 2, 3};
    CHECK(strong_tracking_check(truths, truths, 0.0));
    std::vector<double> zeros{0, 0};
    std::vector<double> outputs{0, 0.001};
    CHECK_FALSE(strong_tracking_check(outputs, zeros, 0.5));
    std::vector<double> one_bad{1.0, 2.0, 4.5};
    CHECK_FALSE(strong_tracking_check(one_bad, truths, 0.4));
    std::vector<double> short_seq{1.0};
    CHECK_THROWS_AS(strong_tracking_check(short_seq, truths, 0.1), ConfigError);
}
