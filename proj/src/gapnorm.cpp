#include "advstream/gapnorm.hpp"

#include <algorithm>
#include <cmath>

namespace advstream {
namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void project_out(std::vector<double>& x, std::span<const double> unit) {
    const double c = dot(x, unit);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= c * unit[i];
}

std::vector<double> gaussian_vector(std::int64_t n, double scale, Rng& rng) {
    std::vector<double> x(static_cast<std::size_t>(n));
    for (auto& v : x) v = scale * rng.next_gaussian();
    return x;
}

}  // namespace

GapNormDefender::GapNormDefender(std::int64_t dimension, std::int64_t sketch_rows, double gap,
                                 std::uint64_t seed)
    : n_(dimension), r_(sketch_rows), gap_(gap), threshold_((1.0 + gap) / 2.0) {
    if (dimension < 1) throw ConfigError("gap-norm defender needs dimension >= 1");
    if (sketch_rows < 0 || sketch_rows >= dimension) {
        throw ConfigError("gap-norm defender needs 0 <= rows < dimension");
    }
    if (gap < 2.0) throw ConfigError("gap-norm defender needs gap B >= 2");
    // Gaussian rows, Gram-Schmidt orthonormalized.
    Rng rng(splitmix64(seed ^ 0x6A09E667F3BCC908ULL));
    rows_.resize(static_cast<std::size_t>(r_ * n_));
    for (std::int64_t i = 0; i < r_; ++i) {
        std::vector<double> v = gaussian_vector(n_, 1.0, rng);
        for (std::int64_t j = 0; j < i; ++j) project_out(v, row(j));
        const double len = norm(v);
        if (len < 1e-12) throw ConfigError("gap-norm defender: degenerate row draw");
        for (std::int64_t c = 0; c < n_; ++c) rows_[static_cast<std::size_t>(i * n_ + c)] = v[static_cast<std::size_t>(c)] / len;
    }
}

std::span<const double> GapNormDefender::row(std::int64_t i) const {
    return {rows_.data() + static_cast<std::size_t>(i * n_), static_cast<std::size_t>(n_)};
}

double GapNormDefender::sketched_norm(std::span<const double> x) const {
    double sq = 0.0;
    for (std::int64_t i = 0; i < r_; ++i) {
        const double c = dot(row(i), x);
        sq += c * c;
    }
    return std::sqrt(sq);
}

int GapNormDefender::respond(std::span<const double> x) const {
    return sketched_norm(x) >= threshold_ ? 1 : 0;
}

std::vector<double> gapnorm_learn_round(const std::function<int(std::span<const double>)>& defender,
                                        std::vector<std::vector<double>>& learned,
                                        std::int64_t dimension, std::int64_t probes,
                                        Rng& rng, double* used_scale, Exec exec) {
    const std::int64_t n = dimension;
    auto draw_probe = [&](double scale, Rng& r) {
        std::vector<double> x = gaussian_vector(n, scale, r);
        for (const auto& u : learned) project_out(x, u);
        return x;
    };

    // Escalate the probe scale until the positive-label rate lands in the
    // working window; pilots are genuine defender queries.
    double scale = 1.0 / std::sqrt(static_cast<double>(n));
    constexpr int kPilot = 128;
    constexpr int kMaxEscalations = 64;
    for (int esc = 0; esc < kMaxEscalations; ++esc) {
        int positives = 0;
        for (int i = 0; i < kPilot; ++i) positives += defender(draw_probe(scale, rng));
        const double rate = static_cast<double>(positives) / kPilot;
        if (rate >= 0.2 && rate <= 0.8) break;
        scale *= 2.0;
        if (esc == kMaxEscalations - 1) return {};
    }
    if (used_scale) *used_scale = scale;

    // Main batch. The top right singular vector of the positive-probe matrix
    // G is the top eigenvector of G^T G, accumulated here directly. Probe
    // draws and defender queries stay sequential (the responder may record a
    // transcript); only the probes labeled positive are kept.
    std::vector<double> kept;  // positives, packed row-major
    kept.reserve(static_cast<std::size_t>(probes * n) / 2);
    for (std::int64_t i = 0; i < probes; ++i) {
        std::vector<double> x = draw_probe(scale, rng);
        if (defender(x)) kept.insert(kept.end(), x.begin(), x.end());
    }
    const auto positives = static_cast<std::int64_t>(kept.size() / static_cast<std::size_t>(n));
    if (positives == 0) return {};

    // Covariance kernel: each output row is independent, so the loop over
    // rows is the parallel axis and the serial path produces identical sums.
    std::vector<double> cov(static_cast<std::size_t>(n * n), 0.0);
    parallel_for(n, exec, [&](std::int64_t a) {
        double* covrow = cov.data() + static_cast<std::size_t>(a * n);
        for (std::int64_t i = 0; i < positives; ++i) {
            const double* x = kept.data() + static_cast<std::size_t>(i * n);
            const double xa = x[a];
            for (std::int64_t b = a; b < n; ++b) covrow[b] += xa * x[b];
        }
    });
    for (std::int64_t a = 0; a < n; ++a) {
        for (std::int64_t b = 0; b < a; ++b) {
            cov[static_cast<std::size_t>(a * n + b)] = cov[static_cast<std::size_t>(b * n + a)];
        }
    }

    // Power iteration: 200 iterations or relative change below 1e-10.
    std::vector<double> v = gaussian_vector(n, 1.0, rng);
    double len = norm(v);
    for (auto& c : v) c /= len;
    std::vector<double> next(static_cast<std::size_t>(n));
    for (int iter = 0; iter < 200; ++iter) {
        parallel_for(n, exec, [&](std::int64_t a) {
            next[static_cast<std::size_t>(a)] = dot({cov.data() + static_cast<std::size_t>(a * n),
                                                     static_cast<std::size_t>(n)}, v);
        });
        const double nlen = norm(next);
        if (nlen < 1e-300) break;
        double change = 0.0;
        for (std::int64_t a = 0; a < n; ++a) {
            const double nv = next[static_cast<std::size_t>(a)] / nlen;
            change = std::max(change, std::abs(nv - v[static_cast<std::size_t>(a)]));
            v[static_cast<std::size_t>(a)] = nv;
        }
        if (change < 1e-10) break;
    }

    // Explicit re-orthonormalization against the learned set.
    for (const auto& u : learned) project_out(v, u);
    len = norm(v);
    if (len < 1e-12) return {};
    for (auto& c : v) c /= len;
    learned.push_back(v);
    return v;
}

GapNormAttackResult run_gapnorm_attack(const GapNormAttackParams& params, Exec exec) {
    const std::int64_t n = params.dimension;
    const std::int64_t r = params.sketch_rows;
    GapNormDefender defender(n, r, params.gap, params.seed);
    GapNormAttackResult result;
    result.transcript.header = {{"game", "gapnorm-attack"},
                                {"defender", "gapnorm:n=" + std::to_string(n) + ",r=" + std::to_string(r) +
                                                 ",B=" + std::to_string(params.gap)},
                                {"defender_seed", params.seed},
                                {"seed", params.seed}};

    std::int64_t probes = params.probes_per_round;
    if (probes <= 0) {
        probes = static_cast<std::int64_t>(
            std::ceil(20.0 * static_cast<double>(r) * std::log(static_cast<double>(n))));
    }

    Rng rng(splitmix64(params.seed ^ 0xBB67AE8584CAA73BULL));
    std::int64_t queries = 0;
    auto ask = [&](std::span<const double> x) {
        ++queries;
        const int resp = defender.respond(x);
        if (params.record_transcript) {
            GameRound round;
            round.submission = std::vector<double>(x.begin(), x.end());
            round.response = resp;
            result.transcript.rounds.push_back(std::move(round));
        }
        return resp;
    };

    std::vector<std::vector<double>> learned;
    for (std::int64_t round = 0; round < r; ++round) {
        double scale = 0.0;
        const std::vector<double> v = gapnorm_learn_round(ask, learned, n, probes, rng, &scale, exec);
        if (v.empty()) continue;
        result.probe_scales.push_back(scale);
        result.learned_projections.push_back(defender.sketched_norm(v));
        // Fraction of the row space already inside the learned span.
        double captured = 0.0;
        for (std::int64_t i = 0; i < r; ++i) {
            for (const auto& u : learned) {
                const double c = dot(defender.row(i), u);
                captured += c * c;
            }
        }
        result.rowspace_capture.push_back(captured / static_cast<double>(r));
    }

    // Attack phase: coin-flip between the zero vector (always answered
    // correctly) and a norm-B vector from the learned-span complement (a
    // forced mistake whenever the learned span covers the row space).
    const std::vector<double> zero(static_cast<std::size_t>(n), 0.0);
    std::int64_t mistakes = 0;
    for (std::int64_t t = 0; t < params.attack_rounds; ++t) {
        if (rng.coin(0.5)) {
            const int resp = ask(zero);
            if (resp != 0) ++mistakes;
        } else {
            std::vector<double> z = gaussian_vector(n, 1.0, rng);
            for (const auto& u : learned) project_out(z, u);
            const double len = norm(z);
            if (len < 1e-12) continue;
            for (auto& c : z) c *= params.gap / len;
            ++result.kernel_rounds;
            const int resp = ask(z);
            if (resp != 1) {
                ++mistakes;
                ++result.fooled_kernel_rounds;
            }
        }
    }
    result.fooling_rate = params.attack_rounds > 0
                              ? static_cast<double>(mistakes) / static_cast<double>(params.attack_rounds)
                              : 0.0;
    result.total_defender_queries = queries;
    return result;
}

}  // namespace advstream
