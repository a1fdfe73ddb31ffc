#ifndef ADVSTREAM_GAPNORM_HPP
#define ADVSTREAM_GAPNORM_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "advstream/game.hpp"
#include "advstream/parallel.hpp"
#include "advstream/rng.hpp"

namespace advstream {

/// Linear-sketch defender for the gap-norm decision problem: draws an r x n
/// matrix with orthonormalized Gaussian rows and answers 1 iff the sketched
/// norm ||A x|| reaches the midpoint threshold (1+B)/2. Correct whenever
/// ||x|| <= 1, and on norm-B inputs aligned with its row space; blind to the
/// kernel by construction.
class GapNormDefender {
public:
    GapNormDefender(std::int64_t dimension, std::int64_t sketch_rows, double gap, std::uint64_t seed);

    int respond(std::span<const double> x) const;
    double sketched_norm(std::span<const double> x) const;

    std::int64_t dimension() const { return n_; }
    std::int64_t rows() const { return r_; }
    double gap() const { return gap_; }
    double threshold() const { return threshold_; }
    /// Row i of the sketch matrix; exposed for experiment-side metrics only.
    std::span<const double> row(std::int64_t i) const;

private:
    std::int64_t n_;
    std::int64_t r_;
    double gap_;
    double threshold_;
    std::vector<double> rows_;  // r x n, orthonormal rows
};

struct GapNormAttackParams {
    std::int64_t dimension = 0;    // n
    std::int64_t sketch_rows = 0;  // r
    double gap = 2.0;              // B
    std::int64_t probes_per_round = 0;  // 0: use 20 * r * ln(n)
    std::int64_t attack_rounds = 100;
    std::uint64_t seed = 0;
    bool record_transcript = false;  // probe payloads are large
};

struct GapNormAttackResult {
    GameTranscript transcript;  // populated only when recording was requested
    std::vector<double> learned_projections;  // ||A v_i|| per learned vector
    std::vector<double> rowspace_capture;     // fraction of the row space inside the learned span, per round
    std::vector<double> probe_scales;         // escalated scale per learning round
    double fooling_rate = 0.0;   // defender mistakes / attack rounds
    std::int64_t kernel_rounds = 0;
    std::int64_t fooled_kernel_rounds = 0;
    std::int64_t total_defender_queries = 0;
};

/// Row-space learning attack. Each learning round draws Gaussian probes in
/// the subspace orthogonal to the vectors learned so far (the probe scale
/// starts at 1/sqrt(n) and doubles until the positive-label rate lands in
/// [0.2, 0.8]), stacks the positively labeled probes, and extracts their top
/// right singular vector by power iteration. After r rounds the attack
/// alternates the zero vector with norm-B vectors from the learned-kernel
/// complement; the fooling rate is the fraction of attack rounds the
/// defender answers incorrectly.
GapNormAttackResult run_gapnorm_attack(const GapNormAttackParams& params, Exec exec = Exec::Serial);

/// One learning round against an arbitrary responder; exposed for tests.
/// Returns the newly learned unit vector (orthonormal to `learned`), or an
/// empty vector when no probe was labeled positive at any escalation.
std::vector<double> gapnorm_learn_round(const std::function<int(std::span<const double>)>& defender,
                                        std::vector<std::vector<double>>& learned,
                                        std::int64_t dimension, std::int64_t probes,
                                        Rng& rng, double* used_scale = nullptr,
                                        Exec exec = Exec::Serial);

}  // namespace advstream

#endif
