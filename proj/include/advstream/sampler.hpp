#ifndef ADVSTREAM_SAMPLER_HPP
#define ADVSTREAM_SAMPLER_HPP

#include <cstdint>
#include <span>
#include <unordered_set>
#include <vector>

#include "advstream/parallel.hpp"
#include "advstream/rng.hpp"
#include "advstream/set_system.hpp"

namespace advstream {

enum class SamplerKind { Bernoulli, Uniform, Reservoir };

/// One accepted stream element.
struct SampledItem {
    std::int64_t index = 0;  // arrival position, 1-based
    std::int64_t value = 0;  // universe element
};

/// Oblivious sampler: accept/reject depends only on the arrival index and
/// the seeded coin stream, never on the submitted values. Bernoulli accepts
/// each arrival with probability p; Uniform pre-draws k distinct arrival
/// indices; Reservoir keeps the first k then accepts index i with
/// probability k/i, evicting a uniform victim.
class SamplerState {
public:
    static SamplerState bernoulli(double p, std::uint64_t seed);
    static SamplerState uniform(std::int64_t k, std::int64_t stream_length, std::uint64_t seed);
    static SamplerState reservoir(std::int64_t k, std::uint64_t seed);

    /// Feeds the next element; index must equal rounds_seen()+1.
    /// Returns true iff the element was accepted into the sample.
    bool step(std::int64_t index, std::int64_t value);

    SamplerKind kind() const { return kind_; }
    std::int64_t rounds_seen() const { return rounds_; }
    const std::vector<SampledItem>& sample() const { return sample_; }
    std::vector<std::int64_t> sample_values() const;

private:
    SamplerState(SamplerKind kind, std::uint64_t seed) : kind_(kind), rng_(seed) {}

    SamplerKind kind_;
    Rng rng_;
    std::int64_t rounds_ = 0;
    double rate_ = 0.0;                                // Bernoulli
    std::int64_t capacity_ = 0;                        // Uniform / Reservoir
    std::unordered_set<std::int64_t> chosen_indices_;  // Uniform
    std::vector<SampledItem> sample_;
};

/// Max over ranges of | |R cap X|/|X| - |R cap S|/|S| | with multiset
/// intersection counts. Requires S subseteq X as multisets and both nonempty.
/// Prefix families are evaluated by a sorted sweep over the witnessed values;
/// explicit families enumerate ranges (parallel over ranges when asked).
double epsilon_approx_error(std::span<const std::int64_t> stream_values,
                            std::span<const std::int64_t> sample_values,
                            const FiniteSetSystem& sys,
                            Exec exec = Exec::Serial);

/// ceil(10 * (d + ln(1/delta)) / eps^2): sample size sufficient for an
/// eps-approximation with probability 1-delta on oblivious streams over a
/// family of VC dimension d.
std::int64_t static_sample_size(std::int64_t vc_dim, double eps, double delta);

/// Bernoulli rate sufficient for (eps,delta)-robustness against adaptive
/// streams of length n: p = 10 * (ln|R| + ln(4/delta)) / (eps^2 n). Throws
/// ConfigError when the formula exceeds 1 (the stream is too short for the
/// requested robustness).
double robust_sample_rate(double range_count, double eps, double delta, std::int64_t stream_length);

}  // namespace advstream

#endif
