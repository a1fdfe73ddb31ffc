#ifndef ADVSTREAM_INTERVAL_ATTACK_HPP
#define ADVSTREAM_INTERVAL_ATTACK_HPP

#include <cstdint>
#include <optional>

#include "advstream/game.hpp"
#include "advstream/sampler.hpp"

namespace advstream {

/// State of the boundary-squeezing attack on a Bernoulli sampler. The three
/// invariant parts maintained round by round: every accepted value is at
/// most low_bound, every rejected value is at least high_bound, and each
/// submission lies strictly between them.
struct IntervalAttackState {
    std::int64_t low_bound = 1;    // greatest value the sampler may have accepted
    std::int64_t high_bound = 0;   // least value the sampler has rejected
    double effective_rate = 0.0;   // max(p, ln(n)/n)
    std::int64_t round = 0;

    bool exhausted() const { return high_bound - low_bound < 2; }
};

/// Next submission: floor(low + (1 - rate) * (high - low)), strictly inside
/// (low, high) whenever the gap admits an integer. Returns nullopt once the
/// interval has collapsed.
std::optional<std::int64_t> interval_attack_submission(const IntervalAttackState& st);

/// Applies the observed accept/reject to the boundaries: an accepted value
/// raises the floor to it, a rejected one lowers the ceiling to it.
IntervalAttackState interval_attack_step(IntervalAttackState st, std::int64_t submitted, bool accepted);

/// What the adversary does after the interval collapses: stop the game, or
/// keep the stream alive by resubmitting the current floor (concession
/// rounds, marked in the transcript and excluded from invariant checks).
enum class IntervalFill { Truncate, DuplicateLow };

struct IntervalAttackParams {
    std::int64_t stream_length = 0;  // n, also the number of game rounds
    double sampler_rate = 0.0;       // p
    std::int64_t universe_size = 0;  // N
    std::uint64_t seed = 0;
    IntervalFill fill = IntervalFill::Truncate;
    bool record_transcript = true;
};

struct IntervalAttackResult {
    GameTranscript transcript;
    std::optional<double> final_error;  // empty when the sample ended up empty
    std::int64_t stream_size = 0;
    std::int64_t sample_size = 0;
    double effective_rate = 0.0;
    bool exhausted = false;
    std::int64_t exhausted_round = 0;  // 0 when the attack never collapsed
    bool invariant_ok = true;          // three-part invariant on attack rounds
    bool sample_bound_held = false;    // |S| < 2 n p' at termination
};

/// Plays the attack against a fresh Bernoulli sampler over the prefix
/// family on [1, N], checking the three-part invariant every round and
/// reporting the final approximation error of the sample it extracted.
IntervalAttackResult run_interval_attack(const IntervalAttackParams& params);

/// Universe size used for desk-scale runs: 2^(n/2) capped at 2^62. Runs at
/// the cap are flagged in the transcript header (the collapse lemma's slack
/// needs the uncapped regime, which holds for n <= 120).
std::int64_t interval_attack_universe(std::int64_t stream_length);

}  // namespace advstream

#endif
