#ifndef ADVSTREAM_DISTINCT_ATTACK_HPP
#define ADVSTREAM_DISTINCT_ATTACK_HPP

#include <cstdint>
#include <functional>

#include "advstream/game.hpp"

namespace advstream {

/// Defender under the distinct-count game: ingests one inserted index,
/// returns its current estimate.
using DistinctDefender = std::function<double(std::int64_t index)>;

struct DistinctAttackParams {
    std::int64_t rounds = 0;
    double error_target = 0.0;  // relative error the adversary is gunning for
    std::uint64_t seed = 0;
    bool record_transcript = false;
};

struct DistinctAttackResult {
    GameTranscript transcript;
    double max_rel_error = 0.0;
    std::int64_t witness_round = 0;      // round where the max was reached
    std::int64_t fresh_submissions = 0;  // true distinct count at the end
    bool target_reached = false;
};

/// Adaptive stream-extension attack on a distinct-count tracker. The
/// adversary floods fresh indices while watching the published estimate
/// against the true distinct count it is building, chasing the worst
/// relative error over the whole trajectory; once the target error is
/// witnessed it switches to resubmitting an already-used index, freezing
/// both the truth and the sketch so the witness survives to the end of the
/// stream. Each submission therefore depends on the response history.
DistinctAttackResult run_distinct_flood_attack(const DistinctDefender& defender,
                                               const DistinctAttackParams& params);

}  // namespace advstream

#endif
