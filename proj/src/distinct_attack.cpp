#include "advstream/distinct_attack.hpp"

#include <cmath>

namespace advstream {

DistinctAttackResult run_distinct_flood_attack(const DistinctDefender& defender,
                                               const DistinctAttackParams& params) {
    if (params.rounds < 1) throw ConfigError("distinct flood attack needs rounds >= 1");
    DistinctAttackResult result;
    result.transcript.header = {{"game", "distinct-flood"},
                                {"rounds", params.rounds},
                                {"error_target", params.error_target},
                                {"seed", params.seed}};
    std::int64_t truth = 0;
    for (std::int64_t t = 1; t <= params.rounds; ++t) {
        std::int64_t x;
        if (!result.target_reached) {
            x = ++truth;  // fresh index
        } else {
            x = 1;  // duplicate: truth and sketch state both freeze
        }
        const double estimate = defender(x);
        const double err = truth > 0 ? std::abs(estimate - static_cast<double>(truth)) /
                                           static_cast<double>(truth)
                                     : std::abs(estimate);
        if (err > result.max_rel_error) {
            result.max_rel_error = err;
            result.witness_round = t;
        }
        if (!result.target_reached && result.max_rel_error > params.error_target) {
            result.target_reached = true;
        }
        if (params.record_transcript) {
            GameRound round;
            round.submission = x;
            round.response = estimate;
            round.markers = {{"truth", truth}};
            result.transcript.rounds.push_back(std::move(round));
        }
    }
    result.fresh_submissions = truth;
    return result;
}

}  // namespace advstream
