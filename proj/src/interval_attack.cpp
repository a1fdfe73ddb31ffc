#include "advstream/interval_attack.hpp"

#include <algorithm>
#include <cmath>

namespace advstream {

std::optional<std::int64_t> interval_attack_submission(const IntervalAttackState& st) {
    if (st.exhausted()) return std::nullopt;
    const long double gap = static_cast<long double>(st.high_bound - st.low_bound);
    const auto offset = static_cast<std::int64_t>(std::floor((1.0L - st.effective_rate) * gap));
    const std::int64_t x = st.low_bound + offset;
    if (x <= st.low_bound || x >= st.high_bound) return std::nullopt;
    return x;
}

IntervalAttackState interval_attack_step(IntervalAttackState st, std::int64_t submitted, bool accepted) {
    if (accepted) {
        st.low_bound = submitted;
    } else {
        st.high_bound = submitted;
    }
    ++st.round;
    return st;
}

std::int64_t interval_attack_universe(std::int64_t stream_length) {
    if (stream_length >= 124) return std::int64_t{1} << 62;
    return std::int64_t{1} << (stream_length / 2);
}

IntervalAttackResult run_interval_attack(const IntervalAttackParams& params) {
    const std::int64_t n = params.stream_length;
    if (n < 1) throw ConfigError("interval attack needs a positive stream length");
    if (params.sampler_rate < 0.0 || params.sampler_rate > 1.0) {
        throw ConfigError("interval attack: sampler rate must lie in [0,1]");
    }
    if (params.universe_size < 2) throw ConfigError("interval attack needs universe size >= 2");

    IntervalAttackResult result;
    result.effective_rate =
        std::max(params.sampler_rate, std::log(static_cast<double>(n)) / static_cast<double>(n));

    IntervalAttackState st;
    st.low_bound = 1;
    st.high_bound = params.universe_size;
    st.effective_rate = result.effective_rate;

    SamplerState sampler = SamplerState::bernoulli(params.sampler_rate, splitmix64(params.seed ^ 0x5A17u));

    GameTranscript& tr = result.transcript;
    tr.header = {{"game", "interval-attack"},
                 {"defender", "bernoulli:p=" + std::to_string(params.sampler_rate)},
                 {"defender_seed", splitmix64(params.seed ^ 0x5A17u)},
                 {"n", n},
                 {"universe", params.universe_size},
                 {"effective_rate", result.effective_rate},
                 {"seed", params.seed},
                 {"universe_capped", params.universe_size >= (std::int64_t{1} << 62)}};

    std::vector<std::int64_t> stream;
    std::vector<std::int64_t> accepted_values;
    stream.reserve(static_cast<std::size_t>(n));
    std::int64_t max_accepted = 0;  // no accepts yet; any value is >= 1
    std::int64_t min_rejected = params.universe_size + 1;

    for (std::int64_t t = 1; t <= n; ++t) {
        std::optional<std::int64_t> next;
        bool concession = false;
        if (!result.exhausted) {
            next = interval_attack_submission(st);
            if (!next) {
                result.exhausted = true;
                result.exhausted_round = t;
                if (params.fill == IntervalFill::Truncate) {
                    tr.truncated = true;
                    tr.flag = "interval collapsed";
                    break;
                }
            }
        }
        if (result.exhausted) {
            next = st.low_bound;  // keep the stream alive; marked below
            concession = true;
        }
        const std::int64_t x = *next;
        if (!concession) {
            // Three-part invariant, checked against the pre-update state.
            const bool ok = (max_accepted == 0 || max_accepted <= st.low_bound) &&
                            (min_rejected >= st.high_bound) && (st.low_bound < x && x < st.high_bound);
            if (!ok) result.invariant_ok = false;
        }
        const bool accepted = sampler.step(t, x);
        stream.push_back(x);
        if (accepted) {
            accepted_values.push_back(x);
            max_accepted = std::max(max_accepted, x);
        } else {
            min_rejected = std::min(min_rejected, x);
        }
        if (!concession) st = interval_attack_step(st, x, accepted);

        if (params.record_transcript) {
            GameRound round;
            round.submission = x;
            round.response = accepted;
            round.markers = {{"low", st.low_bound}, {"high", st.high_bound}};
            if (concession) round.markers["concession"] = true;
            tr.rounds.push_back(std::move(round));
        }
    }

    result.stream_size = static_cast<std::int64_t>(stream.size());
    result.sample_size = static_cast<std::int64_t>(accepted_values.size());
    result.sample_bound_held =
        static_cast<double>(result.sample_size) < 2.0 * static_cast<double>(n) * result.effective_rate;
    if (!accepted_values.empty() && !stream.empty()) {
        const FiniteSetSystem prefixes = FiniteSetSystem::prefix_intervals(params.universe_size);
        result.final_error = epsilon_approx_error(stream, accepted_values, prefixes);
    }
    return result;
}

}  // namespace advstream
