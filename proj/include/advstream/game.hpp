#ifndef ADVSTREAM_GAME_HPP
#define ADVSTREAM_GAME_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "advstream/core.hpp"
#include "advstream/rng.hpp"

namespace advstream {

using json = nlohmann::json;

/// One round of the two-player game: what the adversary submitted, what the
/// algorithm answered, plus free-form audit markers.
struct GameRound {
    json submission;
    json response;
    json markers;
};

/// Full round-by-round record of a game. Replaying the recorded submissions
/// against an identically seeded algorithm must reproduce the responses
/// bit-for-bit.
struct GameTranscript {
    json header;
    std::vector<GameRound> rounds;
    bool truncated = false;
    std::string flag;

    void save_jsonl(const std::string& path) const;
    static GameTranscript load_jsonl(const std::string& path);
};

/// Adversary: produces the next submission from the transcript so far (its
/// own prior submissions and the algorithm's responses) and the game's
/// seeded randomness. Returning nullopt signals exhaustion; the transcript
/// is truncated and flagged.
using Strategy = std::function<std::optional<json>(const GameTranscript& so_far, Rng& rng)>;

/// Algorithm under attack: consumes one submission, updates internal state,
/// returns its response.
using Responder = std::function<json(const json& submission)>;

/// Runs the submit -> respond -> observe loop for exactly `rounds` rounds
/// (or until the strategy exhausts). rounds must be >= 1.
GameTranscript play_game(const Strategy& adversary, const Responder& algorithm,
                         std::int64_t rounds, std::uint64_t seed, json header = json::object());

/// Oblivious special case: replays a fixed list of submissions.
Strategy fixed_replay_strategy(std::vector<json> submissions);

/// Feeds the transcript's recorded submissions to `algorithm` and compares
/// responses. Returns the index of the first mismatching round, or nullopt
/// when every response reproduces exactly.
std::optional<std::size_t> replay_mismatch(const GameTranscript& transcript, const Responder& algorithm);

}  // namespace advstream

#endif
