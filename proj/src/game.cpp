#include "advstream/game.hpp"

#include <fstream>
#include <memory>

namespace advstream {

void GameTranscript::save_jsonl(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write transcript file: " + path);
    json head = header;
    head["kind"] = "header";
    head["rounds"] = rounds.size();
    head["truncated"] = truncated;
    if (!flag.empty()) head["flag"] = flag;
    out << head.dump() << '\n';
    for (std::size_t i = 0; i < rounds.size(); ++i) {
        json line;
        line["t"] = i + 1;
        line["sub"] = rounds[i].submission;
        line["resp"] = rounds[i].response;
        if (!rounds[i].markers.is_null() && !rounds[i].markers.empty()) line["mark"] = rounds[i].markers;
        out << line.dump() << '\n';
    }
}

GameTranscript GameTranscript::load_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open transcript file: " + path);
    GameTranscript tr;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json parsed = json::parse(line);
        if (!have_header) {
            if (parsed.value("kind", "") != "header") throw ConfigError("transcript missing header line");
            tr.header = parsed;
            tr.truncated = parsed.value("truncated", false);
            tr.flag = parsed.value("flag", "");
            have_header = true;
            continue;
        }
        GameRound round;
        round.submission = parsed.at("sub");
        round.response = parsed.at("resp");
        if (parsed.contains("mark")) round.markers = parsed["mark"];
        tr.rounds.push_back(std::move(round));
    }
    if (!have_header) throw ConfigError("transcript file is empty");
    return tr;
}

GameTranscript play_game(const Strategy& adversary, const Responder& algorithm,
                         std::int64_t rounds, std::uint64_t seed, json header) {
    if (rounds < 1) throw ConfigError("play_game: rounds must be >= 1");
    GameTranscript transcript;
    transcript.header = std::move(header);
    transcript.header["seed"] = seed;
    Rng rng(seed);
    for (std::int64_t t = 0; t < rounds; ++t) {
        std::optional<json> submission = adversary(transcript, rng);
        if (!submission) {
            transcript.truncated = true;
            transcript.flag = "strategy exhausted";
            break;
        }
        GameRound round;
        round.submission = std::move(*submission);
        round.response = algorithm(round.submission);
        transcript.rounds.push_back(std::move(round));
    }
    return transcript;
}

Strategy fixed_replay_strategy(std::vector<json> submissions) {
    auto remaining = std::make_shared<std::vector<json>>(std::move(submissions));
    return [remaining](const GameTranscript& so_far, Rng&) -> std::optional<json> {
        const std::size_t t = so_far.rounds.size();
        if (t >= remaining->size()) return std::nullopt;
        return (*remaining)[t];
    };
}

std::optional<std::size_t> replay_mismatch(const GameTranscript& transcript, const Responder& algorithm) {
    for (std::size_t i = 0; i < transcript.rounds.size(); ++i) {
        if (algorithm(transcript.rounds[i].submission) != transcript.rounds[i].response) return i;
    }
    return std::nullopt;
}

}  // namespace advstream
