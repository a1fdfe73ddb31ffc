#include "advstream/defenders.hpp"

#include <memory>

#include "advstream/gapnorm.hpp"
#include "advstream/sampler.hpp"
#include "advstream/switcher.hpp"

namespace advstream {

DefenderSpec DefenderSpec::parse(const std::string& text) {
    DefenderSpec spec;
    const auto colon = text.find(':');
    spec.name = text.substr(0, colon);
    if (colon == std::string::npos) return spec;
    std::string rest = text.substr(colon + 1);
    std::size_t pos = 0;
    while (pos < rest.size()) {
        auto comma = rest.find(',', pos);
        if (comma == std::string::npos) comma = rest.size();
        const std::string pair = rest.substr(pos, comma - pos);
        const auto eq = pair.find('=');
        if (eq == std::string::npos) throw ConfigError("defender spec: expected key=value in '" + pair + "'");
        spec.params[pair.substr(0, eq)] = pair.substr(eq + 1);
        pos = comma + 1;
    }
    return spec;
}

double DefenderSpec::number(const std::string& key) const {
    auto it = params.find(key);
    if (it == params.end()) throw ConfigError("defender spec: missing parameter '" + key + "'");
    return std::stod(it->second);
}

std::int64_t DefenderSpec::integer(const std::string& key) const {
    auto it = params.find(key);
    if (it == params.end()) throw ConfigError("defender spec: missing parameter '" + key + "'");
    return std::stoll(it->second);
}

std::int64_t DefenderSpec::integer_or(const std::string& key, std::int64_t fallback) const {
    auto it = params.find(key);
    return it == params.end() ? fallback : std::stoll(it->second);
}

namespace {

QueryFunction query_from_name(const std::string& name) {
    if (name == "f0") return QueryFunction::f0();
    if (name == "f2") return QueryFunction::f2();
    if (name.rfind("fp:", 0) == 0) return QueryFunction::fp(std::stod(name.substr(3)));
    throw ConfigError("unknown query function: " + name);
}

}  // namespace

Responder make_defender(const std::string& spec_text, std::uint64_t seed) {
    const DefenderSpec spec = DefenderSpec::parse(spec_text);
    if (spec.name == "bernoulli" || spec.name == "uniform" || spec.name == "reservoir") {
        auto sampler = std::make_shared<SamplerState>([&] {
            if (spec.name == "bernoulli") return SamplerState::bernoulli(spec.number("p"), seed);
            if (spec.name == "uniform") return SamplerState::uniform(spec.integer("k"), spec.integer("n"), seed);
            return SamplerState::reservoir(spec.integer("k"), seed);
        }());
        return [sampler](const json& submission) -> json {
            return sampler->step(sampler->rounds_seen() + 1, submission.get<std::int64_t>());
        };
    }
    if (spec.name == "kmv") {
        auto sketch = std::make_shared<KmvSketch>(static_cast<int>(spec.integer("k")), seed);
        return [sketch](const json& submission) -> json {
            sketch->insert(submission.get<std::int64_t>());
            return sketch->estimate();
        };
    }
    if (spec.name == "robust-f0") {
        std::optional<std::int64_t> lambda;
        if (spec.params.contains("lambda")) lambda = spec.integer("lambda");
        auto switcher = std::make_shared<SketchSwitcher<KmvSketch>>(robust_distinct_elements(
            spec.number("eps"), spec.number("delta"), spec.integer("n"), spec.integer("m"), seed, lambda));
        return [switcher](const json& submission) -> json {
            return switcher->process({submission.get<std::int64_t>(), 1}).published;
        };
    }
    if (spec.name == "oracle-switcher") {
        RobustConfig cfg;
        cfg.eps = spec.number("eps");
        cfg.delta = 0.5;
        cfg.universe_size = spec.integer("n");
        cfg.length_bound = spec.integer("m");
        cfg.query = query_from_name(spec.params.contains("query") ? spec.params.at("query") : "f0");
        cfg.lambda_override = spec.integer_or("lambda", 8);
        const QueryFunction g = cfg.query;
        const std::int64_t n = cfg.universe_size;
        auto switcher = std::make_shared<SketchSwitcher<OracleCopy>>(
            cfg, [g, n](std::int64_t) { return OracleCopy(g, n); });
        return [switcher](const json& submission) -> json {
            StreamUpdate u{submission.at(0).get<std::int64_t>(), submission.at(1).get<std::int64_t>()};
            return switcher->process(u).published;
        };
    }
    if (spec.name == "gapnorm") {
        auto defender = std::make_shared<GapNormDefender>(spec.integer("n"), spec.integer("r"),
                                                          spec.number("B"), seed);
        return [defender](const json& submission) -> json {
            const auto x = submission.get<std::vector<double>>();
            return defender->respond(x);
        };
    }
    throw ConfigError("unknown defender: " + spec.name);
}

}  // namespace advstream
