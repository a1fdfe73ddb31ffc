#ifndef ADVSTREAM_DEFENDERS_HPP
#define ADVSTREAM_DEFENDERS_HPP

#include <cstdint>
#include <map>
#include <string>

#include "advstream/game.hpp"

namespace advstream {

/// Parses "name:key=val,key=val" defender specs.
struct DefenderSpec {
    std::string name;
    std::map<std::string, std::string> params;

    static DefenderSpec parse(const std::string& text);
    double number(const std::string& key) const;
    std::int64_t integer(const std::string& key) const;
    std::int64_t integer_or(const std::string& key, std::int64_t fallback) const;
};

/// Builds a replayable algorithm from a spec string and seed. Supported:
///   bernoulli:p=..        value -> accepted (bool)
///   uniform:k=..,n=..     value -> accepted (bool)
///   reservoir:k=..        value -> accepted (bool)
///   kmv:k=..              index -> estimate (double)
///   robust-f0:eps=..,delta=..,n=..,m=..[,lambda=..]   index -> published (double)
///   oracle-switcher:eps=..,query=..,n=..,m=..,lambda=..  [index,delta] -> published (double)
///   gapnorm:n=..,r=..,B=..   vector -> 0/1
Responder make_defender(const std::string& spec_text, std::uint64_t seed);

}  // namespace advstream

#endif
