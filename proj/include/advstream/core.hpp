#ifndef ADVSTREAM_CORE_HPP
#define ADVSTREAM_CORE_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace advstream {

/// Signals a stream that violates its model (bad index, negative delta in
/// insertion-only mode, coordinate bound exceeded).
struct MalformedStream : std::runtime_error {
    explicit MalformedStream(const std::string& what) : std::runtime_error(what) {}
};

/// Signals an experiment or CLI configuration that cannot be run.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Signals a violated run-time invariant detected mid-experiment.
struct InvariantViolation : std::runtime_error {
    explicit InvariantViolation(const std::string& what) : std::runtime_error(what) {}
};

/// 64-bit finalizer used for seed mixing and cheap hashing.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed for trial i derived from a master seed. Documented mixer: trial i
/// uses splitmix64(master + (i+1) * golden), so any subset of trials can be
/// reproduced independently of the others.
inline std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial) {
    return splitmix64(master + (trial + 1) * 0x9E3779B97F4A7C15ULL);
}

}  // namespace advstream

#endif
