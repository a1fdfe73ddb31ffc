#ifndef ADVSTREAM_HASH_HPP
#define ADVSTREAM_HASH_HPP

#include <array>
#include <cstdint>

#include "advstream/core.hpp"

namespace advstream {

/// Four-wise independent +-1 hash: a degree-3 polynomial over the Mersenne
/// field GF(2^61 - 1) with seeded uniform coefficients; the low output bit
/// selects the sign.
class FourWiseSignHash {
public:
    static constexpr std::uint64_t kPrime = (1ULL << 61) - 1;

    explicit FourWiseSignHash(std::uint64_t seed);

    int sign(std::uint64_t x) const { return (eval(x) & 1ULL) ? 1 : -1; }
    std::uint64_t eval(std::uint64_t x) const;
    std::uint64_t seed() const { return seed_; }

private:
    std::array<std::uint64_t, 4> coeff_{};
    std::uint64_t seed_ = 0;
};

/// Stateless 64-bit index hash used by the distinct-count sketch; the value
/// is uniform over the full 64-bit range for fixed seed and distinct indices.
inline std::uint64_t index_hash64(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(splitmix64(seed ^ 0xA5A5A5A55A5A5A5AULL) + index);
}

}  // namespace advstream

#endif
