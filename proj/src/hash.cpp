#include "advstream/hash.hpp"

namespace advstream {
namespace {

constexpr std::uint64_t kPrime61 = FourWiseSignHash::kPrime;

inline std::uint64_t mulmod61(std::uint64_t a, std::uint64_t b) {
    const unsigned __int128 wide = static_cast<unsigned __int128>(a) * b;
    std::uint64_t lo = static_cast<std::uint64_t>(wide & kPrime61);
    std::uint64_t hi = static_cast<std::uint64_t>(wide >> 61);
    std::uint64_t sum = lo + hi;
    if (sum >= kPrime61) sum -= kPrime61;
    return sum;
}

}  // namespace

FourWiseSignHash::FourWiseSignHash(std::uint64_t seed) : seed_(seed) {
    // Rejection-sample four field coefficients from a splitmix stream.
    std::uint64_t state = splitmix64(seed ^ 0xC2B2AE3D27D4EB4FULL);
    for (auto& c : coeff_) {
        std::uint64_t v;
        do {
            state = splitmix64(state);
            v = state & ((1ULL << 61) - 1);
        } while (v >= kPrime61);
        c = v;
    }
}

std::uint64_t FourWiseSignHash::eval(std::uint64_t x) const {
    const std::uint64_t xm = x % kPrime61;
    std::uint64_t acc = coeff_[3];
    acc = mulmod61(acc, xm);
    acc += coeff_[2];
    if (acc >= kPrime61) acc -= kPrime61;
    acc = mulmod61(acc, xm);
    acc += coeff_[1];
    if (acc >= kPrime61) acc -= kPrime61;
    acc = mulmod61(acc, xm);
    acc += coeff_[0];
    if (acc >= kPrime61) acc -= kPrime61;
    return acc;
}

}  // namespace advstream
