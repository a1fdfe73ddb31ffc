#ifndef ADVSTREAM_SET_SYSTEM_HPP
#define ADVSTREAM_SET_SYSTEM_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "advstream/core.hpp"
#include "advstream/rng.hpp"

namespace advstream {

/// Universe [1, N] plus a range family. Two storage modes share one
/// interface: an explicit list of ranges held as bitsets (small N), and the
/// implicit prefix-interval family {[1,b] : b in [1,N]} evaluated by
/// predicate so N up to 2^62 stays feasible.
class FiniteSetSystem {
public:
    FiniteSetSystem() = default;

    /// Explicit family; duplicate ranges are dropped.
    static FiniteSetSystem explicit_ranges(std::int64_t universe_size,
                                           const std::vector<std::vector<std::int64_t>>& ranges);
    /// Implicit prefix-interval family over [1, N].
    static FiniteSetSystem prefix_intervals(std::int64_t universe_size);

    /// Each range contains each universe element independently with
    /// probability 1/2; duplicates dropped afterwards.
    static FiniteSetSystem random_system(std::int64_t universe_size, std::int64_t range_count, Rng& rng);

    std::int64_t universe_size() const { return universe_; }
    bool is_prefix_family() const { return prefix_; }
    std::int64_t range_count() const;
    bool range_contains(std::int64_t range_idx, std::int64_t element) const;
    std::vector<std::int64_t> range_elements(std::int64_t range_idx) const;

    /// Restriction of range range_idx to the ordered elements of C, packed as
    /// a bitmask (bit i set iff C[i] is in the range).
    std::uint32_t trace_mask(std::int64_t range_idx, const std::vector<std::int64_t>& C) const;

    /// Distinct traces the family induces on C. For the prefix family these
    /// are generated directly (|C|+1 masks) instead of enumerating N ranges.
    std::vector<std::uint32_t> distinct_traces(const std::vector<std::int64_t>& C) const;

    /// Text format: "prefix N" or a first line N followed by one range per
    /// line as sorted index lists; '#' comments ignored.
    static FiniteSetSystem load(const std::string& path);
    static FiniteSetSystem parse(std::istream& in);
    void save(const std::string& path) const;

    /// Parses "prefix:N" or treats the argument as a file path.
    static FiniteSetSystem from_spec(const std::string& spec);

private:
    std::int64_t universe_ = 0;
    bool prefix_ = false;
    std::vector<std::vector<std::uint64_t>> bits_;  // explicit ranges, packed
    std::size_t words_ = 0;
};

}  // namespace advstream

#endif
