#ifndef ADVSTREAM_STREAM_HPP
#define ADVSTREAM_STREAM_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "advstream/core.hpp"

namespace advstream {

/// One turnstile update: add `delta` to coordinate `index` (1-based).
struct StreamUpdate {
    std::int64_t index = 0;
    std::int64_t delta = 0;
};

enum class StreamMode { Turnstile, InsertionOnly };

/// Static description of the stream a run is allowed to feed in: universe
/// size n, length bound m, and the bound M on any coordinate's magnitude.
struct StreamModel {
    StreamMode mode = StreamMode::Turnstile;
    std::int64_t universe_size = 0;   // n
    std::int64_t length_bound = 0;    // m
    std::int64_t max_coord = INT64_MAX;

    static StreamModel insertion_only(std::int64_t n, std::int64_t m) {
        return {StreamMode::InsertionOnly, n, m, INT64_MAX};
    }
    static StreamModel turnstile(std::int64_t n, std::int64_t m, std::int64_t max_coord) {
        return {StreamMode::Turnstile, n, m, max_coord};
    }
};

/// Dense frequency vector built by replaying updates. Coordinate i holds the
/// net sum of deltas applied at index i+1.
class FrequencyVector {
public:
    FrequencyVector() = default;
    explicit FrequencyVector(std::int64_t universe_size)
        : counts_(static_cast<std::size_t>(universe_size), 0) {}

    std::int64_t universe_size() const { return static_cast<std::int64_t>(counts_.size()); }
    std::int64_t at(std::int64_t index) const { return counts_[static_cast<std::size_t>(index - 1)]; }
    std::span<const std::int64_t> counts() const { return counts_; }

    friend FrequencyVector apply_update(FrequencyVector f, const StreamUpdate& u, const StreamModel& model);
    friend bool operator==(const FrequencyVector&, const FrequencyVector&) = default;

private:
    std::vector<std::int64_t> counts_;
};

/// Applies one update under the model's rules. Throws MalformedStream on an
/// out-of-range index, a negative delta in insertion-only mode, or a
/// coordinate leaving [-max_coord, max_coord].
FrequencyVector apply_update(FrequencyVector f, const StreamUpdate& u, const StreamModel& model);

/// Query over frequency vectors: distinct count (F0) or the p-th moment
/// sum |f_i|^p. F2 is Fp(2) spelled as its own constructor for convenience.
class QueryFunction {
public:
    enum class Kind { F0, Fp };

    static QueryFunction f0() { return QueryFunction(Kind::F0, 0.0); }
    static QueryFunction fp(double p) { return QueryFunction(Kind::Fp, p); }
    static QueryFunction f2() { return QueryFunction(Kind::Fp, 2.0); }

    Kind kind() const { return kind_; }
    double moment() const { return p_; }
    bool is_distinct_count() const { return kind_ == Kind::F0; }
    std::string name() const;

private:
    QueryFunction(Kind k, double p) : kind_(k), p_(p) {}
    Kind kind_;
    double p_;
};

double evaluate_query(const QueryFunction& g, const FrequencyVector& f);
double evaluate_query(const QueryFunction& g, std::span<const std::int64_t> counts);

/// Maximum k for which indices i_1 < ... < i_k exist such that each earlier
/// chosen value lies outside the (1 +- eps) window of the next chosen value.
/// Nonempty input always yields at least 1. O(d^2) after collapsing runs of
/// equal consecutive values (equal neighbours can never both join a chain).
std::int64_t flip_number(std::span<const double> values, double eps);

/// True iff `value` lies inside the closed interval spanned by
/// (1-eps)*center and (1+eps)*center. Centers of either sign are handled by
/// taking min/max of the two endpoints; center 0 gives the singleton {0}.
bool in_relative_window(double value, double center, double eps);

/// Ceiling of the insertion-only flip-number bound with explicit constant
/// c = 8: c*log(n)/eps for moments p <= 2, c*p*log(n)/eps for p > 2, and
/// c*log(m)/eps for the distinct count. Throws ConfigError when eps == 0
/// (the flip number is unbounded there).
std::int64_t flip_number_bound(const QueryFunction& g, double eps, std::int64_t n, std::int64_t m);

/// Line-oriented text stream format: one "index delta" pair per line,
/// '#'-prefixed comment lines and blank lines ignored.
std::vector<StreamUpdate> load_stream(const std::string& path);
std::vector<StreamUpdate> parse_stream(std::istream& in);
void save_stream(const std::string& path, std::span<const StreamUpdate> updates);

}  // namespace advstream

#endif
