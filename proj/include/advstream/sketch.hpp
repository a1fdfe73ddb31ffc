#ifndef ADVSTREAM_SKETCH_HPP
#define ADVSTREAM_SKETCH_HPP

#include <cstdint>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "advstream/hash.hpp"
#include "advstream/stream.hpp"

namespace advstream {

/// Second-moment sketch: rows x cols signed accumulators, one independent
/// four-wise sign hash per cell. Each cell holds the inner product of the
/// frequency vector with that cell's sign vector, so the whole state is a
/// linear function of the stream. The estimate is the median over rows of
/// the mean over the row's squared cells.
class AmsSketch {
public:
    /// rows = ceil(8 ln(1/delta)), cols = ceil(8 / eps^2). A positive
    /// universe_hint precomputes the sign plane (universe x cells signs) so
    /// long streams pay one table lookup per cell instead of a hash.
    AmsSketch(double eps, double delta, std::uint64_t seed, std::int64_t universe_hint = 0);

    void update(const StreamUpdate& u);
    double estimate() const;

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    double eps() const { return eps_; }
    double delta() const { return delta_; }
    std::uint64_t seed() const { return seed_; }
    std::span<const std::int64_t> cells() const { return cells_; }
    int cell_sign(int row, int col, std::int64_t index) const;

    /// Versioned binary snapshot (header + config + cells). Restoring
    /// rebuilds the hashes from the stored seed; the format is documented in
    /// the README and is not bit-stable across versions.
    std::vector<std::uint8_t> snapshot() const;
    static AmsSketch restore(std::span<const std::uint8_t> blob);

private:
    int rows_ = 0;
    int cols_ = 0;
    double eps_ = 0.0;
    double delta_ = 0.0;
    std::uint64_t seed_ = 0;
    std::vector<std::int64_t> cells_;
    std::vector<FourWiseSignHash> hashes_;
    std::vector<std::int8_t> sign_plane_;  // universe x cells, optional
    std::int64_t plane_universe_ = 0;
};

/// k-minimum-values distinct-count sketch over an insertion-only stream.
/// Keeps the k smallest 64-bit hash values of the inserted indices; the
/// estimate is exact while fewer than k distinct values have been seen and
/// (k-1)/v_k afterwards, with v_k the k-th smallest hash normalized to (0,1].
class KmvSketch {
public:
    KmvSketch(int k, std::uint64_t seed);

    void insert(std::int64_t index);
    void update(const StreamUpdate& u);  // requires delta >= 0; delta 0 is a no-op
    double estimate() const;

    int capacity() const { return k_; }
    std::uint64_t seed() const { return seed_; }
    std::size_t stored() const { return heap_.size(); }

    std::vector<std::uint8_t> snapshot() const;
    static KmvSketch restore(std::span<const std::uint8_t> blob);

private:
    int k_ = 0;
    std::uint64_t seed_ = 0;
    std::vector<std::uint64_t> heap_;  // max-heap of the k smallest hashes
    std::unordered_set<std::uint64_t> members_;
};

/// True iff every output is within eps relative error of its truth. A zero
/// truth admits only an exactly-zero output. Throws on length mismatch.
bool strong_tracking_check(std::span<const double> outputs, std::span<const double> truths, double eps);

}  // namespace advstream

#endif
