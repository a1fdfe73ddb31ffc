#include "advstream/sketch.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace advstream {
namespace {

constexpr std::uint32_t kSnapshotMagic = 0x41445353;  // "ADSS"
constexpr std::uint16_t kAmsVersion = 1;
constexpr std::uint16_t kKmvVersion = 1;

void put_bytes(std::vector<std::uint8_t>& out, const void* src, std::size_t len) {
    const auto* p = static_cast<const std::uint8_t*>(src);
    out.insert(out.end(), p, p + len);
}

template <class T>
void put(std::vector<std::uint8_t>& out, T value) {
    put_bytes(out, &value, sizeof(T));
}

template <class T>
T take(std::span<const std::uint8_t>& in) {
    if (in.size() < sizeof(T)) throw ConfigError("sketch snapshot truncated");
    T value;
    std::memcpy(&value, in.data(), sizeof(T));
    in = in.subspan(sizeof(T));
    return value;
}

double median_of(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

AmsSketch::AmsSketch(double eps, double delta, std::uint64_t seed, std::int64_t universe_hint)
    : eps_(eps), delta_(delta), seed_(seed) {
    if (eps <= 0.0 || eps >= 1.0 || delta <= 0.0 || delta >= 1.0) {
        throw ConfigError("AmsSketch: eps and delta must lie in (0,1)");
    }
    rows_ = std::max(1, static_cast<int>(std::ceil(8.0 * std::log(1.0 / delta))));
    cols_ = std::max(1, static_cast<int>(std::ceil(8.0 / (eps * eps))));
    const std::size_t cells = static_cast<std::size_t>(rows_) * static_cast<std::size_t>(cols_);
    cells_.assign(cells, 0);
    hashes_.reserve(cells);
    for (std::size_t c = 0; c < cells; ++c) {
        hashes_.emplace_back(splitmix64(seed + 0x100000001ULL * (c + 1)));
    }
    if (universe_hint > 0) {
        plane_universe_ = universe_hint;
        sign_plane_.resize(static_cast<std::size_t>(universe_hint) * cells);
        for (std::int64_t i = 1; i <= universe_hint; ++i) {
            std::int8_t* row = sign_plane_.data() + static_cast<std::size_t>(i - 1) * cells;
            for (std::size_t c = 0; c < cells; ++c) {
                row[c] = static_cast<std::int8_t>(hashes_[c].sign(static_cast<std::uint64_t>(i)));
            }
        }
    }
}

void AmsSketch::update(const StreamUpdate& u) {
    const std::size_t cells = cells_.size();
    if (plane_universe_ > 0 && u.index >= 1 && u.index <= plane_universe_) {
        const std::int8_t* signs = sign_plane_.data() + static_cast<std::size_t>(u.index - 1) * cells;
        const std::int64_t d = u.delta;
        for (std::size_t c = 0; c < cells; ++c) cells_[c] += d * signs[c];
        return;
    }
    const auto x = static_cast<std::uint64_t>(u.index);
    for (std::size_t c = 0; c < cells; ++c) cells_[c] += u.delta * hashes_[c].sign(x);
}

double AmsSketch::estimate() const {
    std::vector<double> row_means(static_cast<std::size_t>(rows_));
    for (int r = 0; r < rows_; ++r) {
        double sum = 0.0;
        const std::int64_t* row = cells_.data() + static_cast<std::size_t>(r) * cols_;
        for (int c = 0; c < cols_; ++c) {
            sum += static_cast<double>(row[c]) * static_cast<double>(row[c]);
        }
        row_means[static_cast<std::size_t>(r)] = sum / cols_;
    }
    return median_of(std::move(row_means));
}

int AmsSketch::cell_sign(int row, int col, std::int64_t index) const {
    return hashes_[static_cast<std::size_t>(row) * cols_ + col].sign(static_cast<std::uint64_t>(index));
}

std::vector<std::uint8_t> AmsSketch::snapshot() const {
    std::vector<std::uint8_t> out;
    put(out, kSnapshotMagic);
    put(out, kAmsVersion);
    put(out, eps_);
    put(out, delta_);
    put(out, seed_);
    put(out, plane_universe_);
    put(out, static_cast<std::uint64_t>(cells_.size()));
    put_bytes(out, cells_.data(), cells_.size() * sizeof(std::int64_t));
    return out;
}

AmsSketch AmsSketch::restore(std::span<const std::uint8_t> blob) {
    if (take<std::uint32_t>(blob) != kSnapshotMagic) throw ConfigError("not a sketch snapshot");
    if (take<std::uint16_t>(blob) != kAmsVersion) throw ConfigError("unsupported ams snapshot version");
    const double eps = take<double>(blob);
    const double delta = take<double>(blob);
    const auto seed = take<std::uint64_t>(blob);
    const auto universe = take<std::int64_t>(blob);
    AmsSketch sk(eps, delta, seed, universe);
    const auto count = take<std::uint64_t>(blob);
    if (count != sk.cells_.size() || blob.size() < count * sizeof(std::int64_t)) {
        throw ConfigError("ams snapshot cell count mismatch");
    }
    std::memcpy(sk.cells_.data(), blob.data(), count * sizeof(std::int64_t));
    return sk;
}

KmvSketch::KmvSketch(int k, std::uint64_t seed) : k_(k), seed_(seed) {
    if (k < 1) throw ConfigError("KmvSketch: capacity must be >= 1");
    heap_.reserve(static_cast<std::size_t>(k));
}

void KmvSketch::insert(std::int64_t index) {
    const std::uint64_t h = index_hash64(seed_, static_cast<std::uint64_t>(index));
    // Only the current k minima are live; a hash above the heap root was
    // either never stored or already evicted, and re-inserting it is a no-op.
    if (static_cast<int>(heap_.size()) < k_) {
        if (members_.contains(h)) return;
        members_.insert(h);
        heap_.push_back(h);
        std::push_heap(heap_.begin(), heap_.end());
        return;
    }
    if (h >= heap_.front() || members_.contains(h)) return;
    members_.erase(heap_.front());
    std::pop_heap(heap_.begin(), heap_.end());
    heap_.back() = h;
    members_.insert(h);
    std::push_heap(heap_.begin(), heap_.end());
}

void KmvSketch::update(const StreamUpdate& u) {
    if (u.delta < 0) throw MalformedStream("KmvSketch is insertion-only; got negative delta");
    if (u.delta > 0) insert(u.index);
}

double KmvSketch::estimate() const {
    if (static_cast<int>(heap_.size()) < k_) return static_cast<double>(heap_.size());
    const double kth = (static_cast<double>(heap_.front()) + 1.0) * 0x1.0p-64;
    return static_cast<double>(k_ - 1) / kth;
}

std::vector<std::uint8_t> KmvSketch::snapshot() const {
    std::vector<std::uint8_t> out;
    put(out, kSnapshotMagic);
    put(out, kKmvVersion);
    put(out, static_cast<std::int32_t>(k_));
    put(out, seed_);
    put(out, static_cast<std::uint64_t>(heap_.size()));
    put_bytes(out, heap_.data(), heap_.size() * sizeof(std::uint64_t));
    return out;
}

KmvSketch KmvSketch::restore(std::span<const std::uint8_t> blob) {
    if (take<std::uint32_t>(blob) != kSnapshotMagic) throw ConfigError("not a sketch snapshot");
    if (take<std::uint16_t>(blob) != kKmvVersion) throw ConfigError("unsupported kmv snapshot version");
    const auto k = take<std::int32_t>(blob);
    const auto seed = take<std::uint64_t>(blob);
    KmvSketch sk(k, seed);
    const auto count = take<std::uint64_t>(blob);
    if (blob.size() < count * sizeof(std::uint64_t)) throw ConfigError("kmv snapshot truncated");
    sk.heap_.resize(count);
    std::memcpy(sk.heap_.data(), blob.data(), count * sizeof(std::uint64_t));
    std::make_heap(sk.heap_.begin(), sk.heap_.end());
    sk.members_.insert(sk.heap_.begin(), sk.heap_.end());
    return sk;
}

bool strong_tracking_check(std::span<const double> outputs, std::span<const double> truths, double eps) {
    if (outputs.size() != truths.size()) {
        throw ConfigError("strong_tracking_check: output and truth sequences differ in length");
    }
    for (std::size_t t = 0; t < outputs.size(); ++t) {
        if (std::abs(outputs[t] - truths[t]) > eps * std::abs(truths[t])) return false;
    }
    return true;
}

}  // namespace advstream
