#include "advstream/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace advstream {

SamplerState SamplerState::bernoulli(double p, std::uint64_t seed) {
    if (p < 0.0 || p > 1.0) throw ConfigError("bernoulli rate must lie in [0,1]");
    SamplerState st(SamplerKind::Bernoulli, seed);
    st.rate_ = p;
    return st;
}

SamplerState SamplerState::uniform(std::int64_t k, std::int64_t stream_length, std::uint64_t seed) {
    if (k < 0 || k > stream_length) throw ConfigError("uniform sampler needs 0 <= k <= stream length");
    SamplerState st(SamplerKind::Uniform, seed);
    st.capacity_ = k;
    // Floyd's sampling: k distinct indices drawn without replacement.
    for (std::int64_t j = stream_length - k + 1; j <= stream_length; ++j) {
        const std::int64_t t = st.rng_.next_in(1, j);
        if (!st.chosen_indices_.insert(t).second) st.chosen_indices_.insert(j);
    }
    return st;
}

SamplerState SamplerState::reservoir(std::int64_t k, std::uint64_t seed) {
    if (k < 1) throw ConfigError("reservoir sampler needs k >= 1");
    SamplerState st(SamplerKind::Reservoir, seed);
    st.capacity_ = k;
    return st;
}

bool SamplerState::step(std::int64_t index, std::int64_t value) {
    if (index != rounds_ + 1) {
        throw ConfigError("sampler fed out of order: expected index " + std::to_string(rounds_ + 1) +
                          ", got " + std::to_string(index));
    }
    rounds_ = index;
    switch (kind_) {
        case SamplerKind::Bernoulli: {
            const bool accept = rng_.coin(rate_);
            if (accept) sample_.push_back({index, value});
            return accept;
        }
        case SamplerKind::Uniform: {
            const bool accept = chosen_indices_.contains(index);
            if (accept) sample_.push_back({index, value});
            return accept;
        }
        case SamplerKind::Reservoir: {
            if (index <= capacity_) {
                sample_.push_back({index, value});
                return true;
            }
            // Accept with probability k/i, then evict a uniform victim.
            const bool accept = rng_.next_below(static_cast<std::uint64_t>(index)) <
                                static_cast<std::uint64_t>(capacity_);
            if (accept) {
                const auto victim = static_cast<std::size_t>(rng_.next_below(static_cast<std::uint64_t>(capacity_)));
                sample_[victim] = {index, value};
            }
            return accept;
        }
    }
    return false;
}

std::vector<std::int64_t> SamplerState::sample_values() const {
    std::vector<std::int64_t> values;
    values.reserve(sample_.size());
    for (const SampledItem& item : sample_) values.push_back(item.value);
    return values;
}

namespace {

void require_multiset_subset(std::span<const std::int64_t> stream, std::span<const std::int64_t> sample) {
    std::unordered_map<std::int64_t, std::int64_t> counts;
    for (std::int64_t v : stream) ++counts[v];
    for (std::int64_t v : sample) {
        auto it = counts.find(v);
        if (it == counts.end() || it->second == 0) {
            throw ConfigError("sample is not a multiset subset of the stream (value " + std::to_string(v) + ")");
        }
        --it->second;
    }
}

/// Prefix families: the error at threshold b is |F_X(b) - F_S(b)| for the
/// empirical CDFs; it only changes at witnessed values, so sweeping the
/// sorted union of values visits every candidate maximum.
double prefix_error(std::span<const std::int64_t> stream, std::span<const std::int64_t> sample) {
    std::vector<std::int64_t> xs(stream.begin(), stream.end());
    std::vector<std::int64_t> ss(sample.begin(), sample.end());
    std::sort(xs.begin(), xs.end());
    std::sort(ss.begin(), ss.end());
    const double nx = static_cast<double>(xs.size());
    const double ns = static_cast<double>(ss.size());
    double best = 0.0;
    std::size_t ix = 0, is = 0;
    while (ix < xs.size() || is < ss.size()) {
        std::int64_t v;
        if (is == ss.size() || (ix < xs.size() && xs[ix] < ss[is])) v = xs[ix];
        else v = ss[is];
        while (ix < xs.size() && xs[ix] <= v) ++ix;
        while (is < ss.size() && ss[is] <= v) ++is;
        best = std::max(best, std::abs(static_cast<double>(ix) / nx - static_cast<double>(is) / ns));
    }
    return best;
}

}  // namespace

double epsilon_approx_error(std::span<const std::int64_t> stream_values,
                            std::span<const std::int64_t> sample_values,
                            const FiniteSetSystem& sys,
                            Exec exec) {
    if (stream_values.empty()) throw ConfigError("epsilon_approx_error: empty stream");
    if (sample_values.empty()) throw ConfigError("epsilon_approx_error: empty sample");
    require_multiset_subset(stream_values, sample_values);

    if (sys.is_prefix_family()) return prefix_error(stream_values, sample_values);

    const std::int64_t ranges = sys.range_count();
    const double nx = static_cast<double>(stream_values.size());
    const double ns = static_cast<double>(sample_values.size());
    std::vector<double> per_range(static_cast<std::size_t>(ranges), 0.0);
    parallel_for(ranges, exec, [&](std::int64_t r) {
        std::int64_t in_stream = 0;
        for (std::int64_t v : stream_values) in_stream += sys.range_contains(r, v);
        std::int64_t in_sample = 0;
        for (std::int64_t v : sample_values) in_sample += sys.range_contains(r, v);
        per_range[static_cast<std::size_t>(r)] =
            std::abs(static_cast<double>(in_stream) / nx - static_cast<double>(in_sample) / ns);
    });
    double best = 0.0;
    for (double e : per_range) best = std::max(best, e);
    return best;
}

std::int64_t static_sample_size(std::int64_t vc_dim, double eps, double delta) {
    if (vc_dim < 0) throw ConfigError("static_sample_size: VC dimension must be >= 0");
    if (eps <= 0.0 || eps >= 1.0 || delta <= 0.0 || delta >= 1.0) {
        throw ConfigError("static_sample_size: eps and delta must lie in (0,1)");
    }
    const double raw = 10.0 * (static_cast<double>(vc_dim) + std::log(1.0 / delta)) / (eps * eps);
    return static_cast<std::int64_t>(std::ceil(raw));
}

double robust_sample_rate(double range_count, double eps, double delta, std::int64_t stream_length) {
    if (range_count < 1.0 || eps <= 0.0 || delta <= 0.0 || stream_length < 1) {
        throw ConfigError("robust_sample_rate: all parameters must be positive");
    }
    const double p = 10.0 * (std::log(range_count) + std::log(4.0 / delta)) /
                     (eps * eps * static_cast<double>(stream_length));
    if (p > 1.0) {
        throw ConfigError("robust_sample_rate: required rate " + std::to_string(p) +
                          " exceeds 1; the stream is too short for the requested robustness");
    }
    return p;
}

}  // namespace advstream
