#ifndef ADVSTREAM_SWITCHER_HPP
#define ADVSTREAM_SWITCHER_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "advstream/parallel.hpp"
#include "advstream/sketch.hpp"
#include "advstream/stream.hpp"

namespace advstream {

/// Configuration for a sketch-switching run.
struct RobustConfig {
    double eps = 0.0;
    double delta = 0.0;
    std::int64_t universe_size = 0;  // n
    std::int64_t length_bound = 0;   // m
    QueryFunction query = QueryFunction::f0();
    std::optional<std::int64_t> lambda_override;
    bool cyclic = false;
    bool insertion_only = false;
};

/// Outcome of feeding one update through the switcher.
struct SwitchStep {
    double published = 0.0;        // output after this round
    double active_estimate = 0.0;  // estimate of the copy consulted this round
    bool flipped = false;
    std::int64_t active_copy = 1;  // 1-based
    bool exhausted = false;
};

/// Wraps independent strong-tracking copies into one adversarially robust
/// estimator. Every update is fed to all copies; the published value is
/// frozen until it leaves the (1 +- eps/2) window of the active copy's
/// estimate, at which point the active copy's estimate is published and the
/// next copy becomes active. With cyclic reuse the active index wraps;
/// otherwise running out of copies freezes the output permanently and flags
/// the run (a diagnostic, not a crash).
template <class Copy>
class SketchSwitcher {
public:
    using Factory = std::function<Copy(std::int64_t copy_index)>;

    SketchSwitcher(RobustConfig cfg, const Factory& factory)
        : cfg_(cfg),
          copy_count_(cfg.lambda_override
                          ? *cfg.lambda_override
                          : flip_number_bound(cfg.query, cfg.eps / 8.0, cfg.universe_size, cfg.length_bound)),
          published_(0.0) {
        if (cfg.eps <= 0.0 || cfg.eps >= 1.0 || cfg.delta <= 0.0 || cfg.delta >= 1.0) {
            throw ConfigError("sketch switcher: eps and delta must lie in (0,1)");
        }
        if (cfg.length_bound < 1) throw ConfigError("sketch switcher: stream length bound must be >= 1");
        if (copy_count_ < 1) throw ConfigError("sketch switcher needs at least one copy");
        copies_.reserve(static_cast<std::size_t>(copy_count_));
        for (std::int64_t i = 0; i < copy_count_; ++i) copies_.push_back(factory(i));
        // Published output starts at the query's value on the zero vector.
        published_ = 0.0;
    }

    SwitchStep process(const StreamUpdate& u, Exec exec = Exec::Serial) {
        if (rounds_ >= cfg_.length_bound) {
            throw ConfigError("sketch switcher fed beyond its configured stream length bound");
        }
        if (cfg_.insertion_only && u.delta < 0) {
            throw MalformedStream("insertion-only switcher got a negative delta");
        }
        ++rounds_;
        // Deactivated copies keep ingesting; every copy must stay current.
        parallel_for(copy_count_, exec, [&](std::int64_t i) { copies_[static_cast<std::size_t>(i)].update(u); });

        SwitchStep step;
        const double y = copies_[static_cast<std::size_t>(active_ - 1)].estimate();
        step.active_estimate = y;
        if (!exhausted_ && !in_relative_window(published_, y, cfg_.eps / 2.0)) {
            published_ = y;
            ++switch_count_;
            step.flipped = true;
            if (active_ == copy_count_) {
                if (cfg_.cyclic) {
                    active_ = 1;
                } else {
                    exhausted_ = true;  // last budgeted flip: publish, then freeze
                }
            } else {
                ++active_;
            }
        }
        step.published = published_;
        step.active_copy = active_;
        step.exhausted = exhausted_;
        return step;
    }

    double published() const { return published_; }
    std::int64_t active_copy() const { return active_; }
    std::int64_t copy_count() const { return copy_count_; }
    std::int64_t switch_count() const { return switch_count_; }
    bool exhausted() const { return exhausted_; }
    std::int64_t rounds_seen() const { return rounds_; }
    const RobustConfig& config() const { return cfg_; }
    const Copy& copy(std::int64_t idx) const { return copies_[static_cast<std::size_t>(idx)]; }

private:
    RobustConfig cfg_;
    std::int64_t copy_count_;
    std::vector<Copy> copies_;
    std::int64_t active_ = 1;
    double published_;
    std::int64_t switch_count_ = 0;
    std::int64_t rounds_ = 0;
    bool exhausted_ = false;
};

/// Zero-error copy backed by an exact replay of the frequency vector; used
/// as the deterministic reference instantiation in tests and experiments.
class OracleCopy {
public:
    OracleCopy(QueryFunction g, std::int64_t universe_size)
        : query_(g), freq_(universe_size), model_{StreamMode::Turnstile, universe_size, INT64_MAX, INT64_MAX} {}

    void update(const StreamUpdate& u) { freq_ = apply_update(std::move(freq_), u, model_); }
    double estimate() const { return evaluate_query(query_, freq_); }

private:
    QueryFunction query_;
    FrequencyVector freq_;
    StreamModel model_;
};

/// Robust distinct-elements estimator: cyclic switcher over KMV copies with
/// copy count ceil(8 ln(1/eps)/eps) and per-copy capacity sized for eps/8
/// accuracy. Insertion-only by construction.
inline SketchSwitcher<KmvSketch> robust_distinct_elements(double eps, double delta,
                                                          std::int64_t universe_size,
                                                          std::int64_t length_bound,
                                                          std::uint64_t seed,
                                                          std::optional<std::int64_t> lambda_override = {}) {
    if (eps <= 0.0 || eps >= 1.0) throw ConfigError("robust_distinct_elements: eps must lie in (0,1)");
    RobustConfig cfg;
    cfg.eps = eps;
    cfg.delta = delta;
    cfg.universe_size = universe_size;
    cfg.length_bound = length_bound;
    cfg.query = QueryFunction::f0();
    cfg.cyclic = true;
    cfg.insertion_only = true;
    cfg.lambda_override = lambda_override
                              ? *lambda_override
                              : std::max<std::int64_t>(1, static_cast<std::int64_t>(
                                                              std::ceil(8.0 * std::log(1.0 / eps) / eps)));
    const double track_eps = eps / 8.0;
    const int capacity = std::max(1, static_cast<int>(std::ceil(8.0 / (track_eps * track_eps))));
    return SketchSwitcher<KmvSketch>(cfg, [seed, capacity](std::int64_t i) {
        return KmvSketch(capacity, splitmix64(seed + 0x51ED2701ULL * (i + 1)));
    });
}

}  // namespace advstream

#endif
