#include "advstream/learnability.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "advstream/parallel.hpp"

namespace advstream {

bool shatters(const FiniteSetSystem& sys, const std::vector<std::int64_t>& C) {
    if (C.size() > 20) throw ConfigError("shatters: subsets larger than 20 are not supported");
    if (C.empty()) return sys.range_count() > 0;
    const auto traces = sys.distinct_traces(C);
    return traces.size() == (std::size_t{1} << C.size());
}

namespace {

bool any_subset_of_size_shatters(const FiniteSetSystem& sys, std::int64_t size,
                                 std::vector<std::int64_t>& C, std::int64_t next) {
    if (static_cast<std::int64_t>(C.size()) == size) return shatters(sys, C);
    for (std::int64_t e = next; e <= sys.universe_size(); ++e) {
        C.push_back(e);
        if (any_subset_of_size_shatters(sys, size, C, e + 1)) {
            C.pop_back();
            return true;
        }
        C.pop_back();
    }
    return false;
}

}  // namespace

std::int64_t vc_dimension(const FiniteSetSystem& sys) {
    if (sys.universe_size() > 24) throw ConfigError("vc_dimension: exhaustive search capped at universe 24");
    if (sys.range_count() == 0) return 0;
    std::int64_t dim = 0;
    // Shattering is downward closed: once no set of size s shatters, stop.
    for (std::int64_t s = 1; s <= sys.universe_size(); ++s) {
        std::vector<std::int64_t> C;
        if (!any_subset_of_size_shatters(sys, s, C, 1)) break;
        dim = s;
    }
    return dim;
}

namespace {

/// Hypotheses as index lists; memo key packs the consistent subset.
struct LdimContext {
    const FiniteSetSystem& sys;
    std::unordered_map<std::string, std::int64_t> memo;

    static std::string key_of(const std::vector<std::int32_t>& hyps) {
        return {reinterpret_cast<const char*>(hyps.data()), hyps.size() * sizeof(std::int32_t)};
    }

    std::int64_t ldim(const std::vector<std::int32_t>& hyps) {
        if (hyps.empty()) return -1;
        if (hyps.size() == 1) return 0;
        const std::string key = key_of(hyps);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        std::int64_t best = 0;
        std::vector<std::int32_t> with, without;
        for (std::int64_t x = 1; x <= sys.universe_size(); ++x) {
            with.clear();
            without.clear();
            for (std::int32_t h : hyps) {
                (sys.range_contains(h, x) ? with : without).push_back(h);
            }
            if (with.empty() || without.empty()) continue;
            const std::int64_t depth = 1 + std::min(ldim(without), ldim(with));
            best = std::max(best, depth);
        }
        memo.emplace(key, best);
        return best;
    }

    /// Same recursion, recording the splitting element and recursing into a
    /// tree of exactly `depth` levels; hyps must support that depth.
    bool build(const std::vector<std::int32_t>& hyps, std::int64_t depth, MistakeTree& tree,
               std::int64_t node, std::int64_t leaf_base, std::int64_t leaf_span) {
        if (depth == 0) {
            tree.leaf_witnesses[static_cast<std::size_t>(leaf_base)] = hyps.front();
            return true;
        }
        std::vector<std::int32_t> with, without;
        for (std::int64_t x = 1; x <= sys.universe_size(); ++x) {
            with.clear();
            without.clear();
            for (std::int32_t h : hyps) {
                (sys.range_contains(h, x) ? with : without).push_back(h);
            }
            if (with.empty() || without.empty()) continue;
            if (ldim(without) >= depth - 1 && ldim(with) >= depth - 1) {
                tree.node_elements[static_cast<std::size_t>(node)] = x;
                const std::int64_t half = leaf_span / 2;
                return build(without, depth - 1, tree, 2 * node + 1, leaf_base, half) &&
                       build(with, depth - 1, tree, 2 * node + 2, leaf_base + half, half);
            }
        }
        return false;
    }
};

std::vector<std::int32_t> all_hypotheses(const FiniteSetSystem& sys) {
    if (sys.range_count() > (std::int64_t{1} << 16)) {
        throw ConfigError("littlestone_dimension: range count capped at 2^16");
    }
    std::vector<std::int32_t> hyps(static_cast<std::size_t>(sys.range_count()));
    for (std::size_t i = 0; i < hyps.size(); ++i) hyps[i] = static_cast<std::int32_t>(i);
    return hyps;
}

}  // namespace

std::int64_t littlestone_dimension(const FiniteSetSystem& sys) {
    LdimContext ctx{sys, {}};
    return ctx.ldim(all_hypotheses(sys));
}

std::optional<MistakeTree> extract_mistake_tree(const FiniteSetSystem& sys) {
    LdimContext ctx{sys, {}};
    const auto hyps = all_hypotheses(sys);
    const std::int64_t depth = ctx.ldim(hyps);
    if (depth < 1) return std::nullopt;
    MistakeTree tree;
    tree.depth = depth;
    tree.node_elements.assign((std::size_t{1} << depth) - 1, 0);
    tree.leaf_witnesses.assign(std::size_t{1} << depth, -1);
    if (!ctx.build(hyps, depth, tree, 0, 0, std::int64_t{1} << depth)) return std::nullopt;
    return tree;
}

bool verify_mistake_tree(const FiniteSetSystem& sys, const MistakeTree& tree) {
    const std::int64_t leaves = std::int64_t{1} << tree.depth;
    for (std::int64_t leaf = 0; leaf < leaves; ++leaf) {
        const std::int64_t witness = tree.leaf_witnesses[static_cast<std::size_t>(leaf)];
        if (witness < 0 || witness >= sys.range_count()) return false;
        std::int64_t node = 0;
        for (std::int64_t level = tree.depth - 1; level >= 0; --level) {
            const std::int64_t element = tree.node_elements[static_cast<std::size_t>(node)];
            const bool label = (leaf >> level) & 1;  // bit path, high bit first
            if (sys.range_contains(witness, element) != label) return false;
            node = 2 * node + 1 + (label ? 1 : 0);
        }
    }
    return true;
}

std::int64_t disc(const FiniteSetSystem& sys, const std::vector<std::int64_t>& items,
                  const std::vector<std::int64_t>& red_positions) {
    std::vector<bool> red(items.size(), false);
    for (std::int64_t pos : red_positions) {
        if (pos < 1 || pos > static_cast<std::int64_t>(items.size())) {
            throw ConfigError("disc: color-set position outside [1, |X|]");
        }
        red[static_cast<std::size_t>(pos - 1)] = true;
    }
    std::int64_t best = 0;
    for (std::int64_t r = 0; r < sys.range_count(); ++r) {
        std::int64_t bal = 0;
        for (std::size_t i = 0; i < items.size(); ++i) {
            if (sys.range_contains(r, items[i])) bal += red[i] ? 1 : -1;
        }
        best = std::max(best, std::abs(bal));
    }
    return best;
}

ColoringState::ColoringState(const FiniteSetSystem& sys)
    : sys_(&sys), per_range_(static_cast<std::size_t>(sys.range_count()), 0) {}

void ColoringState::place(std::int64_t item, bool red) {
    const std::int64_t delta = red ? 1 : -1;
    for (std::int64_t r = 0; r < sys_->range_count(); ++r) {
        if (sys_->range_contains(r, item)) per_range_[static_cast<std::size_t>(r)] += delta;
    }
    ++placed_;
}

std::int64_t ColoringState::imbalance() const {
    std::int64_t best = 0;
    for (std::int64_t v : per_range_) best = std::max(best, std::abs(v));
    return best;
}

std::int64_t ColoringState::imbalance_if(std::int64_t item, bool red) const {
    const std::int64_t delta = red ? 1 : -1;
    std::int64_t best = 0;
    for (std::int64_t r = 0; r < sys_->range_count(); ++r) {
        std::int64_t v = per_range_[static_cast<std::size_t>(r)];
        if (sys_->range_contains(r, item)) v += delta;
        best = std::max(best, std::abs(v));
    }
    return best;
}

PaintStrategy random_painter() {
    return [](const DiscGameView&, std::int64_t, const FiniteSetSystem&, Rng& rng) { return rng.coin(0.5); };
}

PaintStrategy greedy_painter() {
    return [](const DiscGameView& view, std::int64_t item, const FiniteSetSystem&, Rng&) {
        const std::int64_t if_red = view.state.imbalance_if(item, true);
        const std::int64_t if_blue = view.state.imbalance_if(item, false);
        return if_red <= if_blue;  // ties toward red
    };
}

ItemStrategy uniform_item_adversary() {
    return [](const DiscGameView&, const FiniteSetSystem& sys, Rng& rng) {
        return rng.next_in(1, sys.universe_size());
    };
}

ItemStrategy duplicate_pair_adversary() {
    return [](const DiscGameView& view, const FiniteSetSystem& sys, Rng&) {
        const std::int64_t t = view.state.items_placed();
        return 1 + (t / 2) % sys.universe_size();
    };
}

std::int64_t play_discrepancy_game(const PaintStrategy& painter, const ItemStrategy& adversary,
                                   std::int64_t two_k, const FiniteSetSystem& sys, std::uint64_t seed) {
    if (two_k < 0 || two_k % 2 != 0) throw ConfigError("discrepancy game: round count must be even");
    Rng adv_rng(splitmix64(seed ^ 0xADu));
    Rng paint_rng(splitmix64(seed ^ 0x9Au));
    std::vector<std::int64_t> items;
    std::vector<bool> colors;
    ColoringState state(sys);
    for (std::int64_t t = 0; t < two_k; ++t) {
        const DiscGameView view{items, colors, state};
        const std::int64_t item = adversary(view, sys, adv_rng);
        const bool red = painter(view, item, sys, paint_rng);
        state.place(item, red);
        items.push_back(item);
        colors.push_back(red);
    }
    return state.imbalance();
}

RademacherEstimate estimate_sequential_rademacher(const FiniteSetSystem& sys, std::int64_t rounds,
                                                  std::int64_t trials, const PaintStrategy& painter,
                                                  const ItemStrategy& adversary, std::uint64_t seed,
                                                  int workers) {
    if (trials < 1) throw ConfigError("sequential Rademacher estimate needs trials >= 1");
    RademacherEstimate est;
    est.trials = trials;
    est.discs = run_trials<std::int64_t>(trials, workers, [&](std::int64_t i) {
        return play_discrepancy_game(painter, adversary, rounds, sys, trial_seed(seed, static_cast<std::uint64_t>(i)));
    });
    double sum = 0.0;
    for (std::int64_t d : est.discs) sum += static_cast<double>(d);
    est.mean = sum / static_cast<double>(trials);
    double var = 0.0;
    for (std::int64_t d : est.discs) {
        const double dev = static_cast<double>(d) - est.mean;
        var += dev * dev;
    }
    est.std_error = trials > 1 ? std::sqrt(var / static_cast<double>(trials - 1) / static_cast<double>(trials)) : 0.0;
    return est;
}

}  // namespace advstream
