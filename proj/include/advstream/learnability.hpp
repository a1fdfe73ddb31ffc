#ifndef ADVSTREAM_LEARNABILITY_HPP
#define ADVSTREAM_LEARNABILITY_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "advstream/rng.hpp"
#include "advstream/set_system.hpp"

namespace advstream {

/// True iff every one of the 2^|C| labelings of C is realized by some range.
/// |C| is capped at 20.
bool shatters(const FiniteSetSystem& sys, const std::vector<std::int64_t>& C);

/// Largest |C| shattered, by exhaustive search; universe size capped at 24.
std::int64_t vc_dimension(const FiniteSetSystem& sys);

/// Complete binary decision tree witnessing an online dimension: internal
/// nodes carry universe elements (heap layout, 2^depth - 1 entries), leaves
/// carry the index of a hypothesis consistent with the root-to-leaf path
/// (left = label 0, right = label 1).
struct MistakeTree {
    std::int64_t depth = 0;
    std::vector<std::int64_t> node_elements;
    std::vector<std::int64_t> leaf_witnesses;  // 2^depth entries
};

/// Depth of the deepest complete mistake tree the family shatters; -1 for an
/// empty family, 0 for a single hypothesis. Memoized recursion over the
/// consistent-hypothesis subset; range count capped at 2^16.
std::int64_t littlestone_dimension(const FiniteSetSystem& sys);

/// Witness tree of depth littlestone_dimension(sys) (depth >= 1 only).
std::optional<MistakeTree> extract_mistake_tree(const FiniteSetSystem& sys);

/// Checks every root-to-leaf path of the tree against its leaf witness.
bool verify_mistake_tree(const FiniteSetSystem& sys, const MistakeTree& tree);

/// Max over ranges of the red/blue imbalance | |X_I cap R| - |X_rest cap R| |.
/// I holds 1-based positions into X.
std::int64_t disc(const FiniteSetSystem& sys, const std::vector<std::int64_t>& items,
                  const std::vector<std::int64_t>& red_positions);

/// Incremental state of the coloring game: per-range signed imbalance
/// (red minus blue), recomputable from scratch.
class ColoringState {
public:
    explicit ColoringState(const FiniteSetSystem& sys);

    void place(std::int64_t item, bool red);
    std::int64_t imbalance() const;  // max absolute per-range imbalance
    /// Max absolute imbalance if `item` were colored `red`, without placing.
    std::int64_t imbalance_if(std::int64_t item, bool red) const;
    std::int64_t items_placed() const { return placed_; }

private:
    const FiniteSetSystem* sys_;
    std::vector<std::int64_t> per_range_;
    std::int64_t placed_ = 0;
};

struct DiscGameView {
    const std::vector<std::int64_t>& items;   // placed so far
    const std::vector<bool>& colors;          // true = red, aligned with items
    const ColoringState& state;
};

/// Adversary: next item to place. Painter: color for the just-placed item.
using ItemStrategy = std::function<std::int64_t(const DiscGameView&, const FiniteSetSystem&, Rng&)>;
using PaintStrategy = std::function<bool(const DiscGameView&, std::int64_t item, const FiniteSetSystem&, Rng&)>;

PaintStrategy random_painter();
/// Picks the color minimizing the post-move maximum imbalance, ties red.
PaintStrategy greedy_painter();
ItemStrategy uniform_item_adversary();
/// Plays each universe element twice in a row (1,1,2,2,...), wrapping.
ItemStrategy duplicate_pair_adversary();

/// Alternating placement/coloring for two_k rounds (two_k must be even);
/// returns the final discrepancy.
std::int64_t play_discrepancy_game(const PaintStrategy& painter, const ItemStrategy& adversary,
                                   std::int64_t two_k, const FiniteSetSystem& sys, std::uint64_t seed);

struct RademacherEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t trials = 0;
    std::vector<std::int64_t> discs;
};

/// Monte-Carlo mean discrepancy of seeded games under the given strategy
/// pair (the expectation is over whatever the strategies randomize; both
/// painter and adversary are explicit parameters).
RademacherEstimate estimate_sequential_rademacher(const FiniteSetSystem& sys, std::int64_t rounds,
                                                  std::int64_t trials, const PaintStrategy& painter,
                                                  const ItemStrategy& adversary, std::uint64_t seed,
                                                  int workers = 1);

}  // namespace advstream

#endif
