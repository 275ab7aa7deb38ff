#pragma once

#include "ffg/chain.hpp"
#include "ffg/finality.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace ffg {

// Small checkpoint trees with two conflicting branches of three epochs.
enum class TreeShape {
    ForkAtGenesis,  // g -> a1 -> a2 -> a3, g -> b1 -> b2 -> b3
    ForkAfterFirst, // g -> c1 -> a2 -> a3, c1 -> b2 -> b3
};

inline constexpr std::size_t kMaxTreeNodes = 8;

struct CheckpointTree {
    TreeShape shape{};
    std::size_t size = 0; // node 0 is genesis; parents precede children
    std::array<int, kMaxTreeNodes> parent{};
    std::array<std::uint64_t, kMaxTreeNodes> height{};
    std::array<char, kMaxTreeNodes> side{}; // 'g', 's' (shared), 'a' or 'b'
    std::vector<std::pair<int, int>> links; // (source, target), source a strict ancestor
};

CheckpointTree make_tree(TreeShape shape);

// A validator's vote set as a bitmask over tree.links. Every option casts at
// most one vote per target checkpoint: with equal weights a second vote on
// the same target is already a slashing-condition-I offence, so dropping it
// cannot hide a counterexample.
std::vector<std::uint32_t> enumerate_options(const CheckpointTree& tree);

// Votes of one option, heights in checkpoints.
std::vector<Vote> option_votes(const CheckpointTree& tree, std::uint32_t option, ValidatorId validator);

// True iff two votes of the option violate a slashing condition.
bool self_violating(const CheckpointTree& tree, std::uint32_t option);

inline constexpr std::size_t kSearchValidators = 3;

struct SafetyOutcome {
    std::uint32_t justified = 0; // bitmask over tree nodes
    std::uint32_t finalized = 0;
    bool conflict = false;       // finalized checkpoints on both sides
    double slashable = 0.0;      // stake share owning a violating pair
};

// Justification as a least fixed point: a target is justified once some
// justified ancestor links to it with at least 2/3 of the stake. Finalized:
// justified with a justified direct child.
SafetyOutcome evaluate_assignment(const CheckpointTree& tree, const std::array<double, kSearchValidators>& weights,
                                  const std::array<std::uint32_t, kSearchValidators>& options);

// The same result computed with ChainView, FinalityState and the brute-force
// slashing scan; used to cross-check the compact evaluator.
SafetyOutcome evaluate_with_protocol(const CheckpointTree& tree, const std::array<double, kSearchValidators>& weights,
                                     const std::array<std::uint32_t, kSearchValidators>& options);

struct SearchStats {
    std::uint64_t assignments = 0;
    std::uint64_t conflicts = 0;
    std::uint64_t counterexamples = 0; // conflict with slashable < 1/3
    double min_slashable_on_conflict = 1.0;
    std::array<std::uint32_t, kSearchValidators> example{}; // first counterexample, if any

    bool operator==(const SearchStats&) const = default;
};

// Every assignment of options to the three validators. With equal weights
// only multisets are enumerated, since permuting validators changes nothing.
SearchStats exhaustive_safety_search(TreeShape shape, const std::array<double, kSearchValidators>& weights);
SearchStats exhaustive_safety_search_serial(TreeShape shape, const std::array<double, kSearchValidators>& weights);

} // namespace ffg
