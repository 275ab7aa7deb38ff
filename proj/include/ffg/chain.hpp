#pragma once

#include "ffg/types.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace ffg {

// Protocol constants shared by every module. Defaults are the benchmark
// parametrisation of the contract: 50-block epochs, gamma = 7e-3,
// beta = 2e-7, p = 1/2 and a two-thirds stake threshold.
struct ProtocolParams {
    std::uint64_t epoch_length = 50;
    double gamma = 7e-3;
    double beta = 2e-7;
    double p = 0.5;
    double finality_threshold = 2.0 / 3.0;
    double min_fork_choice_deposit = 1.0;

    // Throws Error(ConfigError) naming the offending field.
    void validate() const;
};

struct Block {
    BlockId id{};
    std::optional<BlockId> parent;
    std::uint64_t height = 0;
    std::optional<std::uint32_t> proposer;
    double seen_at = 0.0;
};

std::uint64_t epoch_of(std::uint64_t height, std::uint64_t epoch_length);
bool is_checkpoint(std::uint64_t height, std::uint64_t epoch_length);

// Gambler's-ruin bound (alpha / (1 - alpha))^k for an attacker holding
// alpha < 1/2 of the mining power and k blocks behind.
double overtake_probability(double alpha, std::uint64_t deficit);

// One observer's block tree. Blocks are only ever added; parents must be
// known before their children. Ancestor queries use skip pointers so they
// cost O(log height).
class ChainView {
public:
    ChainView() = default;

    // Throws Error(UnknownParent) / Error(DuplicateId).
    void add_block(const Block& block);

    bool empty() const { return nodes_.empty(); }
    std::size_t size() const { return nodes_.size(); }
    bool contains(BlockId id) const { return index_.count(id) != 0; }

    BlockId genesis() const;
    const Block& block(BlockId id) const;
    std::uint64_t height(BlockId id) const { return block(id).height; }

    // Position in arrival order; earlier arrival wins fork-choice ties.
    std::size_t seen_order(BlockId id) const;

    // (B, P(B), ..., genesis); length h(B) + 1.
    std::vector<BlockId> chain_of(BlockId id) const;

    // Ancestor of `id` at `height`, or nullopt if height > h(id).
    std::optional<BlockId> ancestor_at_height(BlockId id, std::uint64_t height) const;

    // True iff `ancestor` lies on C(descendant); a block is its own ancestor.
    bool is_ancestor(BlockId ancestor, BlockId descendant) const;

    // Most recent checkpoint on C(id), including id itself.
    BlockId checkpoint_of(BlockId id, std::uint64_t epoch_length) const;

    // Blocks without children, in arrival order.
    std::vector<BlockId> leaves() const;

    // All blocks in arrival order.
    std::vector<BlockId> blocks() const;

    // Finalized checkpoints this observer has learned about. Stored as the
    // set of maximal elements so fork choice only checks a few blocks.
    void mark_finalized(BlockId id);
    bool knows_finalized(BlockId id) const { return known_finalized_.count(id) != 0; }
    const std::unordered_set<BlockId>& known_finalized() const { return known_finalized_; }
    const std::vector<BlockId>& finalized_tips() const { return finalized_tips_; }

private:
    struct Node {
        Block block;
        std::int64_t parent = -1;
        std::int64_t skip = -1;
        std::uint32_t children = 0;
    };

    std::size_t index_of(BlockId id) const;
    std::size_t ancestor_index(std::size_t index, std::uint64_t height) const;

    std::vector<Node> nodes_;
    std::unordered_map<BlockId, std::size_t> index_;
    std::set<std::size_t> leaves_;
    std::unordered_set<BlockId> known_finalized_;
    std::vector<BlockId> finalized_tips_;
};

// Keeps `tips` equal to the maximal elements (w.r.t. ancestry) of the set
// of blocks inserted so far.
void insert_tip(std::vector<BlockId>& tips, BlockId id, const ChainView& view);

} // namespace ffg
