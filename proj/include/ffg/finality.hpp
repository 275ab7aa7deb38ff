#pragma once

#include "ffg/chain.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace ffg {

// The vote message <validator, t, h(t), h(s), S>. Heights are counted in
// checkpoints (epochs), not blocks.
struct Vote {
    ValidatorId validator{};
    BlockId target{};
    std::uint64_t target_height = 0;
    std::uint64_t source_height = 0;
    std::uint64_t signature = 0;

    auto operator<=>(const Vote&) const = default;
};

// Opaque authenticity token binding the vote fields to a per-scenario secret.
std::uint64_t sign_vote(std::uint64_t secret, ValidatorId validator, BlockId target,
                        std::uint64_t target_height, std::uint64_t source_height);

Vote make_vote(std::uint64_t secret, ValidatorId validator, BlockId target,
               std::uint64_t target_height, std::uint64_t source_height);

enum class VoteCheck {
    Valid,
    BadSignature,
    UnknownTarget,
    NotCheckpoint,
    WrongTargetEpoch,
    HeightMismatch,
    SourceNotBelowTarget,
    SourceNotJustified,
    WrongChain,
};

const char* to_string(VoteCheck check);

// tally >= threshold * total, the one comparison every justification uses.
bool meets_threshold(double tally, double total, double threshold);

// Justification / finalization bookkeeping for one branch of the protocol.
// Genesis starts justified and finalized. Both flags only ever get set.
class FinalityState {
public:
    FinalityState(const ChainView& view, std::uint64_t epoch_length, std::uint64_t secret = 0);

    std::uint64_t epoch_length() const { return epoch_length_; }
    std::uint64_t secret() const { return secret_; }

    bool is_justified(BlockId id) const { return justified_.count(id) != 0; }
    bool is_finalized(BlockId id) const { return finalized_.count(id) != 0; }
    std::size_t justified_count() const { return justified_.size(); }
    std::size_t finalized_count() const { return finalized_.size(); }
    std::vector<BlockId> justified() const;
    std::vector<BlockId> finalized() const;
    const std::vector<BlockId>& finalized_tips() const { return finalized_tips_; }

    // Total deposit of the epoch in which `id` was justified (0 for genesis).
    std::optional<double> justification_deposit(BlockId id) const;

    // Justified checkpoints ordered by checkpoint height, highest first.
    std::vector<BlockId> justified_descending() const;

    double tally(BlockId source, BlockId target) const;

    // Epoch bookkeeping. begin_epoch snapshots ESF for the reward scheme:
    // ESF_i = i - epoch of the last finalized checkpoint, taken at the start
    // of epoch i.
    void begin_epoch(std::uint64_t epoch);
    std::uint64_t current_epoch() const { return current_epoch_; }
    std::uint64_t epoch_esf() const { return epoch_esf_; }
    std::uint64_t esf() const;
    std::uint64_t last_finalized_epoch() const { return last_finalized_epoch_; }

    // Highest justified checkpoint on C(block) strictly below `below_height`
    // (in checkpoints); nullopt only if nothing qualifies.
    std::optional<BlockId> last_justified_below(const ChainView& view, BlockId block,
                                                std::uint64_t below_height) const;

    // Highest justified checkpoint on C(block) whose justification epoch had
    // a total deposit of at least `min_deposit`; genesis always qualifies.
    BlockId highest_justified_on_chain(const ChainView& view, BlockId block, double min_deposit) const;

    // Checkpoint at checkpoint-height `height` on C(target).
    std::optional<BlockId> source_checkpoint(const ChainView& view, BlockId target,
                                             std::uint64_t height) const;

    VoteCheck validate_vote(const ChainView& view, const Vote& vote, std::uint64_t current_epoch) const;

    // Additionally requires the target to lie on the chain of the including block.
    VoteCheck validate_vote(const ChainView& view, const Vote& vote, std::uint64_t current_epoch,
                            BlockId included_in) const;

    // Adds `weight` to the (source, target) tally. Throws DuplicateVote if the
    // validator already voted on that link.
    void record_vote(const ChainView& view, const Vote& vote, double weight);

    // Marks target justified iff the link tally meets the threshold and the
    // source is a justified ancestor. Returns true when newly justified.
    bool try_justify(const ChainView& view, BlockId source, BlockId target, double total_deposit,
                     double threshold);

    // Marks s finalized iff s and its direct child checkpoint are justified.
    bool try_finalize(const ChainView& view, BlockId checkpoint);

    struct VoteEffect {
        bool justified = false;
        std::vector<BlockId> finalized;
    };

    // record_vote + try_justify + try_finalize on the affected checkpoints.
    VoteEffect apply_vote(const ChainView& view, const Vote& vote, double weight,
                          double total_deposit, double threshold);

private:
    struct LinkHash {
        std::size_t operator()(const std::pair<BlockId, BlockId>& k) const noexcept
        {
            return std::hash<std::uint64_t>{}(raw(k.first) * 0x9E3779B97F4A7C15ULL ^ raw(k.second));
        }
    };
    struct VoterHash {
        std::size_t operator()(const std::pair<BlockId, ValidatorId>& k) const noexcept
        {
            return std::hash<std::uint64_t>{}(raw(k.first) * 0x9E3779B97F4A7C15ULL ^ raw(k.second));
        }
    };

    std::uint64_t checkpoint_height(const ChainView& view, BlockId id) const;
    void mark_justified(const ChainView& view, BlockId id, double total_deposit);
    void mark_finalized(const ChainView& view, BlockId id);

    std::uint64_t epoch_length_;
    std::uint64_t secret_;
    std::unordered_set<BlockId> justified_;
    std::unordered_set<BlockId> finalized_;
    std::map<std::uint64_t, std::vector<BlockId>> justified_by_height_;
    std::unordered_map<BlockId, double> justification_deposit_;
    std::vector<BlockId> finalized_tips_;
    std::unordered_map<std::pair<BlockId, BlockId>, double, LinkHash> tallies_;
    // Sources each validator has voted for, per target.
    std::unordered_map<std::pair<BlockId, ValidatorId>, std::vector<BlockId>, VoterHash> voted_links_;
    std::uint64_t current_epoch_ = 0;
    std::uint64_t epoch_esf_ = 0;
    std::uint64_t last_finalized_epoch_ = 0;
};

// True iff neither block is an ancestor of the other.
bool conflicting(const ChainView& view, BlockId a, BlockId b);

} // namespace ffg
