#include "ffg/finality.hpp"

#include "ffg/rng.hpp"

#include <algorithm>
#include <string>

namespace ffg {

std::uint64_t sign_vote(std::uint64_t secret, ValidatorId validator, BlockId target,
                        std::uint64_t target_height, std::uint64_t source_height)
{
    std::uint64_t h = splitmix64(secret ^ 0x5157A7E5ULL);
    h = splitmix64(h ^ raw(validator));
    h = splitmix64(h ^ raw(target));
    h = splitmix64(h ^ target_height);
    h = splitmix64(h ^ (source_height << 1));
    return h;
}

Vote make_vote(std::uint64_t secret, ValidatorId validator, BlockId target,
               std::uint64_t target_height, std::uint64_t source_height)
{
    return Vote{validator, target, target_height, source_height,
                sign_vote(secret, validator, target, target_height, source_height)};
}

const char* to_string(VoteCheck check)
{
    switch (check) {
    case VoteCheck::Valid: return "Valid";
    case VoteCheck::BadSignature: return "BadSignature";
    case VoteCheck::UnknownTarget: return "UnknownTarget";
    case VoteCheck::NotCheckpoint: return "NotCheckpoint";
    case VoteCheck::WrongTargetEpoch: return "WrongTargetEpoch";
    case VoteCheck::HeightMismatch: return "HeightMismatch";
    case VoteCheck::SourceNotBelowTarget: return "SourceNotBelowTarget";
    case VoteCheck::SourceNotJustified: return "SourceNotJustified";
    case VoteCheck::WrongChain: return "WrongChain";
    }
    return "Unknown";
}

bool meets_threshold(double tally, double total, double threshold)
{
    return total > 0.0 && tally >= threshold * total;
}

FinalityState::FinalityState(const ChainView& view, std::uint64_t epoch_length, std::uint64_t secret)
    : epoch_length_(epoch_length), secret_(secret)
{
    if (epoch_length == 0) throw Error(ErrorCode::DomainError, "epoch_length must be >= 1");
    BlockId g = view.genesis();
    justified_.insert(g);
    justified_by_height_[0].push_back(g);
    justification_deposit_[g] = 0.0;
    finalized_.insert(g);
    finalized_tips_.push_back(g);
}

std::vector<BlockId> FinalityState::justified() const
{
    return {justified_.begin(), justified_.end()};
}

std::vector<BlockId> FinalityState::finalized() const
{
    return {finalized_.begin(), finalized_.end()};
}

std::optional<double> FinalityState::justification_deposit(BlockId id) const
{
    auto it = justification_deposit_.find(id);
    if (it == justification_deposit_.end()) return std::nullopt;
    return it->second;
}

std::vector<BlockId> FinalityState::justified_descending() const
{
    std::vector<BlockId> out;
    out.reserve(justified_.size());
    for (auto it = justified_by_height_.rbegin(); it != justified_by_height_.rend(); ++it)
        out.insert(out.end(), it->second.begin(), it->second.end());
    return out;
}

double FinalityState::tally(BlockId source, BlockId target) const
{
    auto it = tallies_.find({source, target});
    return it == tallies_.end() ? 0.0 : it->second;
}

void FinalityState::begin_epoch(std::uint64_t epoch)
{
    current_epoch_ = epoch;
    epoch_esf_ = esf();
}

std::uint64_t FinalityState::esf() const
{
    return current_epoch_ >= last_finalized_epoch_ ? current_epoch_ - last_finalized_epoch_ : 0;
}

std::uint64_t FinalityState::checkpoint_height(const ChainView& view, BlockId id) const
{
    return view.height(id) / epoch_length_;
}

std::optional<BlockId> FinalityState::last_justified_below(const ChainView& view, BlockId block,
                                                           std::uint64_t below_height) const
{
    auto it = justified_by_height_.lower_bound(below_height);
    while (it != justified_by_height_.begin()) {
        --it;
        for (BlockId cp : it->second)
            if (view.is_ancestor(cp, block)) return cp;
    }
    return std::nullopt;
}

BlockId FinalityState::highest_justified_on_chain(const ChainView& view, BlockId block,
                                                  double min_deposit) const
{
    auto it = justified_by_height_.upper_bound(checkpoint_height(view, block));
    while (it != justified_by_height_.begin()) {
        --it;
        if (it->first == 0) break;
        for (BlockId cp : it->second) {
            if (justification_deposit_.at(cp) >= min_deposit && view.is_ancestor(cp, block))
                return cp;
        }
    }
    return view.genesis();
}

std::optional<BlockId> FinalityState::source_checkpoint(const ChainView& view, BlockId target,
                                                        std::uint64_t height) const
{
    return view.ancestor_at_height(target, height * epoch_length_);
}

VoteCheck FinalityState::validate_vote(const ChainView& view, const Vote& vote,
                                       std::uint64_t current_epoch) const
{
    if (vote.signature !=
        sign_vote(secret_, vote.validator, vote.target, vote.target_height, vote.source_height))
        return VoteCheck::BadSignature;
    if (!view.contains(vote.target)) return VoteCheck::UnknownTarget;
    std::uint64_t h = view.height(vote.target);
    if (!is_checkpoint(h, epoch_length_)) return VoteCheck::NotCheckpoint;
    if (vote.target_height != h / epoch_length_) return VoteCheck::HeightMismatch;
    if (vote.target_height != current_epoch) return VoteCheck::WrongTargetEpoch;
    if (vote.source_height >= vote.target_height) return VoteCheck::SourceNotBelowTarget;
    auto source = source_checkpoint(view, vote.target, vote.source_height);
    if (!source || !is_justified(*source)) return VoteCheck::SourceNotJustified;
    return VoteCheck::Valid;
}

VoteCheck FinalityState::validate_vote(const ChainView& view, const Vote& vote,
                                       std::uint64_t current_epoch, BlockId included_in) const
{
    VoteCheck check = validate_vote(view, vote, current_epoch);
    if (check != VoteCheck::Valid) return check;
    if (!view.contains(included_in) || !view.is_ancestor(vote.target, included_in))
        return VoteCheck::WrongChain;
    if (epoch_of(view.height(included_in), epoch_length_) != current_epoch)
        return VoteCheck::WrongTargetEpoch;
    return VoteCheck::Valid;
}

void FinalityState::record_vote(const ChainView& view, const Vote& vote, double weight)
{
    if (weight < 0.0) throw Error(ErrorCode::DomainError, "negative vote weight");
    auto source = source_checkpoint(view, vote.target, vote.source_height);
    if (!source) throw Error(ErrorCode::UnknownBlock, "vote source is not on the target chain");

    auto& sources = voted_links_[{vote.target, vote.validator}];
    if (std::find(sources.begin(), sources.end(), *source) != sources.end())
        throw Error(ErrorCode::DuplicateVote, "validator " + std::to_string(raw(vote.validator)) +
                                                  " already voted for link " +
                                                  std::to_string(raw(*source)) + " -> " +
                                                  std::to_string(raw(vote.target)));
    sources.push_back(*source);
    tallies_[{*source, vote.target}] += weight;
}

bool FinalityState::try_justify(const ChainView& view, BlockId source, BlockId target,
                                double total_deposit, double threshold)
{
    if (is_justified(target)) return false;
    if (!is_justified(source)) return false;
    if (source == target || !view.is_ancestor(source, target)) return false;
    if (!meets_threshold(tally(source, target), total_deposit, threshold)) return false;
    mark_justified(view, target, total_deposit);
    return true;
}

void FinalityState::mark_justified(const ChainView& view, BlockId id, double total_deposit)
{
    justified_.insert(id);
    justified_by_height_[checkpoint_height(view, id)].push_back(id);
    justification_deposit_[id] = total_deposit;
}

bool FinalityState::try_finalize(const ChainView& view, BlockId checkpoint)
{
    if (is_finalized(checkpoint) || !is_justified(checkpoint)) return false;
    std::uint64_t child_height = checkpoint_height(view, checkpoint) + 1;
    auto it = justified_by_height_.find(child_height);
    if (it == justified_by_height_.end()) return false;
    for (BlockId child : it->second) {
        if (view.is_ancestor(checkpoint, child)) {
            mark_finalized(view, checkpoint);
            return true;
        }
    }
    return false;
}

void FinalityState::mark_finalized(const ChainView& view, BlockId id)
{
    finalized_.insert(id);
    insert_tip(finalized_tips_, id, view);
    last_finalized_epoch_ = std::max(last_finalized_epoch_, checkpoint_height(view, id));
}

FinalityState::VoteEffect FinalityState::apply_vote(const ChainView& view, const Vote& vote,
                                                    double weight, double total_deposit,
                                                    double threshold)
{
    VoteEffect effect;
    record_vote(view, vote, weight);
    BlockId source = *source_checkpoint(view, vote.target, vote.source_height);
    if (!try_justify(view, source, vote.target, total_deposit, threshold)) return effect;
    effect.justified = true;

    std::uint64_t th = checkpoint_height(view, vote.target);
    if (auto parent = view.ancestor_at_height(vote.target, (th - 1) * epoch_length_)) {
        if (try_finalize(view, *parent)) effect.finalized.push_back(*parent);
    }
    if (try_finalize(view, vote.target)) effect.finalized.push_back(vote.target);
    return effect;
}

bool conflicting(const ChainView& view, BlockId a, BlockId b)
{
    return !view.is_ancestor(a, b) && !view.is_ancestor(b, a);
}

} // namespace ffg
