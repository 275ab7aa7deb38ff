#include "ffg/fork_choice.hpp"

#include <algorithm>
#include <tuple>

namespace ffg {

BlockId fork_choice(const ChainView& view, const FinalityState& finality, const ProtocolParams& params)
{
    if (view.empty()) throw Error(ErrorCode::UnknownBlock, "fork_choice on an empty view");

    std::vector<BlockId> finalized = view.finalized_tips();
    for (BlockId tip : finality.finalized_tips()) {
        if (view.contains(tip)) insert_tip(finalized, tip, view);
    }

    const std::uint64_t l = finality.epoch_length();
    BlockId best{};
    // (finalized tips kept, justified checkpoint height, block height, -arrival)
    std::tuple<std::size_t, std::uint64_t, std::uint64_t, std::int64_t> best_key{};
    bool have = false;
    for (BlockId leaf : view.leaves()) {
        std::size_t kept = static_cast<std::size_t>(std::count_if(
            finalized.begin(), finalized.end(), [&](BlockId f) { return view.is_ancestor(f, leaf); }));
        BlockId justified = finality.highest_justified_on_chain(view, leaf, params.min_fork_choice_deposit);
        auto key = std::make_tuple(kept, view.height(justified) / l, view.height(leaf),
                                   -static_cast<std::int64_t>(view.seen_order(leaf)));
        if (!have || key > best_key) {
            best = leaf;
            best_key = key;
            have = true;
        }
    }
    return best;
}

} // namespace ffg
