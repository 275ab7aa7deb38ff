#include "ffg/chain.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ffg {

const char* to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::UnknownParent: return "UnknownParent";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::UnknownBlock: return "UnknownBlock";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::DuplicateVote: return "DuplicateVote";
    case ErrorCode::InvalidEvidence: return "InvalidEvidence";
    case ErrorCode::AlreadySlashed: return "AlreadySlashed";
    case ErrorCode::UnknownValidator: return "UnknownValidator";
    case ErrorCode::NegativeDeposit: return "NegativeDeposit";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::NeverFinalized: return "NeverFinalized";
    case ErrorCode::IterationLimit: return "IterationLimit";
    }
    return "Unknown";
}

void ProtocolParams::validate() const
{
    auto fail = [](const std::string& msg) { throw Error(ErrorCode::ConfigError, msg); };
    if (epoch_length < 1) fail("params.epoch_length must be >= 1");
    if (!(gamma > 0.0)) fail("params.gamma must be > 0");
    if (!(beta > 0.0)) fail("params.beta must be > 0");
    if (!(p > 0.0)) fail("params.p must be > 0");
    if (!(finality_threshold > 0.5 && finality_threshold <= 1.0))
        fail("params.finality_threshold must lie in (1/2, 1]");
    if (!(min_fork_choice_deposit >= 0.0)) fail("params.min_fork_choice_deposit must be >= 0");
}

std::uint64_t epoch_of(std::uint64_t height, std::uint64_t epoch_length)
{
    return height / epoch_length;
}

bool is_checkpoint(std::uint64_t height, std::uint64_t epoch_length)
{
    return height % epoch_length == 0;
}

double overtake_probability(double alpha, std::uint64_t deficit)
{
    if (!(alpha > 0.0 && alpha < 0.5))
        throw Error(ErrorCode::DomainError, "overtake_probability: alpha must lie in (0, 0.5)");
    if (deficit == 0) return 1.0;
    double p = std::pow(alpha / (1.0 - alpha), static_cast<double>(deficit));
    return std::clamp(p, 0.0, 1.0);
}

namespace {

// Skip-list heights as used by Bitcoin's CBlockIndex::GetSkipHeight.
std::int64_t invert_lowest_one(std::int64_t n) { return n & (n - 1); }

std::int64_t skip_height(std::int64_t height)
{
    if (height < 2) return 0;
    return (height & 1) ? invert_lowest_one(invert_lowest_one(height - 1)) + 1
                        : invert_lowest_one(height);
}

} // namespace

void ChainView::add_block(const Block& block)
{
    if (index_.count(block.id))
        throw Error(ErrorCode::DuplicateId, "block " + std::to_string(raw(block.id)) + " already known");

    Node node;
    node.block = block;
    if (!block.parent) {
        if (!nodes_.empty())
            throw Error(ErrorCode::UnknownParent, "second genesis block " + std::to_string(raw(block.id)));
        node.block.height = 0;
    } else {
        auto it = index_.find(*block.parent);
        if (it == index_.end())
            throw Error(ErrorCode::UnknownParent,
                        "parent " + std::to_string(raw(*block.parent)) + " of block " +
                            std::to_string(raw(block.id)) + " is unknown");
        Node& parent = nodes_[it->second];
        node.parent = static_cast<std::int64_t>(it->second);
        node.block.height = parent.block.height + 1;
        node.skip = static_cast<std::int64_t>(
            ancestor_index(it->second, static_cast<std::uint64_t>(skip_height(
                                           static_cast<std::int64_t>(node.block.height)))));
        if (parent.children++ == 0) leaves_.erase(it->second);
    }

    std::size_t index = nodes_.size();
    nodes_.push_back(node);
    index_.emplace(block.id, index);
    leaves_.insert(index);
}

BlockId ChainView::genesis() const
{
    if (nodes_.empty()) throw Error(ErrorCode::UnknownBlock, "empty view has no genesis");
    return nodes_.front().block.id;
}

std::size_t ChainView::index_of(BlockId id) const
{
    auto it = index_.find(id);
    if (it == index_.end())
        throw Error(ErrorCode::UnknownBlock, "block " + std::to_string(raw(id)) + " is unknown");
    return it->second;
}

const Block& ChainView::block(BlockId id) const { return nodes_[index_of(id)].block; }

std::size_t ChainView::seen_order(BlockId id) const { return index_of(id); }

std::size_t ChainView::ancestor_index(std::size_t index, std::uint64_t height) const
{
    const auto target = static_cast<std::int64_t>(height);
    std::int64_t walk = static_cast<std::int64_t>(index);
    std::int64_t walk_height = static_cast<std::int64_t>(nodes_[index].block.height);
    while (walk_height > target) {
        const Node& n = nodes_[static_cast<std::size_t>(walk)];
        std::int64_t h_skip = skip_height(walk_height);
        std::int64_t h_skip_prev = skip_height(walk_height - 1);
        if (n.skip >= 0 &&
            (h_skip == target ||
             (h_skip > target && !(h_skip_prev < h_skip - 2 && h_skip_prev >= target)))) {
            walk = n.skip;
            walk_height = h_skip;
        } else {
            walk = n.parent;
            --walk_height;
        }
    }
    return static_cast<std::size_t>(walk);
}

std::vector<BlockId> ChainView::chain_of(BlockId id) const
{
    std::vector<BlockId> out;
    std::int64_t walk = static_cast<std::int64_t>(index_of(id));
    out.reserve(nodes_[static_cast<std::size_t>(walk)].block.height + 1);
    while (walk >= 0) {
        out.push_back(nodes_[static_cast<std::size_t>(walk)].block.id);
        walk = nodes_[static_cast<std::size_t>(walk)].parent;
    }
    return out;
}

std::optional<BlockId> ChainView::ancestor_at_height(BlockId id, std::uint64_t height) const
{
    std::size_t index = index_of(id);
    if (height > nodes_[index].block.height) return std::nullopt;
    return nodes_[ancestor_index(index, height)].block.id;
}

bool ChainView::is_ancestor(BlockId ancestor, BlockId descendant) const
{
    std::size_t a = index_of(ancestor);
    std::size_t d = index_of(descendant);
    std::uint64_t ha = nodes_[a].block.height;
    if (ha > nodes_[d].block.height) return false;
    return ancestor_index(d, ha) == a;
}

BlockId ChainView::checkpoint_of(BlockId id, std::uint64_t epoch_length) const
{
    std::size_t index = index_of(id);
    std::uint64_t h = nodes_[index].block.height;
    return nodes_[ancestor_index(index, h - h % epoch_length)].block.id;
}

std::vector<BlockId> ChainView::leaves() const
{
    std::vector<BlockId> out;
    out.reserve(leaves_.size());
    for (std::size_t i : leaves_) out.push_back(nodes_[i].block.id);
    return out;
}

std::vector<BlockId> ChainView::blocks() const
{
    std::vector<BlockId> out;
    out.reserve(nodes_.size());
    for (const Node& n : nodes_) out.push_back(n.block.id);
    return out;
}

void ChainView::mark_finalized(BlockId id)
{
    index_of(id);
    if (!known_finalized_.insert(id).second) return;
    insert_tip(finalized_tips_, id, *this);
}

void insert_tip(std::vector<BlockId>& tips, BlockId id, const ChainView& view)
{
    for (BlockId tip : tips)
        if (view.is_ancestor(id, tip)) return;
    std::erase_if(tips, [&](BlockId tip) { return view.is_ancestor(tip, id); });
    tips.push_back(id);
}

} // namespace ffg
