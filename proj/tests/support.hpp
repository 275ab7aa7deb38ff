#pragma once

#include "ffg/chain.hpp"
#include "ffg/finality.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace ffgtest {

using ffg::BlockId;

constexpr int kCases = 1000;

inline BlockId bid(std::uint64_t v) { return BlockId{v}; }
inline ffg::ValidatorId vid(std::uint32_t v) { return ffg::ValidatorId{v}; }

// Blocks 0..n-1 on a single chain; block 0 is genesis.
ffg::ChainView linear_chain(std::uint64_t n);

// Random tree of n blocks: each block's parent is drawn uniformly from the
// blocks before it. parents[i] is the parent index (-1 for genesis).
struct RandomTree {
    ffg::ChainView view;
    std::vector<std::int64_t> parents;
};
RandomTree random_tree(std::mt19937_64& rng, std::uint64_t n, double extend_tip_bias = 0.0);

// Parent-walk oracle.
bool naive_is_ancestor(const std::vector<std::int64_t>& parents, std::uint64_t a, std::uint64_t d);
std::uint64_t naive_height(const std::vector<std::int64_t>& parents, std::uint64_t b);

inline ffg::Vote vote(std::uint32_t v, std::uint64_t target, std::uint64_t th, std::uint64_t sh,
                      std::uint64_t secret = 0)
{
    return ffg::make_vote(secret, vid(v), bid(target), th, sh);
}

} // namespace ffgtest
