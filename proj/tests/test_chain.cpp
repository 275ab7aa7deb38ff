#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace ffgtest;
using ffg::ErrorCode;

namespace {

template <class F> ErrorCode code_of(F&& f)
{
    try {
        f();
    } catch (const ffg::Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no ffg::Error thrown";
    return ErrorCode::DomainError;
}

} // namespace

TEST(Chain, EpochAndCheckpoint)
{
    EXPECT_EQ(ffg::epoch_of(0, 50), 0u);
    EXPECT_EQ(ffg::epoch_of(49, 50), 0u);
    EXPECT_EQ(ffg::epoch_of(50, 50), 1u);
    EXPECT_TRUE(ffg::is_checkpoint(100, 50));
    EXPECT_FALSE(ffg::is_checkpoint(101, 50));
}

TEST(Chain, HeightsFollowParents)
{
    auto view = linear_chain(120);
    EXPECT_EQ(view.size(), 120u);
    EXPECT_EQ(view.genesis(), bid(0));
    EXPECT_EQ(view.height(bid(119)), 119u);
    EXPECT_EQ(view.checkpoint_of(bid(119), 50), bid(100));
    EXPECT_EQ(view.checkpoint_of(bid(100), 50), bid(100));
    EXPECT_EQ(*view.ancestor_at_height(bid(119), 50), bid(50));
    EXPECT_FALSE(view.ancestor_at_height(bid(10), 11).has_value());
    EXPECT_EQ(view.chain_of(bid(3)), (std::vector<BlockId>{bid(3), bid(2), bid(1), bid(0)}));
    EXPECT_EQ(view.leaves(), std::vector<BlockId>{bid(119)});
}

TEST(Chain, DeclaredHeightIsIgnored)
{
    ffg::ChainView view;
    view.add_block({bid(7), std::nullopt, 42});
    view.add_block({bid(8), bid(7), 999});
    EXPECT_EQ(view.height(bid(7)), 0u);
    EXPECT_EQ(view.height(bid(8)), 1u);
}

TEST(Chain, Errors)
{
    auto view = linear_chain(3);
    EXPECT_EQ(code_of([&] { view.add_block({bid(1), bid(0)}); }), ErrorCode::DuplicateId);
    EXPECT_EQ(code_of([&] { view.add_block({bid(9), bid(77)}); }), ErrorCode::UnknownParent);
    EXPECT_EQ(code_of([&] { view.add_block({bid(9), std::nullopt}); }), ErrorCode::UnknownParent);
    EXPECT_EQ(code_of([&] { (void)view.block(bid(77)); }), ErrorCode::UnknownBlock);
    EXPECT_EQ(code_of([&] { (void)view.is_ancestor(bid(0), bid(77)); }), ErrorCode::UnknownBlock);
    ffg::ChainView empty;
    EXPECT_EQ(code_of([&] { (void)empty.genesis(); }), ErrorCode::UnknownBlock);
}

TEST(Chain, AncestryMatchesParentWalk)
{
    std::mt19937_64 rng(11);
    for (int c = 0; c < kCases; ++c) {
        std::uint64_t n = 2 + rng() % 80;
        auto t = random_tree(rng, n, 0.7);
        for (int q = 0; q < 20; ++q) {
            std::uint64_t a = rng() % n;
            std::uint64_t d = rng() % n;
            ASSERT_EQ(t.view.is_ancestor(bid(a), bid(d)), naive_is_ancestor(t.parents, a, d));
            ASSERT_EQ(t.view.height(bid(d)), naive_height(t.parents, d));
            std::uint64_t h = rng() % (t.view.height(bid(d)) + 1);
            auto anc = t.view.ancestor_at_height(bid(d), h);
            ASSERT_TRUE(anc.has_value());
            ASSERT_EQ(t.view.height(*anc), h);
            ASSERT_TRUE(naive_is_ancestor(t.parents, ffg::raw(*anc), d));
        }
    }
}

TEST(Chain, LongChainSkipPointers)
{
    auto view = linear_chain(20000);
    EXPECT_TRUE(view.is_ancestor(bid(1), bid(19999)));
    EXPECT_FALSE(view.is_ancestor(bid(19999), bid(1)));
    for (std::uint64_t h : {0u, 1u, 4095u, 4096u, 12345u, 19999u})
        EXPECT_EQ(*view.ancestor_at_height(bid(19999), h), bid(h));
}

TEST(Chain, LeavesAreChildless)
{
    std::mt19937_64 rng(5);
    for (int c = 0; c < 200; ++c) {
        std::uint64_t n = 1 + rng() % 40;
        auto t = random_tree(rng, n);
        std::vector<BlockId> expect;
        for (std::uint64_t i = 0; i < n; ++i)
            if (std::find(t.parents.begin(), t.parents.end(), static_cast<std::int64_t>(i)) == t.parents.end())
                expect.push_back(bid(i));
        auto got = t.view.leaves();
        std::sort(got.begin(), got.end());
        ASSERT_EQ(got, expect);
    }
}

TEST(Chain, FinalizedTipsKeepOnlyMaximal)
{
    ffg::ChainView view = linear_chain(10);
    view.add_block({bid(20), bid(3)});
    view.mark_finalized(bid(2));
    view.mark_finalized(bid(5));
    view.mark_finalized(bid(1));
    EXPECT_EQ(view.finalized_tips(), std::vector<BlockId>{bid(5)});
    view.mark_finalized(bid(20));
    auto tips = view.finalized_tips();
    std::sort(tips.begin(), tips.end());
    EXPECT_EQ(tips, (std::vector<BlockId>{bid(5), bid(20)}));
    EXPECT_TRUE(view.knows_finalized(bid(1)));
}

TEST(Chain, OvertakeProbability)
{
    EXPECT_DOUBLE_EQ(ffg::overtake_probability(0.25, 0), 1.0);
    EXPECT_NEAR(ffg::overtake_probability(0.25, 3), 1.0 / 27.0, 1e-15);
    EXPECT_THROW(ffg::overtake_probability(0.5, 1), ffg::Error);
}

TEST(Chain, ParamsValidate)
{
    ffg::ProtocolParams p;
    EXPECT_NO_THROW(p.validate());
    p.finality_threshold = 0.5;
    EXPECT_THROW(p.validate(), ffg::Error);
    p = {};
    p.epoch_length = 0;
    EXPECT_THROW(p.validate(), ffg::Error);
}
