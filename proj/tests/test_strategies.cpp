#include "ffg/strategies.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace ffgtest;

TEST(Strategies, Describe)
{
    EXPECT_EQ(ffg::describe(ffg::Honest{}), "honest");
    EXPECT_EQ(ffg::describe(ffg::Offline{3}), "offline(from=3)");
    EXPECT_EQ(ffg::describe(ffg::Equivocator{{0, 1}}), "equivocator(0,1)");
    EXPECT_EQ(ffg::describe(ffg::PartitionHonest{1}), "partition_honest(1)");
}

TEST(Strategies, WhoVotesWhere)
{
    EXPECT_TRUE(ffg::votes_honestly(ffg::Honest{}, 0, 0, 9));
    EXPECT_FALSE(ffg::votes_honestly(ffg::Honest{}, 0, 1, 9));
    EXPECT_TRUE(ffg::votes_honestly(ffg::Offline{5}, 0, 0, 4));
    EXPECT_FALSE(ffg::votes_honestly(ffg::Offline{5}, 0, 0, 5));
    EXPECT_FALSE(ffg::votes_honestly(ffg::WorstCase{5}, 0, 0, 5));
    EXPECT_TRUE(ffg::votes_honestly(ffg::Equivocator{{0, 1}}, 0, 1, 5));
    EXPECT_TRUE(ffg::votes_honestly(ffg::PartitionHonest{1}, 0, 1, 5));
    EXPECT_FALSE(ffg::votes_honestly(ffg::PartitionHonest{1}, 0, 0, 5));
    EXPECT_TRUE(ffg::is_worst_case_active(ffg::WorstCase{5}, 5));
    EXPECT_FALSE(ffg::is_worst_case_active(ffg::WorstCase{5}, 4));
    EXPECT_TRUE(std::holds_alternative<ffg::Honest>(ffg::unpartitioned(ffg::Equivocator{{0, 1}})));
    EXPECT_TRUE(std::holds_alternative<ffg::Offline>(ffg::unpartitioned(ffg::Offline{1})));
}

TEST(Strategies, WorstCaseDelta)
{
    EXPECT_DOUBLE_EQ(ffg::worst_case_delta(0.5), (2.0 / 3.0 - 0.5) / 0.5);
    EXPECT_EQ(ffg::worst_case_delta(0.7), 0.0);
    EXPECT_EQ(ffg::worst_case_delta(1.0), 0.0);
    EXPECT_NEAR(ffg::worst_case_delta(0.0), 2.0 / 3.0, 1e-15);
}

// The selected adversary never lifts the tally to the threshold while honest
// stake alone falls short, and nobody left out could have been added.
TEST(StrategiesProperty, WorstCaseVotersStayBelowThreshold)
{
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> dep(1.0, 100.0);
    for (int c = 0; c < kCases; ++c) {
        std::vector<ffg::Candidate> adv;
        std::size_t n = 1 + rng() % 20;
        double adv_total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            adv.push_back({vid(static_cast<std::uint32_t>(i)), dep(rng)});
            adv_total += adv.back().deposit;
        }
        double honest = dep(rng) * static_cast<double>(rng() % 30);
        double total = honest + adv_total;
        double thr = 2.0 / 3.0;
        auto chosen = ffg::worst_case_voters(honest, adv, total, thr, 0.5);
        double stake = honest;
        for (auto id : chosen) stake += adv[ffg::raw(id)].deposit;
        if (ffg::meets_threshold(honest, total, thr)) {
            ASSERT_EQ(chosen.size(), n);
            continue;
        }
        ASSERT_FALSE(ffg::meets_threshold(stake, total, thr));
        ASSERT_LE(stake, std::max(honest, thr * total - 0.5));
        for (const auto& cand : adv) {
            if (std::find(chosen.begin(), chosen.end(), cand.id) == chosen.end()) {
                ASSERT_GT(stake + cand.deposit, thr * total - 0.5);
            }
        }
    }
}

TEST(Strategies, HonestVoteUsesLastJustified)
{
    auto view = linear_chain(12);
    ffg::FinalityState f(view, 5, 4);
    ffg::VoteHistory h;
    ffg::BranchContext ctx{0, &view, &f, bid(11), 2};
    auto v = ffg::honest_vote(ctx, vid(3), h);
    ASSERT_TRUE(v);
    EXPECT_EQ(v->target, bid(10));
    EXPECT_EQ(v->source_height, 0u);
    EXPECT_EQ(f.validate_vote(view, *v, 2), ffg::VoteCheck::Valid);
    h.add(*v);
    EXPECT_FALSE(ffg::honest_vote(ctx, vid(3), h)); // already cast
    ctx.epoch = 0;
    EXPECT_FALSE(ffg::honest_vote(ctx, vid(3), h));
}

TEST(Strategies, SlashingProtection)
{
    ffg::ChainView view = linear_chain(11);
    view.add_block({bid(100), bid(9)});
    ffg::FinalityState f(view, 5);
    ffg::VoteHistory h;
    h.add(ffg::make_vote(0, vid(0), bid(10), 2, 0));
    ffg::BranchContext ctx{1, &view, &f, bid(100), 2};
    EXPECT_FALSE(ffg::honest_vote(ctx, vid(0), h, true));
    EXPECT_TRUE(ffg::honest_vote(ctx, vid(0), h, false));
    auto eq = ffg::decide_votes(ffg::Equivocator{{0, 1}}, 0, vid(0), ctx, h, false);
    EXPECT_EQ(eq.size(), 1u);
    EXPECT_TRUE(ffg::decide_votes(ffg::Honest{}, 0, vid(0), ctx, h, false).empty());
}
