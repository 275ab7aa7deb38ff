#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

using namespace ffgtest;
using ffg::FinalityState;
using ffg::VoteCheck;

namespace {

constexpr double kThr = 2.0 / 3.0;

} // namespace

TEST(Finality, ThresholdBoundary)
{
    EXPECT_TRUE(ffg::meets_threshold(2.0, 3.0, kThr));
    EXPECT_FALSE(ffg::meets_threshold(1.999999, 3.0, kThr));
    EXPECT_FALSE(ffg::meets_threshold(0.0, 0.0, kThr));
}

TEST(Finality, GenesisStartsFinal)
{
    auto view = linear_chain(5);
    FinalityState f(view, 2);
    EXPECT_TRUE(f.is_justified(bid(0)));
    EXPECT_TRUE(f.is_finalized(bid(0)));
    EXPECT_EQ(f.finalized_tips(), std::vector<BlockId>{bid(0)});
    EXPECT_THROW(FinalityState(view, 0), ffg::Error);
}

TEST(Finality, ValidateVote)
{
    auto view = linear_chain(11); // l = 5: checkpoints 0, 5, 10
    FinalityState f(view, 5, 99);
    EXPECT_EQ(f.validate_vote(view, vote(0, 5, 1, 0, 99), 1), VoteCheck::Valid);
    EXPECT_EQ(f.validate_vote(view, vote(0, 5, 1, 0, 98), 1), VoteCheck::BadSignature);
    auto forged = vote(0, 5, 1, 0, 99);
    forged.source_height = 1;
    EXPECT_EQ(f.validate_vote(view, forged, 1), VoteCheck::BadSignature);
    EXPECT_EQ(f.validate_vote(view, vote(0, 50, 10, 0, 99), 10), VoteCheck::UnknownTarget);
    EXPECT_EQ(f.validate_vote(view, vote(0, 6, 1, 0, 99), 1), VoteCheck::NotCheckpoint);
    EXPECT_EQ(f.validate_vote(view, vote(0, 5, 2, 0, 99), 2), VoteCheck::HeightMismatch);
    EXPECT_EQ(f.validate_vote(view, vote(0, 5, 1, 0, 99), 2), VoteCheck::WrongTargetEpoch);
    EXPECT_EQ(f.validate_vote(view, vote(0, 5, 1, 1, 99), 1), VoteCheck::SourceNotBelowTarget);
    EXPECT_EQ(f.validate_vote(view, vote(0, 10, 2, 1, 99), 2), VoteCheck::SourceNotJustified);
    EXPECT_EQ(f.validate_vote(view, vote(0, 5, 1, 0, 99), 1, bid(7)), VoteCheck::Valid);
    EXPECT_EQ(f.validate_vote(view, vote(0, 5, 1, 0, 99), 1, bid(4)), VoteCheck::WrongChain);
    EXPECT_EQ(f.validate_vote(view, vote(0, 5, 1, 0, 99), 1, bid(10)), VoteCheck::WrongTargetEpoch);
}

TEST(Finality, JustifyThenFinalize)
{
    auto view = linear_chain(11);
    FinalityState f(view, 5);
    // Stakes 1, 1, 1: two votes reach 2/3 of 3.
    EXPECT_FALSE(f.apply_vote(view, vote(0, 5, 1, 0), 1.0, 3.0, kThr).justified);
    auto e = f.apply_vote(view, vote(1, 5, 1, 0), 1.0, 3.0, kThr);
    EXPECT_TRUE(e.justified);
    EXPECT_EQ(e.finalized, std::vector<BlockId>{}); // genesis was already final
    EXPECT_DOUBLE_EQ(f.tally(bid(0), bid(5)), 2.0);
    EXPECT_FALSE(f.is_finalized(bid(5)));

    f.apply_vote(view, vote(0, 10, 2, 1), 1.0, 3.0, kThr);
    e = f.apply_vote(view, vote(2, 10, 2, 1), 1.0, 3.0, kThr);
    EXPECT_TRUE(e.justified);
    EXPECT_EQ(e.finalized, std::vector<BlockId>{bid(5)});
    EXPECT_TRUE(f.is_finalized(bid(5)));
    EXPECT_FALSE(f.is_finalized(bid(10)));
    EXPECT_EQ(f.last_finalized_epoch(), 1u);
    EXPECT_EQ(f.finalized_tips(), std::vector<BlockId>{bid(5)});
    EXPECT_EQ(*f.justification_deposit(bid(5)), 3.0);
    EXPECT_EQ(f.justified_descending(), (std::vector<BlockId>{bid(10), bid(5), bid(0)}));
}

TEST(Finality, SkipLinkJustifiesButDoesNotFinalizeSource)
{
    auto view = linear_chain(16);
    FinalityState f(view, 5);
    f.apply_vote(view, vote(0, 15, 3, 0), 2.0, 3.0, kThr);
    EXPECT_TRUE(f.is_justified(bid(15)));
    EXPECT_FALSE(f.is_justified(bid(10)));
    EXPECT_EQ(f.finalized_count(), 1u);
}

TEST(Finality, DuplicateLinkVoteRejected)
{
    auto view = linear_chain(6);
    FinalityState f(view, 5);
    f.record_vote(view, vote(0, 5, 1, 0), 1.0);
    try {
        f.record_vote(view, vote(0, 5, 1, 0), 1.0);
        FAIL();
    } catch (const ffg::Error& e) {
        EXPECT_EQ(e.code(), ffg::ErrorCode::DuplicateVote);
    }
    EXPECT_THROW(f.record_vote(view, vote(1, 5, 1, 0), -1.0), ffg::Error);
}

TEST(Finality, EsfSnapshot)
{
    auto view = linear_chain(11);
    FinalityState f(view, 5);
    f.begin_epoch(1);
    EXPECT_EQ(f.epoch_esf(), 1u);
    f.begin_epoch(2);
    EXPECT_EQ(f.epoch_esf(), 2u);
    f.apply_vote(view, vote(0, 5, 1, 0), 1.0, 1.0, kThr);
    f.apply_vote(view, vote(0, 10, 2, 1), 1.0, 1.0, kThr);
    EXPECT_EQ(f.esf(), 1u);
    EXPECT_EQ(f.epoch_esf(), 2u); // snapshot is not retroactive
}

TEST(Finality, LastJustifiedBelowAndHighestOnChain)
{
    ffg::ChainView view = linear_chain(11);
    view.add_block({bid(100), bid(4)});
    for (std::uint64_t i = 101; i <= 106; ++i) view.add_block({bid(i), bid(i - 1)});
    // 100 is at height 5, 105 at height 10.
    FinalityState f(view, 5);
    f.apply_vote(view, vote(0, 5, 1, 0), 1.0, 1.0, kThr);
    f.apply_vote(view, vote(0, 105, 2, 0), 1.0, 1.0, kThr);
    EXPECT_EQ(*f.last_justified_below(view, bid(10), 2), bid(5));
    EXPECT_EQ(*f.last_justified_below(view, bid(106), 2), bid(0));
    EXPECT_EQ(*f.last_justified_below(view, bid(106), 3), bid(105));
    EXPECT_EQ(f.highest_justified_on_chain(view, bid(10), 0.0), bid(5));
    EXPECT_EQ(f.highest_justified_on_chain(view, bid(10), 2.0), bid(0));
    EXPECT_EQ(f.highest_justified_on_chain(view, bid(106), 0.0), bid(105));
}

TEST(Finality, ConflictingHelper)
{
    ffg::ChainView view = linear_chain(3);
    view.add_block({bid(10), bid(0)});
    EXPECT_TRUE(ffg::conflicting(view, bid(2), bid(10)));
    EXPECT_FALSE(ffg::conflicting(view, bid(0), bid(10)));
}

// Randomized vote streams on forked trees. Checks against a from-scratch
// fixpoint over the accepted votes, plus monotonicity and finalized ⊆ justified.
TEST(FinalityProperty, MatchesFixpointAndIsMonotone)
{
    std::mt19937_64 rng(2024);
    constexpr std::uint64_t l = 2;
    for (int c = 0; c < kCases; ++c) {
        auto t = random_tree(rng, 10 + rng() % 40, 0.6);
        FinalityState f(t.view, l);
        std::vector<double> w(2 + rng() % 4);
        for (auto& x : w) x = 1.0 + static_cast<double>(rng() % 5);
        double total = 0;
        for (double x : w) total += x;

        std::vector<BlockId> cps;
        for (BlockId b : t.view.blocks())
            if (t.view.height(b) >= l && t.view.height(b) % l == 0) cps.push_back(b);
        if (cps.empty()) continue;

        std::set<std::tuple<std::uint32_t, std::uint64_t, std::uint64_t>> cast;
        std::map<std::pair<BlockId, BlockId>, double> tallies;
        std::set<BlockId> prev_j{bid(0)}, prev_f{bid(0)};
        for (int step = 0; step < 60; ++step) {
            auto v = static_cast<std::uint32_t>(rng() % w.size());
            BlockId target = cps[rng() % cps.size()];
            std::uint64_t th = t.view.height(target) / l;
            std::uint64_t sh = rng() % th;
            auto js = f.justified_descending();
            if (rng() % 3 != 0) {
                // Prefer justified ancestors as sources.
                for (BlockId j : js)
                    if (t.view.height(j) / l < th && t.view.is_ancestor(j, target)) {
                        sh = t.view.height(j) / l;
                        break;
                    }
            }
            auto vt = ffg::make_vote(0, vid(v), target, th, sh);
            if (f.validate_vote(t.view, vt, th) != VoteCheck::Valid) continue;
            if (!cast.insert({v, ffg::raw(target), sh}).second) continue;
            f.apply_vote(t.view, vt, w[v], total, kThr);
            tallies[{*t.view.ancestor_at_height(target, sh * l), target}] += w[v];

            auto jv = f.justified();
            std::set<BlockId> j(jv.begin(), jv.end());
            auto fv = f.finalized();
            std::set<BlockId> fin(fv.begin(), fv.end());
            ASSERT_TRUE(std::includes(j.begin(), j.end(), prev_j.begin(), prev_j.end()));
            ASSERT_TRUE(std::includes(fin.begin(), fin.end(), prev_f.begin(), prev_f.end()));
            ASSERT_TRUE(std::includes(j.begin(), j.end(), fin.begin(), fin.end()));
            prev_j = j;
            prev_f = fin;
        }

        // Oracle: least fixpoint.
        std::set<BlockId> J{bid(0)};
        for (bool grew = true; grew;) {
            grew = false;
            for (const auto& [link, tally] : tallies)
                if (J.count(link.first) && !J.count(link.second) && tally >= kThr * total) {
                    J.insert(link.second);
                    grew = true;
                }
        }
        std::set<BlockId> F{bid(0)};
        for (BlockId s : J)
            for (BlockId child : J)
                if (t.view.height(child) == t.view.height(s) + l && t.view.is_ancestor(s, child)) F.insert(s);
        ASSERT_EQ(prev_j, J);
        ASSERT_EQ(prev_f, F);
    }
}
