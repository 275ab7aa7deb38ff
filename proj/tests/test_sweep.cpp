#include "ffg/sweep.hpp"

#include "ffg/analysis.hpp"

#include <gtest/gtest.h>

#include <sstream>

TEST(Sweep, OfflineRowsMatchPhi)
{
    ffg::SweepSpec spec;
    spec.alphas = {0.5, 0.1, 0.3};
    auto rows = ffg::run_sweep(spec);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_DOUBLE_EQ(rows[0].alpha, 0.1); // sorted
    for (const auto& r : rows) {
        EXPECT_EQ(r.epochs0, static_cast<std::int64_t>(ffg::phi(r.alpha)));
        EXPECT_EQ(r.reference, static_cast<double>(ffg::phi(r.alpha)));
    }
    std::ostringstream out;
    ffg::write_sweep_csv(out, spec, rows);
    EXPECT_NE(out.str().find("# ffgsim"), std::string::npos);
}

TEST(Sweep, PartitionWinnerAndDeterminism)
{
    ffg::SweepSpec spec;
    spec.kind = ffg::SweepKind::Partition;
    spec.alphas = {0.7};
    spec.seeds = {1, 2, 3};
    spec.max_epochs = 5000;
    auto a = ffg::run_sweep(spec);
    auto b = ffg::run_sweep(spec);
    ASSERT_EQ(a.size(), 3u);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].winner, 0);
        EXPECT_EQ(a[i].epochs0, b[i].epochs0);
        EXPECT_EQ(a[i].seconds1, b[i].seconds1);
    }
}

TEST(Sweep, CapIsReportedNotThrown)
{
    ffg::SweepSpec spec;
    spec.alphas = {0.6};
    spec.max_epochs = 50;
    auto rows = ffg::run_sweep(spec);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].epochs0, -1);
}
