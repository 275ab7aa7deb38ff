#include "ffg/scenario.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

namespace {

std::string config_error(const std::string& text)
{
    try {
        ffg::parse_scenario_text(text, "t.cfg");
    } catch (const ffg::Error& e) {
        EXPECT_EQ(e.code(), ffg::ErrorCode::ConfigError);
        return e.what();
    }
    ADD_FAILURE() << "accepted: " << text;
    return {};
}

} // namespace

TEST(Scenario, ParsesEveryKey)
{
    auto cfg = ffg::parse_scenario_text(R"(
# comment
seed = 7
max_epochs = 300   # trailing comment
stop = all_finalized
proposal_model = stochastic
fault_epoch = 3
block_interval_s = 13.5
worst_case_quantum = 2
params.epoch_length = 10
params.gamma = 0.01
params.beta = 1e-7
params.p = 0.4
params.finality_threshold = 0.7
params.min_fork_choice_deposit = 0
slashing.window_epochs = 100
slashing.fee_fraction = 0.05
slashing.severity_multiplier = 2
partition.start_epoch = 4
partition.end_epoch = 40
partition.mining = 0.6, 0.4
validator.a = deposit=100 strategy=partition_honest branch=0
validator.b = deposit=50 strategy=equivocator branches=0,1
validator.w = deposit=10 strategy=worst_case from=2 count=3
validator.o = deposit=10 strategy=offline from=5 branch=1
)");
    EXPECT_EQ(cfg.seed, 7u);
    EXPECT_EQ(cfg.max_epochs, 300u);
    EXPECT_EQ(cfg.stop, ffg::StopCondition::AllFinalized);
    EXPECT_EQ(cfg.proposal_model, ffg::ProposalModel::Stochastic);
    EXPECT_EQ(cfg.fault_start(), 3u);
    EXPECT_EQ(cfg.params.epoch_length, 10u);
    EXPECT_DOUBLE_EQ(cfg.params.finality_threshold, 0.7);
    EXPECT_EQ(cfg.slashing.window_epochs, 100u);
    ASSERT_TRUE(cfg.partition);
    EXPECT_EQ(*cfg.partition->end_epoch, 40u);
    EXPECT_EQ(cfg.branch_count(), 2u);
    ASSERT_EQ(cfg.validators.size(), 6u);
    EXPECT_EQ(cfg.validators[2].name, "w0");
    EXPECT_EQ(cfg.validators[4].name, "w2");
    EXPECT_EQ(std::get<ffg::Equivocator>(cfg.validators[1].strategy).branches, (std::vector<std::uint32_t>{0, 1}));
    EXPECT_EQ(cfg.validators[5].branch, 1u);
}

TEST(Scenario, FormatRoundTrips)
{
    auto cfg = ffg::partition_scenario(0.6, 0.55, 1e7, 3, 500, 11);
    auto again = ffg::parse_scenario_text(ffg::format_scenario(cfg));
    EXPECT_EQ(ffg::format_scenario(again), ffg::format_scenario(cfg));
    auto wc = ffg::worst_case_scenario(0.5, 1e7, 20, 2, 100);
    EXPECT_EQ(ffg::format_scenario(ffg::parse_scenario_text(ffg::format_scenario(wc))), ffg::format_scenario(wc));
}

TEST(Scenario, ErrorsNameTheLine)
{
    EXPECT_NE(config_error("seed = 1\nbogus = 2\nvalidator.a = deposit=1\n").find("t.cfg:2:"), std::string::npos);
    EXPECT_NE(config_error("validator.a = deposit=-1\n").find("deposit"), std::string::npos);
    EXPECT_NE(config_error("validator.a = deposit=1 strategy=sleepy\n").find("sleepy"), std::string::npos);
    EXPECT_NE(config_error("validator.a = deposit=1 from=2\n").find("from"), std::string::npos);
    EXPECT_NE(config_error("seed = x\nvalidator.a = deposit=1\n").find("t.cfg:1:"), std::string::npos);
    EXPECT_NE(config_error("seed = 1\nseed = 2\n").find("duplicate"), std::string::npos);
    EXPECT_NE(config_error("seed\n").find("key = value"), std::string::npos);
    config_error("seed = 1\n"); // no validators
    config_error("validator.a = deposit=1\npartition.mining = 0.5,0.6\n");
    config_error("validator.a = deposit=1\npartition.start_epoch = 3\n");
    config_error("validator.a = deposit=1\nparams.epoch_length = 1\n");
    config_error("validator.a = deposit=1\nparams.finality_threshold = 0.4\n");
    config_error("validator.a = deposit=1 strategy=partition_honest branch=3\npartition.mining = 0.5,0.5\n");
}

TEST(Scenario, LoadFromFile)
{
    auto cfg = ffg::load_scenario(std::string(FFG_SCENARIO_DIR) + "/offline67.cfg");
    EXPECT_EQ(cfg.validators.size(), 2u);
    EXPECT_EQ(cfg.fault_start(), 2u);
    EXPECT_THROW(ffg::load_scenario("/nonexistent/x.cfg"), ffg::Error);
}

TEST(Scenario, Builders)
{
    auto off = ffg::offline_scenario(0.4, 1e7, 2, 50);
    EXPECT_EQ(off.fault_start(), 2u);
    EXPECT_EQ(off.stop, ffg::StopCondition::FirstFinalized);
    auto wc = ffg::worst_case_scenario(0.5, 1e7, 10, 2, 50);
    EXPECT_EQ(wc.validators.size(), 11u);
    auto part = ffg::partition_scenario(0.6, 0.7, 1e7, 2, 50, 3);
    EXPECT_EQ(part.branch_count(), 2u);
    EXPECT_DOUBLE_EQ(part.partition->mining[0], 0.7);
}

TEST(Scenario, ShippedScenariosLoad)
{
    std::size_t n = 0;
    for (const auto& entry : std::filesystem::directory_iterator(FFG_SCENARIO_DIR)) {
        if (entry.path().extension() != ".cfg") continue;
        auto cfg = ffg::load_scenario(entry.path().string());
        EXPECT_FALSE(cfg.validators.empty()) << entry.path();
        ++n;
    }
    EXPECT_GE(n, 5u);
}
