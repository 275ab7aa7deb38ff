#pragma once

#include "ffg/chain.hpp"
#include "ffg/slashing.hpp"
#include "ffg/strategies.hpp"

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace ffg {

enum class ProposalModel { Deterministic, Stochastic };
enum class StopCondition { None, FirstFinalized, AllFinalized };

const char* to_string(ProposalModel m);
const char* to_string(StopCondition s);

struct ValidatorSpec {
    std::string name;
    double deposit = 0.0;
    Strategy strategy = Honest{};
    std::uint32_t branch = 0; // home branch while partitioned
};

struct PartitionSpec {
    std::uint64_t start_epoch = 1;
    std::optional<std::uint64_t> end_epoch; // nullopt: never heals
    std::vector<double> mining;             // block-production share per branch
};

struct ScenarioConfig {
    ProtocolParams params;
    SlashParams slashing;
    std::vector<ValidatorSpec> validators;
    ProposalModel proposal_model = ProposalModel::Deterministic;
    std::optional<PartitionSpec> partition;
    std::uint64_t seed = 0;
    std::uint64_t max_epochs = 100;
    StopCondition stop = StopCondition::None;
    std::optional<std::uint64_t> fault_epoch;
    double block_interval_s = 14.0;
    // Deposit quantum the worst-case group stays below the threshold by.
    double worst_case_quantum = 1.0;

    std::size_t branch_count() const { return partition ? partition->mining.size() : 1; }

    // Explicit fault_epoch, else the partition start, else the earliest
    // Offline / WorstCase from-epoch, else 0.
    std::uint64_t fault_start() const;

    // Throws Error(ConfigError) naming the offending field.
    void validate() const;
};

// Parses the key = value scenario format (docs/scenario-format.md).
// Errors carry "<origin>:<line>: " prefixes.
ScenarioConfig parse_scenario(std::istream& in, const std::string& origin = "<scenario>");
ScenarioConfig parse_scenario_text(const std::string& text, const std::string& origin = "<scenario>");
ScenarioConfig load_scenario(const std::string& path);

// Canonical text form; parse_scenario_text(format_scenario(c)) reproduces c.
std::string format_scenario(const ScenarioConfig& config);

// Two validators, (1 - offline_share) * d0 honest and offline_share * d0
// going offline at from_epoch.
ScenarioConfig offline_scenario(double offline_share, double d0, std::uint64_t from_epoch,
                                std::uint64_t max_epochs, const ProtocolParams& params = {});

// One honest validator with alpha0 * d0 and `pool` equal worst-case
// validators sharing the rest.
ScenarioConfig worst_case_scenario(double alpha0, double d0, std::size_t pool, std::uint64_t from_epoch,
                                   std::uint64_t max_epochs, const ProtocolParams& params = {});

// Two branches from `start_epoch`: stake share alpha and mining share mu on
// branch 0, the complements on branch 1.
ScenarioConfig partition_scenario(double alpha, double mu, double d0, std::uint64_t start_epoch,
                                  std::uint64_t max_epochs, std::uint64_t seed,
                                  ProposalModel model = ProposalModel::Stochastic,
                                  const ProtocolParams& params = {});

} // namespace ffg
