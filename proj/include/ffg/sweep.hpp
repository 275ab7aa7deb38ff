#pragma once

#include "ffg/scenario.hpp"

#include <cstdint>
#include <ostream>
#include <vector>

namespace ffg {

enum class SweepKind { Offline, WorstCase, Partition };

const char* to_string(SweepKind k);

struct SweepSpec {
    SweepKind kind = SweepKind::Offline;
    // Offline: share that stops voting. WorstCase: honest share.
    // Partition: stake share on branch 0.
    std::vector<double> alphas;
    std::vector<std::uint64_t> seeds{1};
    std::vector<double> mus; // Partition only: mining share of branch 0; empty means mu = alpha
    double d0 = 1e7;
    std::uint64_t fault_epoch = 2;
    std::uint64_t max_epochs = 20000;
    std::size_t worst_case_pool = 50;
    ProposalModel model = ProposalModel::Stochastic; // Partition only
    ProtocolParams params;
};

struct SweepRow {
    double alpha = 0.0;
    double mu = 1.0;
    std::uint64_t seed = 0;
    // First finalization after the fault per branch (branch 1 only for
    // partitions); -1 when it never happened.
    std::int64_t epochs0 = -1;
    double seconds0 = 0.0;
    std::int64_t epochs1 = -1;
    double seconds1 = 0.0;
    int winner = -1; // partition: branch that finalized first in time
    // Offline: phi. WorstCase: worst_case_T. Partition: I_mu(n0, n1) with
    // n the phi value of each branch in epochs.
    double reference = 0.0;
};

// Runs every (alpha, mu, seed) combination, in parallel, and returns rows
// sorted by (alpha, mu, seed) so the output does not depend on scheduling.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

void write_sweep_csv(std::ostream& out, const SweepSpec& spec, const std::vector<SweepRow>& rows);

} // namespace ffg
