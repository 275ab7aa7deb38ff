#pragma once

#include "ffg/scenario.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ffg {

// One row per (branch, epoch), written when the epoch's last block lands.
struct TraceRow {
    std::uint32_t branch = 0;
    std::uint64_t epoch = 0;
    double time_s = 0.0;
    double total_deposit = 0.0;
    std::uint64_t esf = 0;
    double voted_fraction = 0.0;
    double rho = 0.0;
    double collective = 0.0;
    bool justified = false;      // this epoch's checkpoint on the head chain
    std::uint32_t finalized = 0; // checkpoints newly finalized during the epoch
    std::uint64_t last_finalized = 0;
    double honest_share = 0.0;   // stake share voting unconditionally
    double adversary_delta = 0.0; // share of worst-case stake that voted
};

enum class EventKind { PartitionStart, PartitionHeal, Finalized, Slashed, InvalidVote };

const char* to_string(EventKind k);

struct TraceEvent {
    double time_s = 0.0;
    std::uint32_t branch = 0;
    std::uint64_t epoch = 0;
    EventKind kind = EventKind::Finalized;
    std::uint64_t checkpoint_epoch = 0; // Finalized: epoch of the checkpoint
    std::string detail;
};

struct SimTrace {
    ScenarioConfig config;
    std::vector<TraceRow> rows;     // sorted by (branch, epoch)
    std::vector<TraceEvent> events; // in simulation order
    std::uint64_t fault_epoch = 0;
    double fault_time_s = 0.0;
    std::optional<std::uint32_t> canonical; // set when a partition healed
    std::size_t blocks = 0;
};

// Deterministic given the config (including its seed).
SimTrace run(const ScenarioConfig& config);

struct FinalizationTime {
    std::uint64_t epoch = 0;  // absolute epoch of the branch
    std::uint64_t epochs = 0; // epochs since the fault
    double seconds = 0.0;     // wall-clock seconds since the fault
};

// First finalization on `branch` in an epoch at or after the fault epoch.
// Throws Error(NeverFinalized).
FinalizationTime first_finalization_time(const SimTrace& trace, std::uint32_t branch);

} // namespace ffg
