#pragma once

#include "ffg/chain.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace ffg {

// Epochs between logout and withdrawal.
inline constexpr std::uint64_t kWithdrawalDelayEpochs = 15000;

struct ValidatorState {
    ValidatorId id{};
    double deposit = 0.0;
    bool voted = false;
    bool slashed = false;
    std::uint64_t activation_epoch = 0;
    std::optional<std::uint64_t> logout_epoch;
    std::optional<std::uint64_t> withdraw_epoch;
};

// True if the validator's deposit counts towards D_i in `epoch`.
bool is_active(const ValidatorState& v, std::uint64_t epoch);

struct EpochAccounting {
    std::uint64_t epoch = 0;
    double total_deposit = 0.0;  // D_i
    double voted_fraction = 0.0; // m_i
    std::uint64_t esf = 0;
    double rho = 0.0;
    double collective = 0.0;
    double next_total_deposit = 0.0; // D_{i+1}
};

// rho = max(0, gamma * D^-p + beta * (esf - 2)) for D > 0, else 0.
double individual_reward_factor(double total_deposit, std::uint64_t esf, const ProtocolParams& params);

// C = m * rho / 2 when esf == 2, else 0.
double collective_reward_factor(double voted_fraction, double rho, std::uint64_t esf);

// (1 + C) * ((1 + voted * rho) / (1 + rho)) * d. A voter with C == 0 keeps d
// bit for bit because the middle factor is exactly 1.
double update_deposit(double deposit, bool voted, double rho, double collective);

// Sum of active deposits in vector order.
double total_deposit(const std::vector<ValidatorState>& validators, std::uint64_t epoch);

// Deposit-weighted fraction of active validators with the voted flag set.
double voted_fraction(const std::vector<ValidatorState>& validators, std::uint64_t epoch);

// Accounting for epoch i without touching any deposit.
EpochAccounting compute_accounting(const std::vector<ValidatorState>& validators, std::uint64_t epoch,
                                   std::uint64_t esf, const ProtocolParams& params);

// Closes epoch i: applies the deposit update to every active validator,
// clears the voted flags and recomputes D_{i+1} as a fresh sum. Validators
// scheduled to activate in epoch i+1 are postponed by one epoch while
// esf > 2. The per-validator update runs in parallel; sums are serial so the
// result does not depend on the thread count.
EpochAccounting epoch_transition(std::vector<ValidatorState>& validators, std::uint64_t epoch,
                                 std::uint64_t esf, const ProtocolParams& params);

// Single-threaded reference for epoch_transition.
EpochAccounting epoch_transition_serial(std::vector<ValidatorState>& validators, std::uint64_t epoch,
                                        std::uint64_t esf, const ProtocolParams& params);

} // namespace ffg
