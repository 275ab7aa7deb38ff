#include "ffg/rewards.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ffg {

bool is_active(const ValidatorState& v, std::uint64_t epoch)
{
    if (v.slashed || epoch < v.activation_epoch) return false;
    return !v.logout_epoch || epoch < *v.logout_epoch;
}

double individual_reward_factor(double total_deposit, std::uint64_t esf, const ProtocolParams& params)
{
    if (!(total_deposit > 0.0)) return 0.0;
    double rho = params.gamma * std::pow(total_deposit, -params.p) +
                 params.beta * (static_cast<double>(esf) - 2.0);
    return std::max(0.0, rho);
}

double collective_reward_factor(double voted_fraction, double rho, std::uint64_t esf)
{
    return esf == 2 ? 0.5 * voted_fraction * rho : 0.0;
}

double update_deposit(double deposit, bool voted, double rho, double collective)
{
    double out = (1.0 + collective) * ((1.0 + (voted ? rho : 0.0)) / (1.0 + rho)) * deposit;
    if (out < 0.0) throw Error(ErrorCode::NegativeDeposit, "deposit update produced " + std::to_string(out));
    return out;
}

double total_deposit(const std::vector<ValidatorState>& validators, std::uint64_t epoch)
{
    double sum = 0.0;
    for (const auto& v : validators)
        if (is_active(v, epoch)) sum += v.deposit;
    return sum;
}

double voted_fraction(const std::vector<ValidatorState>& validators, std::uint64_t epoch)
{
    double total = 0.0;
    double voted = 0.0;
    for (const auto& v : validators) {
        if (!is_active(v, epoch)) continue;
        total += v.deposit;
        if (v.voted) voted += v.deposit;
    }
    return total > 0.0 ? voted / total : 0.0;
}

EpochAccounting compute_accounting(const std::vector<ValidatorState>& validators, std::uint64_t epoch,
                                   std::uint64_t esf, const ProtocolParams& params)
{
    EpochAccounting acc;
    acc.epoch = epoch;
    acc.esf = esf;
    acc.total_deposit = total_deposit(validators, epoch);
    acc.voted_fraction = voted_fraction(validators, epoch);
    acc.rho = individual_reward_factor(acc.total_deposit, esf, params);
    acc.collective = collective_reward_factor(acc.voted_fraction, acc.rho, esf);
    acc.next_total_deposit = acc.total_deposit;
    return acc;
}

namespace {

void finish_transition(std::vector<ValidatorState>& validators, EpochAccounting& acc)
{
    for (auto& v : validators) {
        v.voted = false;
        if (acc.esf > 2 && v.activation_epoch == acc.epoch + 1) v.activation_epoch = acc.epoch + 2;
    }
    acc.next_total_deposit = total_deposit(validators, acc.epoch + 1);
}

} // namespace

EpochAccounting epoch_transition(std::vector<ValidatorState>& validators, std::uint64_t epoch,
                                 std::uint64_t esf, const ProtocolParams& params)
{
    EpochAccounting acc = compute_accounting(validators, epoch, esf, params);
    const auto n = static_cast<std::ptrdiff_t>(validators.size());
    bool negative = false;
#pragma omp parallel for schedule(static) reduction(|| : negative) if (n > 4096)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        auto& v = validators[static_cast<std::size_t>(i)];
        if (!is_active(v, epoch)) continue;
        double d = (1.0 + acc.collective) * ((1.0 + (v.voted ? acc.rho : 0.0)) / (1.0 + acc.rho)) * v.deposit;
        negative = negative || d < 0.0;
        v.deposit = d;
    }
    if (negative) throw Error(ErrorCode::NegativeDeposit, "deposit update produced a negative deposit");
    finish_transition(validators, acc);
    return acc;
}

EpochAccounting epoch_transition_serial(std::vector<ValidatorState>& validators, std::uint64_t epoch,
                                        std::uint64_t esf, const ProtocolParams& params)
{
    EpochAccounting acc = compute_accounting(validators, epoch, esf, params);
    for (auto& v : validators)
        if (is_active(v, epoch)) v.deposit = update_deposit(v.deposit, v.voted, acc.rho, acc.collective);
    finish_transition(validators, acc);
    return acc;
}

} // namespace ffg
