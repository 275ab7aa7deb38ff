#pragma once

#include "ffg/chain.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ffg {

inline constexpr double kDefaultInitialDeposit = 1e7;
inline constexpr std::uint64_t kEpochsPerYear = 45051; // 365 * 86400 / 700, floored
inline constexpr std::uint64_t kIterationCap = 1'000'000;

// Epochs after a fault until a checkpoint is finalized again, when a group
// holding `offline_share` of the deposit stops voting for good and the rest
// keeps voting. Counts to the epoch whose vote finalizes, so 0 means the
// voting rest alone still meets the threshold. Uses the same deposit update
// and threshold test as the simulator. Throws DomainError unless
// offline_share lies in [0, 1), IterationLimit past kIterationCap epochs.
std::uint64_t phi(double offline_share, const ProtocolParams& params = {}, double d0 = kDefaultInitialDeposit);

struct PhiPoint {
    double offline_share = 0.0;
    std::uint64_t epochs = 0;
};

std::vector<PhiPoint> phi_curve(const std::vector<double>& offline_shares, const ProtocolParams& params = {},
                                double d0 = kDefaultInitialDeposit);

// Same count under the worst-case adversary: honest share alpha0 keeps
// voting and the rest votes with share worst_case_delta(alpha_i) each epoch,
// idealised as a continuous fraction. Throws DomainError unless alpha0 lies
// in (0, 1], IterationLimit past kIterationCap epochs.
std::uint64_t worst_case_T(double alpha0, const ProtocolParams& params = {}, double d0 = kDefaultInitialDeposit);

struct RaceResult {
    double probability = 0.0;
    double log10_probability = 0.0; // finite even when probability underflows
    bool underflow = false;
};

// P(chain 1 mines n1 blocks before chain 2 mines n2) with mining shares mu
// and 1 - mu: the regularized incomplete beta I_mu(n1, n2). Exact binomial
// sum accumulated in log space. Throws DomainError for n1 or n2 == 0 or
// mu outside (0, 1).
RaceResult race_probability(std::uint64_t n1, std::uint64_t n2, double mu);

struct MonteCarloResult {
    double estimate = 0.0;
    double std_error = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t hits = 0;
};

// Samples Erlang(n1, mu) < Erlang(n2, 1 - mu). Samples are drawn in chunks
// of 4096 with one RNG stream per chunk, so the OpenMP and serial versions
// return identical results.
MonteCarloResult race_monte_carlo(std::uint64_t n1, std::uint64_t n2, double mu, std::uint64_t samples,
                                  std::uint64_t seed);
MonteCarloResult race_monte_carlo_serial(std::uint64_t n1, std::uint64_t n2, double mu, std::uint64_t samples,
                                         std::uint64_t seed);

// mu with mu / (1 - mu) = n1 / n2.
double mu_breakeven(std::uint64_t n1, std::uint64_t n2);

enum class Justification { Always, Never, SwingVoter };

const char* to_string(Justification j);

// Relative single-epoch losses when a validator with share alpha abstains,
// with mu the voting share including it. PLR = ratio of relative losses,
// GF = ratio of absolute losses. The *_others columns aggregate voters and
// non-voters.
struct IncentiveRow {
    Justification scenario = Justification::Always;
    double loss_nu = 0.0;
    double loss_voters = 0.0;
    double loss_nonvoters = 0.0;
    double plr_voters = 0.0;
    double plr_nonvoters = 0.0;
    double gf_voters = 0.0;
    double gf_nonvoters = 0.0;
    double plr_others = 0.0;
    double gf_others = 0.0;
};

// Throws DomainError unless 0 < alpha < 2/3, alpha <= mu <= 1, rho >= 0.
std::vector<IncentiveRow> incentive_tables(double alpha, double mu, double rho);

struct GasOverhead {
    double init_fraction = 0.0;
    double vote_fraction = 0.0;
};

// init_gas / ((l - vote_window) * limit) and n * vote_gas / (vote_window * limit).
// Throws DomainError for a vote window outside (0, l) or a non-positive limit.
GasOverhead gas_overhead(double n_validators, double vote_gas, double init_gas, double block_gas_limit,
                         std::uint64_t epoch_length, std::uint64_t vote_window_blocks);

// (1 + rho / 2)^epochs - 1 for a full-participation run at deposit d.
double annual_interest(double d, const ProtocolParams& params = {}, std::uint64_t epochs = kEpochsPerYear);

// Epochs until the offline group's deposit has halved, when offline_share
// stops voting and finalization stays paused.
std::uint64_t offline_halving_epochs(double offline_share, const ProtocolParams& params = {},
                                     double d0 = kDefaultInitialDeposit);

} // namespace ffg
