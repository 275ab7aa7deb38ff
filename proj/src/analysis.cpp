#include "ffg/analysis.hpp"

#include "ffg/rewards.hpp"
#include "ffg/rng.hpp"
#include "ffg/strategies.hpp"

#include <cmath>
#include <limits>

namespace ffg {

namespace {

std::vector<ValidatorState> two_groups(double voting, double silent)
{
    return {ValidatorState{ValidatorId{0}, voting}, ValidatorState{ValidatorId{1}, silent}};
}

[[noreturn]] void iteration_limit(const char* what)
{
    throw Error(ErrorCode::IterationLimit,
                std::string(what) + ": no recovery within " + std::to_string(kIterationCap) + " epochs");
}

} // namespace

std::uint64_t phi(double offline_share, const ProtocolParams& params, double d0)
{
    if (!(offline_share >= 0.0 && offline_share < 1.0))
        throw Error(ErrorCode::DomainError, "phi: offline share must lie in [0, 1)");
    if (!(d0 > 0.0)) throw Error(ErrorCode::DomainError, "phi: initial deposit must be > 0");
    params.validate();

    auto vs = two_groups((1.0 - offline_share) * d0, offline_share * d0);
    for (std::uint64_t j = 0; j < kIterationCap; ++j) {
        if (meets_threshold(vs[0].deposit, total_deposit(vs, j), params.finality_threshold))
            return j == 0 ? 0 : j + 1;
        vs[0].voted = true;
        epoch_transition(vs, j, j + 2, params);
    }
    iteration_limit("phi");
}

std::vector<PhiPoint> phi_curve(const std::vector<double>& offline_shares, const ProtocolParams& params, double d0)
{
    std::vector<PhiPoint> out(offline_shares.size());
    const auto n = static_cast<std::ptrdiff_t>(offline_shares.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        auto k = static_cast<std::size_t>(i);
        out[k] = PhiPoint{offline_shares[k], phi(offline_shares[k], params, d0)};
    }
    return out;
}

std::uint64_t worst_case_T(double alpha0, const ProtocolParams& params, double d0)
{
    if (!(alpha0 > 0.0 && alpha0 <= 1.0)) throw Error(ErrorCode::DomainError, "worst_case_T: alpha0 must lie in (0, 1]");
    if (!(d0 > 0.0)) throw Error(ErrorCode::DomainError, "worst_case_T: initial deposit must be > 0");
    params.validate();

    double honest = alpha0 * d0;
    double adversary = (1.0 - alpha0) * d0;
    for (std::uint64_t j = 0; j < kIterationCap; ++j) {
        double total = honest + adversary;
        if (meets_threshold(honest, total, params.finality_threshold)) return j == 0 ? 0 : j + 1;
        double alpha = honest / total;
        double delta = worst_case_delta(alpha);
        double m = alpha + delta * (1.0 - alpha);
        std::uint64_t esf = j + 2;
        double rho = individual_reward_factor(total, esf, params);
        double c = collective_reward_factor(m, rho, esf);
        honest = update_deposit(honest, true, rho, c);
        adversary = update_deposit(delta * adversary, true, rho, c) +
                    update_deposit((1.0 - delta) * adversary, false, rho, c);
    }
    iteration_limit("worst_case_T");
}

namespace {

double log_sum_exp(const std::vector<double>& v, std::size_t begin, std::size_t end)
{
    if (begin >= end) return -std::numeric_limits<double>::infinity();
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = begin; i < end; ++i) m = std::max(m, v[i]);
    double s = 0.0;
    for (std::size_t i = begin; i < end; ++i) s += std::exp(v[i] - m);
    return m + std::log(s);
}

} // namespace

RaceResult race_probability(std::uint64_t n1, std::uint64_t n2, double mu)
{
    if (n1 == 0 || n2 == 0) throw Error(ErrorCode::DomainError, "race_probability: n1 and n2 must be >= 1");
    if (!(mu > 0.0 && mu < 1.0)) throw Error(ErrorCode::DomainError, "race_probability: mu must lie in (0, 1)");

    // I_mu(n1, n2) = P(Binomial(n1 + n2 - 1, mu) >= n1). Terms are built by
    // the ratio recurrence relative to the mode, so only their ratios matter.
    const std::uint64_t n = n1 + n2 - 1;
    const double odds = std::log(mu) - std::log1p(-mu);
    std::uint64_t mode = static_cast<std::uint64_t>(std::floor(static_cast<double>(n + 1) * mu));
    if (mode > n) mode = n;

    std::vector<double> lt(n + 1);
    lt[mode] = 0.0;
    for (std::uint64_t k = mode; k < n; ++k)
        lt[k + 1] = lt[k] + std::log(static_cast<double>(n - k) / static_cast<double>(k + 1)) + odds;
    for (std::uint64_t k = mode; k > 0; --k)
        lt[k - 1] = lt[k] - std::log(static_cast<double>(n - k + 1) / static_cast<double>(k)) - odds;

    double upper = log_sum_exp(lt, n1, n + 1);
    double lower = log_sum_exp(lt, 0, n1);
    // log P = upper - log(exp(upper) + exp(lower)).
    double log_p = upper >= lower ? -std::log1p(std::exp(lower - upper))
                                  : (upper - lower) - std::log1p(std::exp(upper - lower));

    RaceResult r;
    r.log10_probability = log_p / std::log(10.0);
    r.probability = std::exp(log_p);
    r.underflow = r.probability == 0.0 || r.probability < std::numeric_limits<double>::min();
    return r;
}

namespace {

constexpr std::uint64_t kChunk = 4096;

std::uint64_t race_chunk(std::uint64_t n1, std::uint64_t n2, double mu, std::uint64_t count, std::uint64_t seed,
                         std::uint64_t chunk)
{
    Rng rng(seed, chunk);
    std::uint64_t hits = 0;
    for (std::uint64_t s = 0; s < count; ++s) {
        double x = 0.0;
        double y = 0.0;
        for (std::uint64_t i = 0; i < n1; ++i) x += rng.exponential(mu);
        for (std::uint64_t i = 0; i < n2; ++i) y += rng.exponential(1.0 - mu);
        if (x < y) ++hits;
    }
    return hits;
}

MonteCarloResult finish(std::uint64_t hits, std::uint64_t samples)
{
    MonteCarloResult r;
    r.samples = samples;
    r.hits = hits;
    if (samples == 0) return r;
    r.estimate = static_cast<double>(hits) / static_cast<double>(samples);
    r.std_error = std::sqrt(r.estimate * (1.0 - r.estimate) / static_cast<double>(samples));
    return r;
}

void check_race(std::uint64_t n1, std::uint64_t n2, double mu)
{
    if (n1 == 0 || n2 == 0) throw Error(ErrorCode::DomainError, "race_monte_carlo: n1 and n2 must be >= 1");
    if (!(mu > 0.0 && mu < 1.0)) throw Error(ErrorCode::DomainError, "race_monte_carlo: mu must lie in (0, 1)");
}

} // namespace

MonteCarloResult race_monte_carlo(std::uint64_t n1, std::uint64_t n2, double mu, std::uint64_t samples,
                                  std::uint64_t seed)
{
    check_race(n1, n2, mu);
    const auto chunks = static_cast<std::int64_t>((samples + kChunk - 1) / kChunk);
    std::uint64_t hits = 0;
#pragma omp parallel for schedule(dynamic) reduction(+ : hits)
    for (std::int64_t c = 0; c < chunks; ++c) {
        auto chunk = static_cast<std::uint64_t>(c);
        std::uint64_t count = std::min(kChunk, samples - chunk * kChunk);
        hits += race_chunk(n1, n2, mu, count, seed, chunk);
    }
    return finish(hits, samples);
}

MonteCarloResult race_monte_carlo_serial(std::uint64_t n1, std::uint64_t n2, double mu, std::uint64_t samples,
                                         std::uint64_t seed)
{
    check_race(n1, n2, mu);
    std::uint64_t hits = 0;
    for (std::uint64_t chunk = 0; chunk * kChunk < samples; ++chunk)
        hits += race_chunk(n1, n2, mu, std::min(kChunk, samples - chunk * kChunk), seed, chunk);
    return finish(hits, samples);
}

double mu_breakeven(std::uint64_t n1, std::uint64_t n2)
{
    if (n1 == 0 || n2 == 0) throw Error(ErrorCode::DomainError, "mu_breakeven: n1 and n2 must be >= 1");
    return static_cast<double>(n1) / static_cast<double>(n1 + n2);
}

const char* to_string(Justification j)
{
    switch (j) {
    case Justification::Always: return "always";
    case Justification::Never: return "never";
    case Justification::SwingVoter: return "swing_voter";
    }
    return "unknown";
}

std::vector<IncentiveRow> incentive_tables(double alpha, double mu, double rho)
{
    if (!(alpha > 0.0 && alpha < 2.0 / 3.0))
        throw Error(ErrorCode::DomainError, "incentive_tables: alpha must lie in (0, 2/3)");
    if (!(mu >= alpha && mu <= 1.0)) throw Error(ErrorCode::DomainError, "incentive_tables: mu must lie in [alpha, 1]");
    if (!(rho >= 0.0) || !std::isfinite(rho)) throw Error(ErrorCode::DomainError, "incentive_tables: rho must be >= 0");

    const double keep = rho / (1.0 + rho);
    auto others = [&](IncentiveRow& r) {
        r.gf_voters = (mu - alpha) / alpha * r.plr_voters;
        r.gf_nonvoters = (1.0 - mu) / alpha * r.plr_nonvoters;
        double weighted = (mu - alpha) * r.plr_voters + (1.0 - mu) * r.plr_nonvoters;
        r.plr_others = weighted / (1.0 - alpha);
        r.gf_others = weighted / alpha;
    };

    IncentiveRow always;
    always.scenario = Justification::Always;
    const double da = 1.0 + 0.5 * (mu * rho + alpha);
    always.loss_nu = keep * da;
    always.loss_voters = 0.5 * alpha * rho;
    always.loss_nonvoters = keep * 0.5 * alpha;
    always.plr_voters = 0.5 * alpha * (1.0 + rho) / da;
    always.plr_nonvoters = 0.5 * alpha / da;
    others(always);

    IncentiveRow never;
    never.scenario = Justification::Never;
    never.loss_nu = keep;

    // Abstaining costs the swing voter the whole collective reward as well:
    // (1 + mu rho / 2) d against d / (1 + rho).
    IncentiveRow swing;
    swing.scenario = Justification::SwingVoter;
    const double ds = 1.0 + 0.5 * mu * (1.0 + rho);
    swing.loss_nu = keep * ds;
    swing.loss_voters = 0.5 * mu * rho;
    swing.loss_nonvoters = keep * 0.5 * mu;
    swing.plr_voters = 0.5 * mu * (1.0 + rho) / ds;
    swing.plr_nonvoters = 0.5 * mu / ds;
    others(swing);

    return {always, never, swing};
}

GasOverhead gas_overhead(double n_validators, double vote_gas, double init_gas, double block_gas_limit,
                         std::uint64_t epoch_length, std::uint64_t vote_window_blocks)
{
    if (vote_window_blocks == 0 || vote_window_blocks >= epoch_length)
        throw Error(ErrorCode::DomainError, "gas_overhead: vote window must lie in (0, epoch_length)");
    if (!(block_gas_limit > 0.0)) throw Error(ErrorCode::DomainError, "gas_overhead: block gas limit must be > 0");
    if (!(n_validators >= 0.0 && vote_gas >= 0.0 && init_gas >= 0.0))
        throw Error(ErrorCode::DomainError, "gas_overhead: counts and gas costs must be >= 0");
    GasOverhead g;
    g.init_fraction = init_gas / (static_cast<double>(epoch_length - vote_window_blocks) * block_gas_limit);
    g.vote_fraction = n_validators * vote_gas / (static_cast<double>(vote_window_blocks) * block_gas_limit);
    return g;
}

double annual_interest(double d, const ProtocolParams& params, std::uint64_t epochs)
{
    double rho = individual_reward_factor(d, 2, params);
    return std::pow(1.0 + 0.5 * rho, static_cast<double>(epochs)) - 1.0;
}

std::uint64_t offline_halving_epochs(double offline_share, const ProtocolParams& params, double d0)
{
    if (!(offline_share > 0.0 && offline_share < 1.0))
        throw Error(ErrorCode::DomainError, "offline_halving_epochs: offline share must lie in (0, 1)");
    auto vs = two_groups((1.0 - offline_share) * d0, offline_share * d0);
    const double half = 0.5 * vs[1].deposit;
    for (std::uint64_t j = 0; j < kIterationCap; ++j) {
        if (vs[1].deposit <= half) return j;
        vs[0].voted = true;
        epoch_transition(vs, j, j + 2, params);
    }
    iteration_limit("offline_halving_epochs");
}

} // namespace ffg
