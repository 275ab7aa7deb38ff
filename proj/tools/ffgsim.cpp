// ffgsim: command-line front end for the simulator and the analysis suite.

#include "ffg/analysis.hpp"
#include "ffg/scenario.hpp"
#include "ffg/sim.hpp"
#include "ffg/sweep.hpp"
#include "ffg/trace_csv.hpp"
#include "ffg/version.hpp"
#include "ffg/rng.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

namespace {

constexpr const char* kOutDirEnv = "FFGSIM_OUT_DIR";

enum Exit { kOk = 0, kUsage = 1, kConfig = 2 };

// Relative --out paths land in $FFGSIM_OUT_DIR when it is set.
std::filesystem::path resolve_out(const std::string& out)
{
    std::filesystem::path p(out);
    if (p.is_absolute()) return p;
    if (const char* dir = std::getenv(kOutDirEnv); dir && *dir) return std::filesystem::path(dir) / p;
    return p;
}

// Writes through `emit` to --out or stdout.
template <class F> void with_output(const std::string& out, F&& emit)
{
    if (out.empty()) {
        emit(std::cout);
        return;
    }
    auto path = resolve_out(out);
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream file(path, std::ios::binary);
    if (!file) throw ffg::Error(ffg::ErrorCode::ConfigError, "cannot write " + path.string());
    emit(file);
}

// "a,b,c" or "start:stop:step".
std::vector<double> parse_grid(const std::string& text)
{
    std::vector<double> out;
    auto bad = [&]() { throw ffg::Error(ffg::ErrorCode::DomainError, "bad grid '" + text + "'"); };
    if (text.find(':') != std::string::npos) {
        double start = 0, stop = 0, step = 0;
        char c1 = 0, c2 = 0;
        std::istringstream in(text);
        if (!(in >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' || !(step > 0) || stop < start)
            bad();
        auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
        for (std::size_t i = 0; i < n; ++i)
            out.push_back(std::round((start + static_cast<double>(i) * step) * 1e12) / 1e12);
        return out;
    }
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) bad();
        } catch (const std::invalid_argument&) {
            bad();
        }
    }
    if (out.empty()) bad();
    return out;
}

std::vector<std::uint64_t> parse_seeds(const std::string& text)
{
    std::vector<std::uint64_t> out;
    auto dots = text.find("..");
    try {
        if (dots != std::string::npos) {
            std::uint64_t a = std::stoull(text.substr(0, dots));
            std::uint64_t b = std::stoull(text.substr(dots + 2));
            for (std::uint64_t s = a; s <= b; ++s) out.push_back(s);
        } else {
            std::istringstream in(text);
            std::string item;
            while (std::getline(in, item, ',')) out.push_back(std::stoull(item));
        }
    } catch (const std::exception&) {
        throw ffg::Error(ffg::ErrorCode::DomainError, "bad seed list '" + text + "'");
    }
    if (out.empty()) throw ffg::Error(ffg::ErrorCode::DomainError, "empty seed list");
    return out;
}

void header(std::ostream& out, const std::string& command, const ffg::ProtocolParams& p, double d0)
{
    out << "# ffgsim " << ffg::kVersion << " " << command << "\n";
    out << "# params epoch_length=" << p.epoch_length << " gamma=" << ffg::format_double(p.gamma)
        << " beta=" << ffg::format_double(p.beta) << " p=" << ffg::format_double(p.p)
        << " finality_threshold=" << ffg::format_double(p.finality_threshold) << " d0=" << ffg::format_double(d0)
        << "\n";
}

struct ParamFlags {
    ffg::ProtocolParams params;
    double d0 = ffg::kDefaultInitialDeposit;

    void attach(CLI::App* app)
    {
        app->add_option("--gamma", params.gamma, "base interest factor")->capture_default_str();
        app->add_option("--beta", params.beta, "base penalty factor")->capture_default_str();
        app->add_option("--p", params.p, "total-deposit exponent")->capture_default_str();
        app->add_option("--d0", d0, "initial total deposit")->capture_default_str();
    }
};

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Casper FFG simulator and analysis tools"};
    app.set_version_flag("--version", std::string(ffg::kVersion));
    app.require_subcommand(1);

    std::string out;
    std::string format = "csv";
    auto common = [&](CLI::App* sub) {
        sub->add_option("--out", out, "output path (relative paths resolve against $FFGSIM_OUT_DIR)");
        sub->add_option("--format", format, "output format")->check(CLI::IsMember({"csv"}))->capture_default_str();
    };

    // simulate
    auto* simulate = app.add_subcommand("simulate", "run a scenario file and write its trace");
    std::string scenario_path;
    std::optional<std::uint64_t> seed_override;
    std::optional<std::uint64_t> max_epochs_override;
    simulate->add_option("--scenario", scenario_path, "scenario file")->required();
    simulate->add_option("--seed", seed_override, "override the scenario seed");
    simulate->add_option("--max-epochs", max_epochs_override, "override max_epochs");
    common(simulate);

    // phi
    auto* phi_cmd = app.add_subcommand("phi", "epochs until finalization resumes after a share stops voting");
    std::string phi_alpha;
    ParamFlags phi_params;
    phi_cmd->add_option("--alpha", phi_alpha, "share that stops voting: a value, a,b,c or start:stop:step")
        ->required();
    phi_params.attach(phi_cmd);
    common(phi_cmd);

    // wc
    auto* wc_cmd = app.add_subcommand("wc", "recovery epochs under the worst-case adversary");
    std::string wc_alpha;
    ParamFlags wc_params;
    wc_cmd->add_option("--alpha", wc_alpha, "honest share alpha0: a value, a,b,c or start:stop:step")->required();
    wc_params.attach(wc_cmd);
    common(wc_cmd);

    // race
    auto* race_cmd = app.add_subcommand("race", "probability that chain 1 wins a block race");
    std::uint64_t n1 = 0, n2 = 0;
    std::string race_mu;
    std::uint64_t mc_samples = 0;
    std::uint64_t mc_seed = 1;
    race_cmd->add_option("--n1", n1, "blocks chain 1 needs")->required()->check(CLI::PositiveNumber);
    race_cmd->add_option("--n2", n2, "blocks chain 2 needs")->required()->check(CLI::PositiveNumber);
    race_cmd->add_option("--mu", race_mu, "mining share of chain 1: a value, a,b,c or start:stop:step")->required();
    race_cmd->add_option("--mc", mc_samples, "also estimate by Monte Carlo with this many samples");
    race_cmd->add_option("--seed", mc_seed, "Monte Carlo seed")->capture_default_str();
    common(race_cmd);

    // tables
    auto* tables_cmd = app.add_subcommand("tables", "loss, PLR and GF tables for an abstaining validator");
    double t_alpha = 0.2, t_mu = 1.0, t_rho = 1e-6;
    tables_cmd->add_option("--alpha", t_alpha, "abstainer's share")->capture_default_str();
    tables_cmd->add_option("--mu", t_mu, "voting share including the abstainer")->capture_default_str();
    tables_cmd->add_option("--rho", t_rho, "individual reward factor")->capture_default_str();
    common(tables_cmd);

    // gas
    auto* gas_cmd = app.add_subcommand("gas", "share of block gas used by epoch initialization and votes");
    double g_n = 100, g_vote = 532031, g_init = 742393, g_limit = 8e6;
    std::uint64_t g_l = 50, g_window = 37;
    gas_cmd->add_option("--validators", g_n, "number of validators")->capture_default_str();
    gas_cmd->add_option("--vote-gas", g_vote, "gas per vote")->capture_default_str();
    gas_cmd->add_option("--init-gas", g_init, "gas per epoch initialization")->capture_default_str();
    gas_cmd->add_option("--limit", g_limit, "block gas limit")->capture_default_str();
    gas_cmd->add_option("--epoch-length", g_l, "blocks per epoch")->capture_default_str();
    gas_cmd->add_option("--window", g_window, "blocks per epoch available for votes")->capture_default_str();
    common(gas_cmd);

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "run a scenario family over an alpha grid and seeds");
    std::string s_kind = "offline", s_alphas = "0.05:0.65:0.05", s_seeds = "1", s_mus, s_model = "stochastic";
    ffg::SweepSpec sweep_spec;
    ParamFlags sweep_params;
    sweep_cmd->add_option("--kind", s_kind, "offline | worst_case | partition")
        ->check(CLI::IsMember({"offline", "worst_case", "partition"}))
        ->capture_default_str();
    sweep_cmd->add_option("--alphas", s_alphas, "alpha grid")->capture_default_str();
    sweep_cmd->add_option("--seeds", s_seeds, "seeds: a,b,c or first..last")->capture_default_str();
    sweep_cmd->add_option("--mus", s_mus, "partition mining shares of branch 0 (default: mu = alpha)");
    sweep_cmd->add_option("--model", s_model, "partition proposal model")
        ->check(CLI::IsMember({"deterministic", "stochastic"}))
        ->capture_default_str();
    sweep_cmd->add_option("--max-epochs", sweep_spec.max_epochs, "epoch cap per run")->capture_default_str();
    sweep_cmd->add_option("--fault-epoch", sweep_spec.fault_epoch, "epoch the fault or partition starts")
        ->capture_default_str();
    sweep_cmd->add_option("--pool", sweep_spec.worst_case_pool, "worst-case validators")->capture_default_str();
    sweep_params.attach(sweep_cmd);
    common(sweep_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*simulate) {
            ffg::ScenarioConfig cfg = ffg::load_scenario(scenario_path);
            if (seed_override) cfg.seed = *seed_override;
            if (max_epochs_override) cfg.max_epochs = *max_epochs_override;
            ffg::SimTrace trace = ffg::run(cfg);
            with_output(out, [&](std::ostream& os) { ffg::write_trace_csv(os, trace); });
            if (!out.empty()) {
                for (std::uint32_t b = 0; b < cfg.branch_count(); ++b) {
                    try {
                        auto t = ffg::first_finalization_time(trace, b);
                        std::cout << "branch " << b << " first finalization " << t.epochs
                                  << " epochs after the fault (epoch " << t.epoch << ", "
                                  << ffg::format_double(t.seconds) << " s)\n";
                    } catch (const ffg::Error& e) {
                        if (e.code() != ffg::ErrorCode::NeverFinalized) throw;
                        std::cout << "branch " << b << " never finalized after the fault\n";
                    }
                }
            }
        } else if (*phi_cmd) {
            auto alphas = parse_grid(phi_alpha);
            auto& p = phi_params;
            if (alphas.size() == 1 && out.empty()) {
                std::cout << ffg::phi(alphas.front(), p.params, p.d0) << "\n";
            } else {
                auto curve = ffg::phi_curve(alphas, p.params, p.d0);
                with_output(out, [&](std::ostream& os) {
                    header(os, "phi", p.params, p.d0);
                    os << "offline_share,epochs\n";
                    for (const auto& pt : curve) os << ffg::format_double(pt.offline_share) << ',' << pt.epochs << "\n";
                });
            }
        } else if (*wc_cmd) {
            auto alphas = parse_grid(wc_alpha);
            auto& p = wc_params;
            if (alphas.size() == 1 && out.empty()) {
                std::cout << ffg::worst_case_T(alphas.front(), p.params, p.d0) << "\n";
            } else {
                with_output(out, [&](std::ostream& os) {
                    header(os, "wc", p.params, p.d0);
                    os << "alpha0,epochs\n";
                    for (double a : alphas)
                        os << ffg::format_double(a) << ',' << ffg::worst_case_T(a, p.params, p.d0) << "\n";
                });
            }
        } else if (*race_cmd) {
            auto mus = parse_grid(race_mu);
            with_output(out, [&](std::ostream& os) {
                os << "# ffgsim " << ffg::kVersion << " race n1=" << n1 << " n2=" << n2;
                if (mc_samples) os << " mc_samples=" << mc_samples << " seed=" << mc_seed << " rng=" << ffg::kRngAlgorithm;
                os << "\n";
                os << "mu,probability,log10_probability,underflow";
                if (mc_samples) os << ",mc_estimate,mc_std_error";
                os << "\n";
                for (double mu : mus) {
                    auto r = ffg::race_probability(n1, n2, mu);
                    os << ffg::format_double(mu) << ',' << ffg::format_double(r.probability) << ','
                       << ffg::format_double(r.log10_probability) << ',' << (r.underflow ? 1 : 0);
                    if (mc_samples) {
                        auto m = ffg::race_monte_carlo(n1, n2, mu, mc_samples, mc_seed);
                        os << ',' << ffg::format_double(m.estimate) << ',' << ffg::format_double(m.std_error);
                    }
                    os << "\n";
                }
            });
        } else if (*tables_cmd) {
            auto rows = ffg::incentive_tables(t_alpha, t_mu, t_rho);
            with_output(out, [&](std::ostream& os) {
                os << "# ffgsim " << ffg::kVersion << " tables alpha=" << ffg::format_double(t_alpha)
                   << " mu=" << ffg::format_double(t_mu) << " rho=" << ffg::format_double(t_rho) << "\n";
                os << "justification,loss_nu,loss_voters,loss_nonvoters,plr_voters,plr_nonvoters,gf_voters,"
                      "gf_nonvoters,plr_others,gf_others\n";
                for (const auto& r : rows) {
                    os << ffg::to_string(r.scenario);
                    for (double v : {r.loss_nu, r.loss_voters, r.loss_nonvoters, r.plr_voters, r.plr_nonvoters,
                                     r.gf_voters, r.gf_nonvoters, r.plr_others, r.gf_others})
                        os << ',' << ffg::format_double(v);
                    os << "\n";
                }
            });
        } else if (*gas_cmd) {
            auto g = ffg::gas_overhead(g_n, g_vote, g_init, g_limit, g_l, g_window);
            with_output(out, [&](std::ostream& os) {
                os << "# ffgsim " << ffg::kVersion << " gas validators=" << ffg::format_double(g_n)
                   << " vote_gas=" << ffg::format_double(g_vote) << " init_gas=" << ffg::format_double(g_init)
                   << " limit=" << ffg::format_double(g_limit) << " epoch_length=" << g_l << " window=" << g_window
                   << "\n";
                os << "init_fraction,vote_fraction\n";
                os << ffg::format_double(g.init_fraction) << ',' << ffg::format_double(g.vote_fraction) << "\n";
            });
        } else if (*sweep_cmd) {
            sweep_spec.kind = s_kind == "offline"      ? ffg::SweepKind::Offline
                              : s_kind == "worst_case" ? ffg::SweepKind::WorstCase
                                                       : ffg::SweepKind::Partition;
            sweep_spec.alphas = parse_grid(s_alphas);
            sweep_spec.seeds = parse_seeds(s_seeds);
            if (!s_mus.empty()) sweep_spec.mus = parse_grid(s_mus);
            sweep_spec.model = s_model == "deterministic" ? ffg::ProposalModel::Deterministic
                                                          : ffg::ProposalModel::Stochastic;
            sweep_spec.params = sweep_params.params;
            sweep_spec.d0 = sweep_params.d0;
            auto rows = ffg::run_sweep(sweep_spec);
            with_output(out, [&](std::ostream& os) { ffg::write_sweep_csv(os, sweep_spec, rows); });
        }
    } catch (const ffg::Error& e) {
        std::cerr << "ffgsim: " << ffg::to_string(e.code()) << ": " << e.what() << "\n";
        return e.code() == ffg::ErrorCode::ConfigError ? kConfig : kUsage;
    } catch (const std::exception& e) {
        std::cerr << "ffgsim: " << e.what() << "\n";
        return kUsage;
    }
    return kOk;
}
