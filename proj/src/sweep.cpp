#include "ffg/sweep.hpp"

#include "ffg/analysis.hpp"
#include "ffg/rng.hpp"
#include "ffg/sim.hpp"
#include "ffg/trace_csv.hpp"
#include "ffg/version.hpp"

#include <algorithm>
#include <exception>
#include <tuple>

namespace ffg {

const char* to_string(SweepKind k)
{
    switch (k) {
    case SweepKind::Offline: return "offline";
    case SweepKind::WorstCase: return "worst_case";
    case SweepKind::Partition: return "partition";
    }
    return "unknown";
}

namespace {

struct Job {
    double alpha;
    double mu;
    std::uint64_t seed;
};

void first_final(const SimTrace& trace, std::uint32_t branch, std::int64_t& epochs, double& seconds)
{
    try {
        auto t = first_finalization_time(trace, branch);
        epochs = static_cast<std::int64_t>(t.epochs);
        seconds = t.seconds;
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NeverFinalized) throw;
    }
}

SweepRow run_job(const SweepSpec& spec, const Job& job)
{
    SweepRow row{job.alpha, job.mu, job.seed};
    switch (spec.kind) {
    case SweepKind::Offline: {
        auto cfg = offline_scenario(job.alpha, spec.d0, spec.fault_epoch, spec.max_epochs, spec.params);
        cfg.seed = job.seed;
        first_final(run(cfg), 0, row.epochs0, row.seconds0);
        row.reference = static_cast<double>(phi(job.alpha, spec.params, spec.d0));
        break;
    }
    case SweepKind::WorstCase: {
        auto cfg = worst_case_scenario(job.alpha, spec.d0, spec.worst_case_pool, spec.fault_epoch, spec.max_epochs,
                                       spec.params);
        cfg.seed = job.seed;
        first_final(run(cfg), 0, row.epochs0, row.seconds0);
        row.reference = static_cast<double>(worst_case_T(job.alpha, spec.params, spec.d0));
        break;
    }
    case SweepKind::Partition: {
        auto cfg = partition_scenario(job.alpha, job.mu, spec.d0, spec.fault_epoch, spec.max_epochs, job.seed,
                                      spec.model, spec.params);
        SimTrace trace = run(cfg);
        first_final(trace, 0, row.epochs0, row.seconds0);
        first_final(trace, 1, row.epochs1, row.seconds1);
        if (row.epochs0 >= 0 && (row.epochs1 < 0 || row.seconds0 < row.seconds1)) row.winner = 0;
        else if (row.epochs1 >= 0) row.winner = 1;
        std::uint64_t n0 = phi(1.0 - job.alpha, spec.params, spec.d0);
        std::uint64_t n1 = phi(job.alpha, spec.params, spec.d0);
        if (n0 == 0) row.reference = 1.0;
        else if (n1 == 0) row.reference = 0.0;
        else row.reference = race_probability(n0, n1, job.mu).probability;
        break;
    }
    }
    return row;
}

} // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& spec)
{
    std::vector<Job> jobs;
    for (double alpha : spec.alphas) {
        std::vector<double> mus{1.0};
        if (spec.kind == SweepKind::Partition) mus = spec.mus.empty() ? std::vector<double>{alpha} : spec.mus;
        for (double mu : mus)
            for (std::uint64_t seed : spec.seeds) jobs.push_back({alpha, mu, seed});
    }

    std::vector<SweepRow> rows(jobs.size());
    std::exception_ptr failure;
    const auto n = static_cast<std::ptrdiff_t>(jobs.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            rows[static_cast<std::size_t>(i)] = run_job(spec, jobs[static_cast<std::size_t>(i)]);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
        return std::tie(a.alpha, a.mu, a.seed) < std::tie(b.alpha, b.mu, b.seed);
    });
    return rows;
}

void write_sweep_csv(std::ostream& out, const SweepSpec& spec, const std::vector<SweepRow>& rows)
{
    out << "# ffgsim " << kVersion << "\n";
    out << "# rng " << kRngAlgorithm << "\n";
    out << "# sweep kind=" << to_string(spec.kind) << " d0=" << format_double(spec.d0)
        << " fault_epoch=" << spec.fault_epoch << " max_epochs=" << spec.max_epochs
        << " worst_case_pool=" << spec.worst_case_pool << " model=" << to_string(spec.model) << "\n";
    out << "# params epoch_length=" << spec.params.epoch_length << " gamma=" << format_double(spec.params.gamma)
        << " beta=" << format_double(spec.params.beta) << " p=" << format_double(spec.params.p)
        << " finality_threshold=" << format_double(spec.params.finality_threshold)
        << " min_fork_choice_deposit=" << format_double(spec.params.min_fork_choice_deposit) << "\n";
    out << "alpha,mu,seed,epochs0,seconds0,epochs1,seconds1,winner,reference\n";
    for (const auto& r : rows) {
        out << format_double(r.alpha) << ',' << format_double(r.mu) << ',' << r.seed << ',' << r.epochs0 << ','
            << format_double(r.seconds0) << ',' << r.epochs1 << ',' << format_double(r.seconds1) << ',' << r.winner
            << ',' << format_double(r.reference) << "\n";
    }
}

} // namespace ffg
