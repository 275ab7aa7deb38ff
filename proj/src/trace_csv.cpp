#include "ffg/trace_csv.hpp"

#include "ffg/rng.hpp"
#include "ffg/version.hpp"

#include <cstdio>
#include <sstream>

namespace ffg {

std::string format_double(double d)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", d);
    return buf;
}

void write_trace_csv(std::ostream& out, const SimTrace& trace)
{
    out << "# ffgsim " << kVersion << "\n";
    out << "# rng " << kRngAlgorithm << "\n";
    out << "# seed " << trace.config.seed << "\n";
    out << "# fault_epoch " << trace.fault_epoch << " fault_time_s " << format_double(trace.fault_time_s) << "\n";
    if (trace.canonical) out << "# canonical_branch " << *trace.canonical << "\n";
    std::istringstream scenario(format_scenario(trace.config));
    std::string line;
    while (std::getline(scenario, line)) out << "# scenario " << line << "\n";
    for (const auto& e : trace.events) {
        out << "# event time_s=" << format_double(e.time_s) << " branch=" << e.branch << " epoch=" << e.epoch
            << " kind=" << to_string(e.kind);
        if (e.kind == EventKind::Finalized) out << " checkpoint_epoch=" << e.checkpoint_epoch;
        if (!e.detail.empty()) out << " " << e.detail;
        out << "\n";
    }
    out << kTraceColumns << "\n";
    for (const auto& r : trace.rows) {
        out << r.branch << ',' << r.epoch << ',' << format_double(r.time_s) << ',' << format_double(r.total_deposit)
            << ',' << r.esf << ',' << format_double(r.voted_fraction) << ',' << format_double(r.rho) << ','
            << format_double(r.collective) << ',' << (r.justified ? 1 : 0) << ',' << r.finalized << ','
            << r.last_finalized << ',' << format_double(r.honest_share) << ',' << format_double(r.adversary_delta)
            << "\n";
    }
}

} // namespace ffg
