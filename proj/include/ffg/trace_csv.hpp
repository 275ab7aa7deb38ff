#pragma once

#include "ffg/sim.hpp"

#include <ostream>
#include <string>

namespace ffg {

// Shortest round-trip form of a double ("%.17g").
std::string format_double(double d);

// '#' header lines (tool version, RNG algorithm, seed, full scenario),
// '#' event lines, then the column header and one row per (branch, epoch).
void write_trace_csv(std::ostream& out, const SimTrace& trace);

inline constexpr const char* kTraceColumns =
    "branch,epoch,time_s,total_deposit,esf,voted_fraction,rho,collective,justified,finalized,"
    "last_finalized,honest_share,adversary_delta";

} // namespace ffg
