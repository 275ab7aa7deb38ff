#pragma once

#include "ffg/chain.hpp"
#include "ffg/finality.hpp"
#include "ffg/slashing.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace ffg {

struct Honest {};

// Stops voting from `from_epoch` on.
struct Offline {
    std::uint64_t from_epoch = 0;
};

// From `from_epoch` on, the worst-case validators as a group vote with just
// under the stake needed for justification.
struct WorstCase {
    std::uint64_t from_epoch = 0;
};

// Votes on every branch in the set while partitioned.
struct Equivocator {
    std::vector<std::uint32_t> branches;
};

struct PartitionHonest {
    std::uint32_t branch = 0;
};

using Strategy = std::variant<Honest, Offline, WorstCase, Equivocator, PartitionHonest>;

std::string describe(const Strategy& s);

// Whether a validator following `s` casts an unconditional honest vote in
// `epoch` on `branch`. WorstCase returns false once active; its votes are
// decided per group by worst_case_voters.
bool votes_honestly(const Strategy& s, std::uint32_t home_branch, std::uint32_t branch, std::uint64_t epoch);

// Behaviour outside a partition: PartitionHonest and Equivocator act as Honest.
Strategy unpartitioned(const Strategy& s);

bool is_worst_case_active(const Strategy& s, std::uint64_t epoch);

// Participation share the adversary contributes at honest share alpha:
// max(0, (2/3 - alpha) / (1 - alpha)), and 0 for alpha >= 1.
double worst_case_delta(double alpha);

struct Candidate {
    ValidatorId id{};
    double deposit = 0.0;
};

// Largest-deposit-first subset of `adversary` whose stake, added to
// `honest_stake`, stays at or below threshold * total - quantum. Ties go to
// the lower id. Once the honest stake alone reaches threshold * total the
// delay is lost anyway and every candidate votes.
std::vector<ValidatorId> worst_case_voters(double honest_stake, std::vector<Candidate> adversary,
                                           double total_deposit, double threshold, double quantum = 1.0);

// What an honest validator sees on one branch at vote time.
struct BranchContext {
    std::uint32_t branch = 0;
    const ChainView* view = nullptr;
    const FinalityState* finality = nullptr;
    BlockId head{};
    std::uint64_t epoch = 0;
};

// Vote for the current epoch's checkpoint on the head chain, sourced at the
// last justified checkpoint below it. nullopt if the head has not reached
// the checkpoint, no source exists, or the vote would violate a slashing
// condition against `history` when `protect` is set.
std::optional<Vote> honest_vote(const BranchContext& ctx, ValidatorId validator,
                                const VoteHistory& history, bool protect = true);

// Votes `validator` casts on the branch in `ctx`. `selected` says whether
// the worst-case group picked it this epoch.
std::vector<Vote> decide_votes(const Strategy& s, std::uint32_t home_branch, ValidatorId validator,
                               const BranchContext& ctx, const VoteHistory& history, bool selected);

} // namespace ffg
