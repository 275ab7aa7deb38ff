#pragma once

#include "ffg/finality.hpp"
#include "ffg/rewards.hpp"

#include <cstdint>
#include <deque>
#include <optional>
#include <unordered_map>
#include <vector>

namespace ffg {

enum class Violation { None, ConditionI, ConditionII };

const char* to_string(Violation v);

// Condition I: same validator, distinct votes, equal target heights.
// Condition II: one vote's span strictly inside the other's,
// h(s1) < h(s2) < h(t2) < h(t1), in either argument order.
Violation violates(const Vote& a, const Vote& b);

struct SlashEvidence {
    Vote vote_a;
    Vote vote_b;
    ValidatorId reporter{};
};

struct SlashParams {
    double fee_fraction = 0.04;
    double severity_multiplier = 3.0;
    std::uint64_t window_epochs = 1728;

    void validate() const;
};

struct SlashOutcome {
    ValidatorId offender{};
    Violation violation = Violation::None;
    double deposit = 0.0;  // offender's deposit before the slash
    double fraction = 0.0; // share of the deposit taken
    double loss = 0.0;
    double fee = 0.0;
    double burned = 0.0;
};

// Rolling record of slashed stake plus totals.
class SlashLedger {
public:
    explicit SlashLedger(SlashParams params = {});

    const SlashParams& params() const { return params_; }

    // Stake slashed in (epoch - window, epoch].
    double recent_slashed(std::uint64_t epoch) const;
    void record(std::uint64_t epoch, double stake);

    double gross_slashed() const { return gross_; }
    double fees_paid() const { return fees_; }
    double burned_total() const { return burned_; }
    void add_totals(double gross, double fee, double burned);

private:
    SlashParams params_;
    std::deque<std::pair<std::uint64_t, double>> window_;
    double gross_ = 0.0;
    double fees_ = 0.0;
    double burned_ = 0.0;
};

// max(fee_fraction, min(1, multiplier * recent_fraction)).
double slash_fraction(double recent_fraction, const SlashParams& params);

// Slashes one offender. The reporter, if a known unslashed validator, is
// credited the fee. Throws InvalidEvidence, AlreadySlashed or UnknownValidator
// and leaves all state untouched when it does.
SlashOutcome apply_slash(std::vector<ValidatorState>& validators, SlashLedger& ledger,
                         const SlashEvidence& evidence, double total_deposit, std::uint64_t epoch);

// Slashes a batch together: every offender's severity is computed from the
// recent stake including the whole batch. Evidence against an offender that
// appears earlier in the batch is skipped.
std::vector<SlashOutcome> apply_slashes(std::vector<ValidatorState>& validators, SlashLedger& ledger,
                                        const std::vector<SlashEvidence>& evidence, double total_deposit,
                                        std::uint64_t epoch);

// One violating pair per offending validator, ordered by validator id.
// O(n log n) per validator.
std::vector<std::pair<Vote, Vote>> find_violations(const std::vector<Vote>& votes);

// First vote in `history` that `vote` would violate a condition with.
std::optional<Vote> first_conflict(const std::vector<Vote>& history, const Vote& vote);

// One validator's own votes with a constant-time check for the common case
// of a vote above every earlier target.
class VoteHistory {
public:
    void add(const Vote& vote);
    bool contains(const Vote& vote) const;
    std::optional<Vote> first_conflict(const Vote& vote) const;
    const std::vector<Vote>& votes() const { return votes_; }

private:
    std::vector<Vote> votes_;
    std::uint64_t max_target_ = 0;
    std::uint64_t max_source_ = 0;
};

// Stake-weighted share of validators in `stake` that own at least one
// violating pair in `votes`, by scanning every pair.
double min_slashable_for_conflict(const std::vector<Vote>& votes,
                                  const std::unordered_map<ValidatorId, double>& stake);

} // namespace ffg
