#include "ffg/slashing.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace ffg {

const char* to_string(Violation v)
{
    switch (v) {
    case Violation::None: return "None";
    case Violation::ConditionI: return "ConditionI";
    case Violation::ConditionII: return "ConditionII";
    }
    return "Unknown";
}

namespace {

bool surrounds(const Vote& outer, const Vote& inner)
{
    return outer.source_height < inner.source_height && inner.source_height < inner.target_height &&
           inner.target_height < outer.target_height;
}

} // namespace

Violation violates(const Vote& a, const Vote& b)
{
    if (a.validator != b.validator || a == b) return Violation::None;
    if (a.target_height == b.target_height) return Violation::ConditionI;
    if (surrounds(a, b) || surrounds(b, a)) return Violation::ConditionII;
    return Violation::None;
}

void SlashParams::validate() const
{
    if (!(fee_fraction >= 0.0 && fee_fraction <= 1.0))
        throw Error(ErrorCode::ConfigError, "slashing.fee_fraction must lie in [0, 1]");
    if (!(severity_multiplier >= 0.0))
        throw Error(ErrorCode::ConfigError, "slashing.severity_multiplier must be >= 0");
    if (window_epochs == 0) throw Error(ErrorCode::ConfigError, "slashing.window_epochs must be >= 1");
}

SlashLedger::SlashLedger(SlashParams params) : params_(params) { params_.validate(); }

double SlashLedger::recent_slashed(std::uint64_t epoch) const
{
    double sum = 0.0;
    for (const auto& [e, stake] : window_)
        if (e + params_.window_epochs > epoch && e <= epoch) sum += stake;
    return sum;
}

void SlashLedger::record(std::uint64_t epoch, double stake)
{
    while (!window_.empty() && window_.front().first + params_.window_epochs <= epoch) window_.pop_front();
    window_.emplace_back(epoch, stake);
}

void SlashLedger::add_totals(double gross, double fee, double burned)
{
    gross_ += gross;
    fees_ += fee;
    burned_ += burned;
}

double slash_fraction(double recent_fraction, const SlashParams& params)
{
    return std::max(params.fee_fraction, std::min(1.0, params.severity_multiplier * recent_fraction));
}

namespace {

ValidatorState* find_validator(std::vector<ValidatorState>& validators, ValidatorId id)
{
    auto it = std::find_if(validators.begin(), validators.end(), [&](const auto& v) { return v.id == id; });
    return it == validators.end() ? nullptr : &*it;
}

ValidatorState& check_evidence(std::vector<ValidatorState>& validators, const SlashEvidence& evidence,
                               Violation& violation)
{
    violation = violates(evidence.vote_a, evidence.vote_b);
    if (violation == Violation::None)
        throw Error(ErrorCode::InvalidEvidence, "evidence votes do not violate a slashing condition");
    ValidatorState* offender = find_validator(validators, evidence.vote_a.validator);
    if (!offender)
        throw Error(ErrorCode::UnknownValidator,
                    "validator " + std::to_string(raw(evidence.vote_a.validator)) + " is unknown");
    if (offender->slashed)
        throw Error(ErrorCode::AlreadySlashed,
                    "validator " + std::to_string(raw(offender->id)) + " is already slashed");
    return *offender;
}

SlashOutcome settle(std::vector<ValidatorState>& validators, SlashLedger& ledger, ValidatorState& offender,
                    ValidatorId reporter, Violation violation, double fraction)
{
    SlashOutcome out;
    out.offender = offender.id;
    out.violation = violation;
    out.deposit = offender.deposit;
    out.fraction = fraction;
    out.loss = fraction * offender.deposit;
    out.fee = ledger.params().fee_fraction * offender.deposit;
    out.burned = out.loss - out.fee;
    offender.deposit -= out.loss;
    offender.slashed = true;
    if (ValidatorState* r = find_validator(validators, reporter); r && !r->slashed && r != &offender)
        r->deposit += out.fee;
    ledger.add_totals(out.deposit, out.fee, out.burned);
    return out;
}

} // namespace

SlashOutcome apply_slash(std::vector<ValidatorState>& validators, SlashLedger& ledger,
                         const SlashEvidence& evidence, double total_deposit, std::uint64_t epoch)
{
    Violation violation{};
    ValidatorState& offender = check_evidence(validators, evidence, violation);
    double recent = ledger.recent_slashed(epoch) + offender.deposit;
    double fraction = slash_fraction(total_deposit > 0.0 ? recent / total_deposit : 1.0, ledger.params());
    ledger.record(epoch, offender.deposit);
    return settle(validators, ledger, offender, evidence.reporter, violation, fraction);
}

std::vector<SlashOutcome> apply_slashes(std::vector<ValidatorState>& validators, SlashLedger& ledger,
                                        const std::vector<SlashEvidence>& evidence, double total_deposit,
                                        std::uint64_t epoch)
{
    std::vector<std::pair<ValidatorState*, const SlashEvidence*>> batch;
    std::vector<Violation> kinds;
    double stake = 0.0;
    for (const auto& ev : evidence) {
        Violation violation{};
        ValidatorState& offender = check_evidence(validators, ev, violation);
        bool seen = std::any_of(batch.begin(), batch.end(), [&](const auto& b) { return b.first == &offender; });
        if (seen) continue;
        batch.emplace_back(&offender, &ev);
        kinds.push_back(violation);
        stake += offender.deposit;
    }
    double recent = ledger.recent_slashed(epoch) + stake;
    double fraction = slash_fraction(total_deposit > 0.0 ? recent / total_deposit : 1.0, ledger.params());

    std::vector<SlashOutcome> out;
    out.reserve(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        ledger.record(epoch, batch[i].first->deposit);
        out.push_back(settle(validators, ledger, *batch[i].first, batch[i].second->reporter, kinds[i], fraction));
    }
    return out;
}

namespace {

std::optional<std::pair<Vote, Vote>> violation_in(std::vector<Vote> votes)
{
    std::sort(votes.begin(), votes.end(), [](const Vote& a, const Vote& b) {
        if (a.target_height != b.target_height) return a.target_height > b.target_height;
        return a < b;
    });
    votes.erase(std::unique(votes.begin(), votes.end()), votes.end());
    for (std::size_t i = 1; i < votes.size(); ++i)
        if (votes[i].target_height == votes[i - 1].target_height) return std::make_pair(votes[i - 1], votes[i]);

    // Target heights are now distinct and descending. Track the vote with the
    // smallest source among strictly higher targets.
    std::optional<Vote> outer;
    for (const Vote& v : votes) {
        if (outer && surrounds(*outer, v)) return std::make_pair(*outer, v);
        if (!outer || v.source_height < outer->source_height) outer = v;
    }
    return std::nullopt;
}

} // namespace

std::vector<std::pair<Vote, Vote>> find_violations(const std::vector<Vote>& votes)
{
    std::map<ValidatorId, std::vector<Vote>> by_validator;
    for (const Vote& v : votes) by_validator[v.validator].push_back(v);
    std::vector<std::pair<Vote, Vote>> out;
    for (auto& [id, own] : by_validator)
        if (auto pair = violation_in(std::move(own))) out.push_back(*pair);
    return out;
}

std::optional<Vote> first_conflict(const std::vector<Vote>& history, const Vote& vote)
{
    for (const Vote& h : history)
        if (violates(h, vote) != Violation::None) return h;
    return std::nullopt;
}

void VoteHistory::add(const Vote& vote)
{
    max_target_ = votes_.empty() ? vote.target_height : std::max(max_target_, vote.target_height);
    max_source_ = votes_.empty() ? vote.source_height : std::max(max_source_, vote.source_height);
    votes_.push_back(vote);
}

bool VoteHistory::contains(const Vote& vote) const
{
    if (votes_.empty() || vote.target_height > max_target_) return false;
    return std::find(votes_.begin(), votes_.end(), vote) != votes_.end();
}

std::optional<Vote> VoteHistory::first_conflict(const Vote& vote) const
{
    if (votes_.empty()) return std::nullopt;
    if (vote.target_height > max_target_ && vote.source_height >= max_source_) return std::nullopt;
    return ffg::first_conflict(votes_, vote);
}

double min_slashable_for_conflict(const std::vector<Vote>& votes,
                                  const std::unordered_map<ValidatorId, double>& stake)
{
    double total = 0.0;
    for (const auto& [id, s] : stake) total += s;
    if (!(total > 0.0)) return 0.0;

    std::unordered_map<ValidatorId, bool> offending;
    for (std::size_t i = 0; i < votes.size(); ++i)
        for (std::size_t j = i + 1; j < votes.size(); ++j)
            if (violates(votes[i], votes[j]) != Violation::None) offending[votes[i].validator] = true;

    double slashable = 0.0;
    for (const auto& [id, s] : stake)
        if (offending.count(id)) slashable += s;
    return slashable / total;
}

} // namespace ffg
