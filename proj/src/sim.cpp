#include "ffg/sim.hpp"

#include "ffg/finality.hpp"
#include "ffg/fork_choice.hpp"
#include "ffg/rewards.hpp"
#include "ffg/rng.hpp"
#include "ffg/slashing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ffg {

const char* to_string(EventKind k)
{
    switch (k) {
    case EventKind::PartitionStart: return "partition_start";
    case EventKind::PartitionHeal: return "partition_heal";
    case EventKind::Finalized: return "finalized";
    case EventKind::Slashed: return "slashed";
    case EventKind::InvalidVote: return "invalid_vote";
    }
    return "unknown";
}

namespace {

struct Branch {
    std::uint32_t index = 0;
    ChainView view;
    FinalityState finality;
    std::vector<ValidatorState> validators;
    SlashLedger ledger;
    std::vector<VoteHistory> included; // per validator, votes included on this branch
    std::vector<Vote> included_all;
    Rng rng;
    double mu = 1.0;
    double clock_base = 0.0;
    std::uint64_t ticks = 0;
    double next_time = 0.0;
    bool alive = true;
    double epoch_total = 0.0;
    std::uint32_t epoch_finalized = 0;
    double honest_share = 0.0;
    double adversary_delta = 0.0;
    std::optional<double> first_final_time;
};

class Simulator {
public:
    explicit Simulator(const ScenarioConfig& config);
    SimTrace run();

private:
    void schedule(Branch& b, double now);
    void produce(Branch& b);
    void cast_votes(Branch& b, BlockId block, std::uint64_t epoch, double now);
    void close_epoch(Branch& b, std::uint64_t epoch, double now);
    void split(double now);
    void heal(double now);
    void slash(Branch& b, const std::vector<std::pair<Vote, Vote>>& pairs, std::uint64_t epoch, double now);
    void on_finalized(Branch& b, BlockId checkpoint, std::uint64_t epoch, double now);
    std::optional<ValidatorId> reporter_for(const Branch& b, ValidatorId offender) const;
    const std::string& name(ValidatorId id) const { return cfg_.validators[raw(id)].name; }

    const ScenarioConfig& cfg_;
    const std::uint64_t l_;
    const std::uint64_t vote_offset_;
    const std::uint64_t fault_epoch_;
    SimTrace trace_;
    std::vector<Branch> branches_;
    std::vector<VoteHistory> signed_; // everything each validator ever signed
    std::uint64_t next_id_ = 1;
    bool partitioned_ = false;
    bool split_done_ = false;
    std::optional<double> heal_time_;
    bool stop_ = false;
};

Simulator::Simulator(const ScenarioConfig& config)
    : cfg_(config),
      l_(config.params.epoch_length),
      vote_offset_(std::min<std::uint64_t>((config.params.epoch_length + 3) / 4, config.params.epoch_length - 1)),
      fault_epoch_(config.fault_start()),
      signed_(config.validators.size())
{
    trace_.config = config;
    trace_.fault_epoch = fault_epoch_;

    ChainView view;
    view.add_block(Block{BlockId{0}, std::nullopt, 0, std::nullopt, 0.0});
    const std::uint64_t secret = splitmix64(config.seed ^ 0xC0FFEEULL);
    FinalityState finality(view, l_, secret);
    finality.begin_epoch(0);

    std::vector<ValidatorState> validators;
    for (std::size_t i = 0; i < config.validators.size(); ++i)
        validators.push_back(ValidatorState{ValidatorId{static_cast<std::uint32_t>(i)}, config.validators[i].deposit});

    Branch b{0,
             std::move(view),
             std::move(finality),
             std::move(validators),
             SlashLedger(config.slashing),
             std::vector<VoteHistory>(config.validators.size()),
             {},
             Rng(config.seed, 0)};
    b.epoch_total = total_deposit(b.validators, 0);
    schedule(b, 0.0);
    branches_.push_back(std::move(b));
}

void Simulator::schedule(Branch& b, double now)
{
    if (cfg_.proposal_model == ProposalModel::Deterministic) {
        ++b.ticks;
        b.next_time = b.clock_base + static_cast<double>(b.ticks) * (cfg_.block_interval_s / b.mu);
    } else {
        b.next_time = now + b.rng.exponential(b.mu / cfg_.block_interval_s);
    }
}

SimTrace Simulator::run()
{
    while (!stop_) {
        Branch* next = nullptr;
        for (auto& b : branches_)
            if (b.alive && (!next || b.next_time < next->next_time)) next = &b;
        if (!next) break;
        if (partitioned_ && heal_time_ && *heal_time_ <= next->next_time) {
            heal(*heal_time_);
            continue;
        }
        produce(*next);
    }
    std::stable_sort(trace_.rows.begin(), trace_.rows.end(), [](const TraceRow& a, const TraceRow& b) {
        return std::tie(a.branch, a.epoch) < std::tie(b.branch, b.epoch);
    });
    return std::move(trace_);
}

void Simulator::produce(Branch& b)
{
    const double now = b.next_time;
    BlockId head = fork_choice(b.view, b.finality, cfg_.params);
    BlockId id{next_id_++};
    b.view.add_block(Block{id, head, 0, std::nullopt, now});
    ++trace_.blocks;
    const std::uint64_t h = b.view.height(id);
    const std::uint64_t epoch = h / l_;
    const std::uint64_t offset = h % l_;
    if (offset == vote_offset_) cast_votes(b, id, epoch, now);
    if (offset == l_ - 1) close_epoch(b, epoch, now);
    if (b.alive) schedule(b, now);
}

void Simulator::cast_votes(Branch& b, BlockId block, std::uint64_t epoch, double now)
{
    b.honest_share = 0.0;
    b.adversary_delta = 0.0;
    if (epoch == 0) return;

    const BranchContext ctx{b.index, &b.view, &b.finality, block, epoch};
    std::vector<std::pair<std::size_t, Vote>> votes;
    std::vector<Candidate> adversary;
    double honest_stake = 0.0;
    double unconditional = 0.0;
    for (std::size_t i = 0; i < b.validators.size(); ++i) {
        const ValidatorState& v = b.validators[i];
        if (!is_active(v, epoch)) continue;
        const ValidatorSpec& spec = cfg_.validators[i];
        Strategy s = partitioned_ ? spec.strategy : unpartitioned(spec.strategy);
        std::uint32_t home = partitioned_ ? spec.branch : b.index;
        if (votes_honestly(s, home, b.index, epoch)) {
            unconditional += v.deposit;
            bool protect = !std::holds_alternative<Equivocator>(s);
            if (auto vote = honest_vote(ctx, v.id, signed_[i], protect)) {
                votes.emplace_back(i, *vote);
                honest_stake += v.deposit;
            }
        } else if (is_worst_case_active(s, epoch) && home == b.index) {
            adversary.push_back({v.id, v.deposit});
        }
    }
    if (!adversary.empty()) {
        double pool = 0.0;
        double voted = 0.0;
        for (const auto& c : adversary) pool += c.deposit;
        for (ValidatorId id : worst_case_voters(honest_stake, adversary, b.epoch_total,
                                                cfg_.params.finality_threshold, cfg_.worst_case_quantum)) {
            if (auto vote = honest_vote(ctx, id, signed_[raw(id)])) {
                votes.emplace_back(raw(id), *vote);
                voted += b.validators[raw(id)].deposit;
            }
        }
        b.adversary_delta = pool > 0.0 ? voted / pool : 0.0;
    }
    b.honest_share = b.epoch_total > 0.0 ? unconditional / b.epoch_total : 0.0;
    std::sort(votes.begin(), votes.end(), [](const auto& x, const auto& y) { return x.first < y.first; });

    std::vector<std::pair<Vote, Vote>> offences;
    for (const auto& [i, vote] : votes) {
        signed_[i].add(vote);
        VoteCheck check = b.finality.validate_vote(b.view, vote, epoch, block);
        if (check != VoteCheck::Valid) {
            trace_.events.push_back(
                {now, b.index, epoch, EventKind::InvalidVote, 0, name(vote.validator) + " " + to_string(check)});
            continue;
        }
        if (auto prior = b.included[i].first_conflict(vote)) offences.emplace_back(*prior, vote);
        b.included[i].add(vote);
        b.included_all.push_back(vote);

        ValidatorState& v = b.validators[i];
        auto effect = b.finality.apply_vote(b.view, vote, v.deposit, b.epoch_total, cfg_.params.finality_threshold);
        v.voted = true;
        for (BlockId f : effect.finalized) on_finalized(b, f, epoch, now);
    }
    if (!offences.empty()) slash(b, offences, epoch, now);
}

void Simulator::on_finalized(Branch& b, BlockId checkpoint, std::uint64_t epoch, double now)
{
    b.view.mark_finalized(checkpoint);
    ++b.epoch_finalized;
    const std::uint64_t cp_epoch = b.view.height(checkpoint) / l_;
    trace_.events.push_back({now, b.index, epoch, EventKind::Finalized, cp_epoch, {}});
    if (epoch < fault_epoch_ || b.first_final_time) return;
    if (cfg_.partition && !split_done_) return;
    b.first_final_time = now;
    if (cfg_.stop == StopCondition::FirstFinalized) stop_ = true;
    if (cfg_.stop == StopCondition::AllFinalized) {
        bool all = true;
        for (const auto& other : branches_)
            if ((other.alive || partitioned_) && !other.first_final_time) all = false;
        if (all) stop_ = true;
    }
}

std::optional<ValidatorId> Simulator::reporter_for(const Branch& b, ValidatorId offender) const
{
    for (const auto& v : b.validators)
        if (v.id != offender && !v.slashed && is_active(v, b.finality.current_epoch())) return v.id;
    return std::nullopt;
}

void Simulator::slash(Branch& b, const std::vector<std::pair<Vote, Vote>>& pairs, std::uint64_t epoch, double now)
{
    std::vector<SlashEvidence> evidence;
    for (const auto& [a, c] : pairs) {
        if (b.validators[raw(a.validator)].slashed) continue;
        auto reporter = reporter_for(b, a.validator);
        evidence.push_back({a, c, reporter.value_or(a.validator)});
    }
    if (evidence.empty()) return;
    double total = total_deposit(b.validators, epoch);
    for (const auto& out : apply_slashes(b.validators, b.ledger, evidence, total, epoch)) {
        std::ostringstream detail;
        detail.precision(17);
        detail << name(out.offender) << " " << to_string(out.violation) << " fraction=" << out.fraction
               << " loss=" << out.loss << " fee=" << out.fee << " burned=" << out.burned;
        trace_.events.push_back({now, b.index, epoch, EventKind::Slashed, 0, detail.str()});
    }
}

void Simulator::close_epoch(Branch& b, std::uint64_t epoch, double now)
{
    EpochAccounting acc;
    if (epoch == 0) {
        // No vote can target genesis, so the genesis epoch leaves deposits alone.
        acc = compute_accounting(b.validators, 0, b.finality.epoch_esf(), cfg_.params);
        for (auto& v : b.validators) v.voted = false;
        acc.next_total_deposit = total_deposit(b.validators, 1);
    } else {
        acc = epoch_transition(b.validators, epoch, b.finality.epoch_esf(), cfg_.params);
    }

    TraceRow row;
    row.branch = b.index;
    row.epoch = epoch;
    row.time_s = now;
    row.total_deposit = acc.total_deposit;
    row.esf = acc.esf;
    row.voted_fraction = acc.voted_fraction;
    row.rho = acc.rho;
    row.collective = acc.collective;
    BlockId head = fork_choice(b.view, b.finality, cfg_.params);
    if (auto cp = b.view.ancestor_at_height(head, epoch * l_)) row.justified = b.finality.is_justified(*cp);
    row.finalized = b.epoch_finalized;
    row.last_finalized = b.finality.last_finalized_epoch();
    row.honest_share = b.honest_share;
    row.adversary_delta = b.adversary_delta;
    trace_.rows.push_back(row);

    b.epoch_finalized = 0;
    b.honest_share = 0.0;
    b.adversary_delta = 0.0;
    b.finality.begin_epoch(epoch + 1);
    b.epoch_total = acc.next_total_deposit;
    if (epoch + 1 >= cfg_.max_epochs) b.alive = false;

    if (!cfg_.partition && epoch + 1 == fault_epoch_) trace_.fault_time_s = now;
    if (cfg_.partition && !split_done_ && epoch + 1 == cfg_.partition->start_epoch && b.alive) split(now);
}

void Simulator::split(double now)
{
    const PartitionSpec& p = *cfg_.partition;
    Branch base = std::move(branches_.front());
    branches_.clear();
    for (std::uint32_t i = 0; i < p.mining.size(); ++i) {
        Branch b = base;
        b.index = i;
        b.mu = p.mining[i];
        b.rng = Rng(cfg_.seed, 1 + i);
        b.clock_base = now;
        b.ticks = 0;
        schedule(b, now);
        branches_.push_back(std::move(b));
    }
    partitioned_ = true;
    split_done_ = true;
    trace_.fault_time_s = now;
    if (p.end_epoch)
        heal_time_ = now + static_cast<double>(*p.end_epoch - p.start_epoch) * static_cast<double>(l_) *
                               cfg_.block_interval_s;
    std::ostringstream detail;
    detail << "branches=" << p.mining.size();
    trace_.events.push_back(
        {now, 0, base.finality.current_epoch(), EventKind::PartitionStart, 0, detail.str()});
}

void Simulator::heal(double now)
{
    // The branch that finalized first in wall-clock time is canonical; if
    // none did, the tallest head, lowest index first.
    std::size_t canonical = 0;
    for (std::size_t i = 1; i < branches_.size(); ++i) {
        const auto& a = branches_[i];
        const auto& c = branches_[canonical];
        if (a.first_final_time != c.first_final_time) {
            if (a.first_final_time && (!c.first_final_time || *a.first_final_time < *c.first_final_time))
                canonical = i;
            continue;
        }
        auto height = [&](const Branch& b) { return b.view.height(fork_choice(b.view, b.finality, cfg_.params)); };
        if (height(a) > height(c)) canonical = i;
    }

    Branch& c = branches_[canonical];
    std::vector<Vote> all = c.included_all;
    for (std::size_t i = 0; i < branches_.size(); ++i) {
        if (i == canonical) continue;
        const Branch& other = branches_[i];
        for (BlockId id : other.view.blocks())
            if (!c.view.contains(id)) c.view.add_block(other.view.block(id));
        all.insert(all.end(), other.included_all.begin(), other.included_all.end());
        branches_[i].alive = false;
    }
    const std::uint64_t epoch = c.finality.current_epoch();
    std::ostringstream detail;
    detail << "canonical=" << c.index;
    trace_.events.push_back({now, c.index, epoch, EventKind::PartitionHeal, 0, detail.str()});
    slash(c, find_violations(all), epoch, now);

    partitioned_ = false;
    heal_time_.reset();
    trace_.canonical = c.index;
    if (c.alive) {
        c.mu = 1.0;
        c.rng = Rng(cfg_.seed, 1 + branches_.size());
        c.clock_base = now;
        c.ticks = 0;
        schedule(c, now);
    }
}

} // namespace

SimTrace run(const ScenarioConfig& config)
{
    config.validate();
    Simulator sim(config);
    return sim.run();
}

FinalizationTime first_finalization_time(const SimTrace& trace, std::uint32_t branch)
{
    for (const auto& e : trace.events) {
        if (e.kind != EventKind::Finalized || e.branch != branch || e.epoch < trace.fault_epoch) continue;
        if (e.time_s < trace.fault_time_s) continue;
        return FinalizationTime{e.epoch, e.epoch - trace.fault_epoch, e.time_s - trace.fault_time_s};
    }
    throw Error(ErrorCode::NeverFinalized,
                "branch " + std::to_string(branch) + " never finalized after epoch " +
                    std::to_string(trace.fault_epoch) + " within " + std::to_string(trace.config.max_epochs) +
                    " epochs");
}

} // namespace ffg
