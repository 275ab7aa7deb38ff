#include "ffg/strategies.hpp"

#include <algorithm>

namespace ffg {

namespace {

template <class... Ts> struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

} // namespace

std::string describe(const Strategy& s)
{
    return std::visit(overloaded{
                          [](const Honest&) -> std::string { return "honest"; },
                          [](const Offline& o) { return "offline(from=" + std::to_string(o.from_epoch) + ")"; },
                          [](const WorstCase& w) { return "worst_case(from=" + std::to_string(w.from_epoch) + ")"; },
                          [](const Equivocator& e) {
                              std::string out = "equivocator(";
                              for (std::size_t i = 0; i < e.branches.size(); ++i)
                                  out += (i ? "," : "") + std::to_string(e.branches[i]);
                              return out + ")";
                          },
                          [](const PartitionHonest& p) { return "partition_honest(" + std::to_string(p.branch) + ")"; },
                      },
                      s);
}

bool votes_honestly(const Strategy& s, std::uint32_t home_branch, std::uint32_t branch, std::uint64_t epoch)
{
    return std::visit(overloaded{
                          [&](const Honest&) { return branch == home_branch; },
                          [&](const Offline& o) { return branch == home_branch && epoch < o.from_epoch; },
                          [&](const WorstCase& w) { return branch == home_branch && epoch < w.from_epoch; },
                          [&](const Equivocator& e) {
                              return std::find(e.branches.begin(), e.branches.end(), branch) != e.branches.end();
                          },
                          [&](const PartitionHonest& p) { return branch == p.branch; },
                      },
                      s);
}

Strategy unpartitioned(const Strategy& s)
{
    if (std::holds_alternative<PartitionHonest>(s) || std::holds_alternative<Equivocator>(s)) return Honest{};
    return s;
}

bool is_worst_case_active(const Strategy& s, std::uint64_t epoch)
{
    const auto* w = std::get_if<WorstCase>(&s);
    return w && epoch >= w->from_epoch;
}

double worst_case_delta(double alpha)
{
    if (alpha >= 1.0) return 0.0;
    return std::max(0.0, (2.0 / 3.0 - alpha) / (1.0 - alpha));
}

std::vector<ValidatorId> worst_case_voters(double honest_stake, std::vector<Candidate> adversary,
                                           double total_deposit, double threshold, double quantum)
{
    std::sort(adversary.begin(), adversary.end(), [](const Candidate& a, const Candidate& b) {
        if (a.deposit != b.deposit) return a.deposit > b.deposit;
        return a.id < b.id;
    });
    std::vector<ValidatorId> out;
    if (meets_threshold(honest_stake, total_deposit, threshold)) {
        for (const auto& c : adversary) out.push_back(c.id);
        return out;
    }
    double budget = threshold * total_deposit - quantum;
    double stake = honest_stake;
    for (const auto& c : adversary) {
        if (stake + c.deposit <= budget) {
            stake += c.deposit;
            out.push_back(c.id);
        }
    }
    return out;
}

std::optional<Vote> honest_vote(const BranchContext& ctx, ValidatorId validator,
                                const VoteHistory& history, bool protect)
{
    const ChainView& view = *ctx.view;
    const FinalityState& fin = *ctx.finality;
    const std::uint64_t l = fin.epoch_length();
    auto target = view.ancestor_at_height(ctx.head, ctx.epoch * l);
    if (!target || ctx.epoch == 0) return std::nullopt;
    auto source = fin.last_justified_below(view, *target, ctx.epoch);
    if (!source) return std::nullopt;
    Vote vote = make_vote(fin.secret(), validator, *target, ctx.epoch, view.height(*source) / l);
    if (protect && history.first_conflict(vote)) return std::nullopt;
    if (history.contains(vote)) return std::nullopt;
    return vote;
}

std::vector<Vote> decide_votes(const Strategy& s, std::uint32_t home_branch, ValidatorId validator,
                               const BranchContext& ctx, const VoteHistory& history, bool selected)
{
    bool vote = votes_honestly(s, home_branch, ctx.branch, ctx.epoch) ||
                (is_worst_case_active(s, ctx.epoch) && ctx.branch == home_branch && selected);
    if (!vote) return {};
    bool protect = !std::holds_alternative<Equivocator>(s);
    if (auto v = honest_vote(ctx, validator, history, protect)) return {*v};
    return {};
}

} // namespace ffg
