#include "ffg/safety_search.hpp"

#include "ffg/slashing.hpp"

#include <algorithm>
#include <unordered_map>

namespace ffg {

CheckpointTree make_tree(TreeShape shape)
{
    CheckpointTree t;
    t.shape = shape;
    auto add = [&](int parent, char side) {
        std::size_t i = t.size++;
        t.parent[i] = parent;
        t.height[i] = parent < 0 ? 0 : t.height[static_cast<std::size_t>(parent)] + 1;
        t.side[i] = side;
        return static_cast<int>(i);
    };
    int g = add(-1, 'g');
    if (shape == TreeShape::ForkAtGenesis) {
        int a = g, b = g;
        for (int k = 0; k < 3; ++k) a = add(a, 'a');
        for (int k = 0; k < 3; ++k) b = add(b, 'b');
    } else {
        int c = add(g, 's');
        int a = c, b = c;
        for (int k = 0; k < 2; ++k) a = add(a, 'a');
        for (int k = 0; k < 2; ++k) b = add(b, 'b');
    }
    for (std::size_t target = 1; target < t.size; ++target)
        for (int s = t.parent[target]; s >= 0; s = t.parent[static_cast<std::size_t>(s)])
            t.links.emplace_back(s, static_cast<int>(target));
    return t;
}

std::vector<std::uint32_t> enumerate_options(const CheckpointTree& tree)
{
    // Links grouped per target; pick none or exactly one from each group.
    std::vector<std::vector<std::uint32_t>> groups(tree.size);
    for (std::size_t i = 0; i < tree.links.size(); ++i)
        groups[static_cast<std::size_t>(tree.links[i].second)].push_back(1u << i);
    std::vector<std::uint32_t> out{0};
    for (std::size_t target = 1; target < tree.size; ++target) {
        std::vector<std::uint32_t> next;
        for (std::uint32_t base : out) {
            next.push_back(base);
            for (std::uint32_t bit : groups[target]) next.push_back(base | bit);
        }
        out.swap(next);
    }
    return out;
}

std::vector<Vote> option_votes(const CheckpointTree& tree, std::uint32_t option, ValidatorId validator)
{
    std::vector<Vote> out;
    for (std::size_t i = 0; i < tree.links.size(); ++i) {
        if (!(option >> i & 1u)) continue;
        auto [s, t] = tree.links[i];
        out.push_back(make_vote(0, validator, BlockId{static_cast<std::uint64_t>(t)},
                                tree.height[static_cast<std::size_t>(t)], tree.height[static_cast<std::size_t>(s)]));
    }
    return out;
}

bool self_violating(const CheckpointTree& tree, std::uint32_t option)
{
    auto votes = option_votes(tree, option, ValidatorId{0});
    for (std::size_t i = 0; i < votes.size(); ++i)
        for (std::size_t j = i + 1; j < votes.size(); ++j)
            if (violates(votes[i], votes[j]) != Violation::None) return true;
    return false;
}

namespace {

bool conflict_of(const CheckpointTree& tree, std::uint32_t finalized)
{
    bool a = false, b = false;
    for (std::size_t i = 0; i < tree.size; ++i) {
        if (!(finalized >> i & 1u)) continue;
        a = a || tree.side[i] == 'a';
        b = b || tree.side[i] == 'b';
    }
    return a && b;
}

std::uint32_t finalized_of(const CheckpointTree& tree, std::uint32_t justified)
{
    std::uint32_t finalized = 1u;
    for (std::size_t c = 1; c < tree.size; ++c) {
        auto p = static_cast<std::size_t>(tree.parent[c]);
        if ((justified >> c & 1u) && (justified >> p & 1u)) finalized |= 1u << p;
    }
    return finalized;
}

SafetyOutcome evaluate_core(const CheckpointTree& tree, const std::array<double, kSearchValidators>& weights,
                            const std::array<std::uint32_t, kSearchValidators>& options,
                            const std::array<bool, kSearchValidators>& violating)
{
    double total = 0.0;
    for (double w : weights) total += w;
    const double threshold = 2.0 / 3.0;

    SafetyOutcome out;
    out.justified = 1u;
    // Links are ordered by target, and targets by index, so every source's
    // status is final before any link out of it is considered.
    for (std::size_t i = 0; i < tree.links.size(); ++i) {
        auto [s, t] = tree.links[i];
        if (!(out.justified >> s & 1u) || (out.justified >> t & 1u)) continue;
        double tally = 0.0;
        for (std::size_t v = 0; v < kSearchValidators; ++v)
            if (options[v] >> i & 1u) tally += weights[v];
        if (meets_threshold(tally, total, threshold)) out.justified |= 1u << t;
    }
    out.finalized = finalized_of(tree, out.justified);
    out.conflict = conflict_of(tree, out.finalized);
    double slashable = 0.0;
    for (std::size_t v = 0; v < kSearchValidators; ++v)
        if (violating[v]) slashable += weights[v];
    out.slashable = slashable / total;
    return out;
}

// Precomputed data for one tree shape.
struct Kernel {
    CheckpointTree tree;
    std::vector<std::uint32_t> options;
    std::vector<std::uint8_t> violating;

    explicit Kernel(TreeShape shape) : tree(make_tree(shape)), options(enumerate_options(tree))
    {
        violating.reserve(options.size());
        for (std::uint32_t o : options) violating.push_back(self_violating(tree, o) ? 1 : 0);
    }
};

struct Accumulator {
    SearchStats stats;
    bool have_example = false;

    void add(const Kernel& k, const std::array<double, kSearchValidators>& w, std::size_t i, std::size_t j,
             std::size_t l)
    {
        std::array<std::uint32_t, kSearchValidators> opts{k.options[i], k.options[j], k.options[l]};
        std::array<bool, kSearchValidators> viol{k.violating[i] != 0, k.violating[j] != 0, k.violating[l] != 0};
        SafetyOutcome out = evaluate_core(k.tree, w, opts, viol);
        ++stats.assignments;
        if (!out.conflict) return;
        ++stats.conflicts;
        stats.min_slashable_on_conflict = std::min(stats.min_slashable_on_conflict, out.slashable);
        if (out.slashable * 3.0 < 1.0) {
            ++stats.counterexamples;
            if (!have_example) {
                stats.example = opts;
                have_example = true;
            }
        }
    }

    void merge(const Accumulator& o)
    {
        stats.assignments += o.stats.assignments;
        stats.conflicts += o.stats.conflicts;
        stats.counterexamples += o.stats.counterexamples;
        stats.min_slashable_on_conflict = std::min(stats.min_slashable_on_conflict, o.stats.min_slashable_on_conflict);
        if (!have_example && o.have_example) {
            stats.example = o.stats.example;
            have_example = true;
        }
    }
};

bool equal_weights(const std::array<double, kSearchValidators>& w)
{
    return std::all_of(w.begin(), w.end(), [&](double x) { return x == w[0]; });
}

// All assignments whose first option index is i.
void search_row(const Kernel& k, const std::array<double, kSearchValidators>& w, bool multiset, std::size_t i,
                Accumulator& acc)
{
    const std::size_t n = k.options.size();
    for (std::size_t j = multiset ? i : 0; j < n; ++j)
        for (std::size_t l = multiset ? j : 0; l < n; ++l) acc.add(k, w, i, j, l);
}

void check_weights(const std::array<double, kSearchValidators>& w)
{
    for (double x : w)
        if (!(x > 0.0)) throw Error(ErrorCode::DomainError, "safety search weights must be > 0");
}

} // namespace

SafetyOutcome evaluate_assignment(const CheckpointTree& tree, const std::array<double, kSearchValidators>& weights,
                                  const std::array<std::uint32_t, kSearchValidators>& options)
{
    std::array<bool, kSearchValidators> violating{};
    for (std::size_t v = 0; v < kSearchValidators; ++v) violating[v] = self_violating(tree, options[v]);
    return evaluate_core(tree, weights, options, violating);
}

SafetyOutcome evaluate_with_protocol(const CheckpointTree& tree, const std::array<double, kSearchValidators>& weights,
                                     const std::array<std::uint32_t, kSearchValidators>& options)
{
    ChainView view;
    for (std::size_t i = 0; i < tree.size; ++i) {
        std::optional<BlockId> parent;
        if (tree.parent[i] >= 0) parent = BlockId{static_cast<std::uint64_t>(tree.parent[i])};
        view.add_block(Block{BlockId{i}, parent, 0, std::nullopt, 0.0});
    }
    FinalityState fin(view, 1);
    double total = 0.0;
    std::vector<Vote> all;
    std::unordered_map<ValidatorId, double> stake;
    for (std::size_t v = 0; v < kSearchValidators; ++v) {
        ValidatorId id{static_cast<std::uint32_t>(v)};
        total += weights[v];
        stake[id] = weights[v];
        for (const Vote& vote : option_votes(tree, options[v], id)) {
            fin.record_vote(view, vote, weights[v]);
            all.push_back(vote);
        }
    }
    for (std::size_t t = 1; t < tree.size; ++t) {
        BlockId target{t};
        for (int s = tree.parent[t]; s >= 0; s = tree.parent[static_cast<std::size_t>(s)])
            fin.try_justify(view, BlockId{static_cast<std::uint64_t>(s)}, target, total, 2.0 / 3.0);
    }
    for (std::size_t c = 0; c < tree.size; ++c) fin.try_finalize(view, BlockId{c});

    SafetyOutcome out;
    for (std::size_t i = 0; i < tree.size; ++i) {
        if (fin.is_justified(BlockId{i})) out.justified |= 1u << i;
        if (fin.is_finalized(BlockId{i})) out.finalized |= 1u << i;
    }
    for (BlockId a : fin.finalized())
        for (BlockId b : fin.finalized())
            if (conflicting(view, a, b)) out.conflict = true;
    out.slashable = min_slashable_for_conflict(all, stake);
    return out;
}

SearchStats exhaustive_safety_search(TreeShape shape, const std::array<double, kSearchValidators>& weights)
{
    check_weights(weights);
    const Kernel k(shape);
    const bool multiset = equal_weights(weights);
    const auto n = static_cast<std::int64_t>(k.options.size());
    Accumulator total;
#pragma omp parallel
    {
        Accumulator local;
#pragma omp for schedule(dynamic) nowait
        for (std::int64_t i = 0; i < n; ++i) search_row(k, weights, multiset, static_cast<std::size_t>(i), local);
#pragma omp critical
        total.merge(local);
    }
    // The first counterexample in enumeration order, independent of scheduling.
    if (total.stats.counterexamples > 0) {
        Accumulator first;
        for (std::int64_t i = 0; i < n && !first.have_example; ++i)
            search_row(k, weights, multiset, static_cast<std::size_t>(i), first);
        total.stats.example = first.stats.example;
    }
    return total.stats;
}

SearchStats exhaustive_safety_search_serial(TreeShape shape, const std::array<double, kSearchValidators>& weights)
{
    check_weights(weights);
    const Kernel k(shape);
    const bool multiset = equal_weights(weights);
    Accumulator acc;
    for (std::size_t i = 0; i < k.options.size(); ++i) search_row(k, weights, multiset, i, acc);
    return acc.stats;
}

} // namespace ffg
