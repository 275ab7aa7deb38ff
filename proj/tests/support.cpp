#include "support.hpp"

namespace ffgtest {

ffg::ChainView linear_chain(std::uint64_t n)
{
    ffg::ChainView view;
    for (std::uint64_t i = 0; i < n; ++i) {
        ffg::Block b;
        b.id = bid(i);
        if (i > 0) b.parent = bid(i - 1);
        view.add_block(b);
    }
    return view;
}

RandomTree random_tree(std::mt19937_64& rng, std::uint64_t n, double extend_tip_bias)
{
    RandomTree t;
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (std::uint64_t i = 0; i < n; ++i) {
        ffg::Block b;
        b.id = bid(i);
        std::int64_t parent = -1;
        if (i > 0) {
            if (coin(rng) < extend_tip_bias)
                parent = static_cast<std::int64_t>(i - 1);
            else
                parent = static_cast<std::int64_t>(std::uniform_int_distribution<std::uint64_t>(0, i - 1)(rng));
            b.parent = bid(static_cast<std::uint64_t>(parent));
        }
        t.parents.push_back(parent);
        t.view.add_block(b);
    }
    return t;
}

bool naive_is_ancestor(const std::vector<std::int64_t>& parents, std::uint64_t a, std::uint64_t d)
{
    auto walk = static_cast<std::int64_t>(d);
    while (walk >= 0) {
        if (static_cast<std::uint64_t>(walk) == a) return true;
        walk = parents[static_cast<std::size_t>(walk)];
    }
    return false;
}

std::uint64_t naive_height(const std::vector<std::int64_t>& parents, std::uint64_t b)
{
    std::uint64_t h = 0;
    auto walk = parents[b];
    while (walk >= 0) {
        ++h;
        walk = parents[static_cast<std::size_t>(walk)];
    }
    return h;
}

} // namespace ffgtest
