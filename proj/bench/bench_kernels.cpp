// OpenMP kernels against their serial references.

#include "ffg/analysis.hpp"
#include "ffg/rewards.hpp"
#include "ffg/safety_search.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

void BM_RaceMonteCarlo(benchmark::State& state)
{
    for (auto _ : state) benchmark::DoNotOptimize(ffg::race_monte_carlo(3, 10, 0.3, 200000, 1));
}
BENCHMARK(BM_RaceMonteCarlo)->Unit(benchmark::kMillisecond);

void BM_RaceMonteCarloSerial(benchmark::State& state)
{
    for (auto _ : state) benchmark::DoNotOptimize(ffg::race_monte_carlo_serial(3, 10, 0.3, 200000, 1));
}
BENCHMARK(BM_RaceMonteCarloSerial)->Unit(benchmark::kMillisecond);

void BM_SafetySearch(benchmark::State& state)
{
    for (auto _ : state)
        benchmark::DoNotOptimize(ffg::exhaustive_safety_search(ffg::TreeShape::ForkAfterFirst, {1.0, 1.0, 1.0}));
}
BENCHMARK(BM_SafetySearch)->Unit(benchmark::kMillisecond);

void BM_SafetySearchSerial(benchmark::State& state)
{
    for (auto _ : state)
        benchmark::DoNotOptimize(
            ffg::exhaustive_safety_search_serial(ffg::TreeShape::ForkAfterFirst, {1.0, 1.0, 1.0}));
}
BENCHMARK(BM_SafetySearchSerial)->Unit(benchmark::kMillisecond);

std::vector<ffg::ValidatorState> validators(std::size_t n)
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> dep(1.0, 1e4);
    std::vector<ffg::ValidatorState> vs(n);
    for (std::size_t i = 0; i < n; ++i) {
        vs[i].id = ffg::ValidatorId{static_cast<std::uint32_t>(i)};
        vs[i].deposit = dep(rng);
    }
    return vs;
}

template <class F> void transition(benchmark::State& state, F f)
{
    auto vs = validators(static_cast<std::size_t>(state.range(0)));
    ffg::ProtocolParams p;
    std::uint64_t epoch = 1;
    for (auto _ : state) {
        for (std::size_t i = 0; i < vs.size(); i += 2) vs[i].voted = true;
        benchmark::DoNotOptimize(f(vs, epoch++, 3, p));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_EpochTransition(benchmark::State& state) { transition(state, ffg::epoch_transition); }
BENCHMARK(BM_EpochTransition)->Arg(1 << 12)->Arg(1 << 16)->Arg(1 << 20);

void BM_EpochTransitionSerial(benchmark::State& state) { transition(state, ffg::epoch_transition_serial); }
BENCHMARK(BM_EpochTransitionSerial)->Arg(1 << 12)->Arg(1 << 16)->Arg(1 << 20);

std::vector<double> grid()
{
    std::vector<double> out;
    for (int i = 1; i <= 65; ++i) out.push_back(0.01 * i);
    return out;
}

void BM_PhiCurve(benchmark::State& state)
{
    auto g = grid();
    for (auto _ : state) benchmark::DoNotOptimize(ffg::phi_curve(g));
}
BENCHMARK(BM_PhiCurve)->Unit(benchmark::kMillisecond);

void BM_PhiCurveSerial(benchmark::State& state)
{
    auto g = grid();
    for (auto _ : state) {
        std::vector<std::uint64_t> out;
        for (double a : g) out.push_back(ffg::phi(a));
        benchmark::DoNotOptimize(out);
    }
}
BENCHMARK(BM_PhiCurveSerial)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
