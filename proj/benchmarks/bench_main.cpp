#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "dguard/core.hpp"
#include "dguard/deadline_policies.hpp"
#include "dguard/reachability.hpp"
#include "dguard/tmhp.hpp"

using namespace dguard;

namespace {

const EnvParams kEnv = make_env(120, 500, 2, 1);

void BM_GenerateStream(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::uint64_t seed = 1;
    for (auto _ : state) benchmark::DoNotOptimize(generate_stream(kEnv, n, seed++));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenerateStream)->Arg(1000)->Arg(10000);

void BM_LongestPathDp(benchmark::State& state) {
    const auto s = generate_stream(kEnv, static_cast<std::size_t>(state.range(0)), 7);
    const VehicleState vehicle{60, kEnv.length(), 0};
    for (auto _ : state) {
        const auto g = build_reach_graph(vehicle, s.demands(), kEnv.speed(), kEnv.length());
        benchmark::DoNotOptimize(longest_path(g));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LongestPathDp)->RangeMultiplier(2)->Range(250, 2000)->Complexity();

void BM_LongestChainFast(benchmark::State& state) {
    const auto s = generate_stream(kEnv, static_cast<std::size_t>(state.range(0)), 7);
    const VehicleState vehicle{60, kEnv.length(), 0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(longest_chain_fast(vehicle, s.demands(), kEnv.speed(), kEnv.length()));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LongestChainFast)->RangeMultiplier(2)->Range(250, 2000)->Complexity();

std::vector<Point> points(std::size_t n) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Point> out(n);
    for (Point& p : out) p = {u(rng), u(rng)};
    return out;
}

void BM_EmhpHeuristic(benchmark::State& state) {
    const auto pts = points(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(emhp_heuristic({0, 0}, pts, {1, 1}));
}
BENCHMARK(BM_EmhpHeuristic)->Arg(10)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_EmhpExact(benchmark::State& state) {
    const auto pts = points(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(emhp_exact({0, 0}, pts, {1, 1}));
}
BENCHMARK(BM_EmhpExact)->DenseRange(8, 12, 2)->Unit(benchmark::kMillisecond);

void BM_RunLp(benchmark::State& state) {
    const auto s = generate_stream(kEnv, 2000, 3);
    for (auto _ : state) benchmark::DoNotOptimize(run_lp(s, 60, 1.0));
}
BENCHMARK(BM_RunLp)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
