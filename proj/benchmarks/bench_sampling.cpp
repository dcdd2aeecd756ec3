#include <benchmark/benchmark.h>

#include <cmath>

#include "wishart/ensemble.hpp"
#include "wishart/rng.hpp"

using namespace wishart;

namespace {

const double kLn2 = std::log(2.0);

ExperimentGeometry pair_geometry(std::int64_t L, ScalarField field, int power) {
    ExperimentGeometry g;
    g.L = L;
    g.grid = TimeGrid({0.0, 1.0});
    g.process = {field, ProcessFamily::GaussianOU, kLn2};
    g.observables = {{0.0, 0.0, 4.0, 2.0, power, 0}, {0.0, 0.0, 1.0, 1.0, power, 1}};
    return g;
}

}  // namespace

static void BM_NormalPairs(benchmark::State& state) {
    std::uint32_t block = 0;
    double sink = 0.0;
    for (auto _ : state) {
        const auto [a, b] = normal_pair(42, block++, 7, 9, 3);
        sink += a + b;
    }
    benchmark::DoNotOptimize(sink);
    state.SetItemsProcessed(state.iterations() * 2);
}
BENCHMARK(BM_NormalPairs);

static void BM_EntryPath(benchmark::State& state) {
    const EntryProcessSpec spec{ScalarField::Real, ProcessFamily::GaussianOU, kLn2};
    const TimeGrid grid({0.0, 0.5, 1.0, 2.0});
    std::uint64_t replica = 0;
    for (auto _ : state) {
        const auto path = sample_entry_path(spec, grid, {7, replica++}, 3, 5);
        benchmark::DoNotOptimize(path.data());
    }
    state.SetItemsProcessed(state.iterations() * grid.size());
}
BENCHMARK(BM_EntryPath);

static void BM_ReplicaTraceP1(benchmark::State& state) {
    const auto g = pair_geometry(state.range(0), ScalarField::Real, 1);
    std::uint64_t replica = 0;
    for (auto _ : state) {
        const auto values = sample_replica(g, {11, replica++});
        benchmark::DoNotOptimize(values.data());
    }
}
BENCHMARK(BM_ReplicaTraceP1)->Arg(25)->Arg(50)->Arg(100);

static void BM_ReplicaTraceP2Complex(benchmark::State& state) {
    const auto g = pair_geometry(state.range(0), ScalarField::Complex, 2);
    std::uint64_t replica = 0;
    for (auto _ : state) {
        const auto values = sample_replica(g, {13, replica++});
        benchmark::DoNotOptimize(values.data());
    }
}
BENCHMARK(BM_ReplicaTraceP2Complex)->Arg(25)->Arg(50);

static void BM_TracePower(benchmark::State& state) {
    const auto n = state.range(0);
    RealMatrix b = RealMatrix::Random(2 * n, n);
    RealMatrix w = b.transpose() * b / static_cast<double>(n);
    for (auto _ : state) benchmark::DoNotOptimize(trace_power(w, 4));
}
BENCHMARK(BM_TracePower)->Arg(50)->Arg(200);

BENCHMARK_MAIN();
