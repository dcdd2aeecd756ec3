#include <benchmark/benchmark.h>

#include "wishart/covariance.hpp"

using namespace wishart;

namespace {

CovarianceParams params_for(int p, double theta) {
    return {p, p, 4.0, 2.0, 1.0, 1.0, theta, ScalarField::Real, 0.5, 1.5};
}

}  // namespace

static void BM_CovarianceExact(benchmark::State& state) {
    const auto params = params_for(static_cast<int>(state.range(0)), 0.125);
    for (auto _ : state) benchmark::DoNotOptimize(covariance_exact(params));
}
BENCHMARK(BM_CovarianceExact)->Arg(1)->Arg(4)->Arg(12);

static void BM_CovarianceQuadratureSmooth(benchmark::State& state) {
    const auto params = params_for(static_cast<int>(state.range(0)), 0.125);
    for (auto _ : state)
        benchmark::DoNotOptimize(covariance_quadrature(params, 1e-7));
}
BENCHMARK(BM_CovarianceQuadratureSmooth)->Arg(1)->Arg(4);

static void BM_CovarianceQuadratureSingular(benchmark::State& state) {
    // a = theta r_i r_j = 1: logarithmic kernel singularity on the diagonal
    CovarianceParams params{2, 2, 5.0, 2.0, 5.0, 2.0, 0.1, ScalarField::Real, 1.0, 3.0};
    for (auto _ : state)
        benchmark::DoNotOptimize(covariance_quadrature(params, 1e-7));
}
BENCHMARK(BM_CovarianceQuadratureSingular);

BENCHMARK_MAIN();
