#include <benchmark/benchmark.h>

#include <cmath>

#include "thinfilm/grid.hpp"
#include "thinfilm/spectral.hpp"

using namespace thinfilm;

namespace {

ScalarField wave(const TorusGrid& g) {
    ScalarField f(g);
    for (std::size_t i = 0; i < g.n(); ++i)
        for (std::size_t j = 0; j < g.n(); ++j)
            f(i, j) = std::sin(11.0 * g.node(i)) * std::cos(7.0 * g.node(j));
    return f;
}

void BM_forward_half(benchmark::State& state) {
    const TorusGrid g(static_cast<std::size_t>(state.range(0)));
    const ScalarField f = wave(g);
    Fft engine(g);
    std::vector<std::complex<double>> half(engine.half_size());
    for (auto _ : state) {
        engine.forward(f, half);
        benchmark::DoNotOptimize(half.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(g.size()));
}
BENCHMARK(BM_forward_half)->Arg(256)->Arg(1024)->Arg(3200);

void BM_frac_seminorm(benchmark::State& state) {
    const TorusGrid g(static_cast<std::size_t>(state.range(0)));
    const ScalarField f = wave(g);
    for (auto _ : state) {
        benchmark::DoNotOptimize(frac_seminorm_sq(f, 0.5));
    }
}
BENCHMARK(BM_frac_seminorm)->Arg(256)->Arg(1024);

void BM_total_variation(benchmark::State& state) {
    const TorusGrid g(static_cast<std::size_t>(state.range(0)));
    const ScalarField f = wave(g);
    for (auto _ : state) {
        benchmark::DoNotOptimize(total_variation(f));
    }
}
BENCHMARK(BM_total_variation)->Arg(256)->Arg(1024);

}  // namespace
