#include <benchmark/benchmark.h>

#include "thinfilm/energy.hpp"
#include "thinfilm/grid.hpp"
#include "thinfilm/profiles.hpp"

using namespace thinfilm;

namespace {

void BM_energy_F(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const TorusGrid g(n);
    const double eps = 8.0 / static_cast<double>(n);
    StripeSpec spec;
    spec.N = 2;
    spec.eps = eps;
    const Magnetization m = stripe_field(spec, g);
    ReducedEnergyModel model(g, {eps, 1.5});
    for (auto _ : state) {
        benchmark::DoNotOptimize(model.energy(m).total);
    }
}
BENCHMARK(BM_energy_F)->Arg(400)->Arg(1600)->Arg(3200);

void BM_energy_and_gradient(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const TorusGrid g(n);
    const double eps = 8.0 / static_cast<double>(n);
    StripeSpec spec;
    spec.N = 2;
    spec.eps = eps;
    const Magnetization m = stripe_field(spec, g);
    ReducedEnergyModel model(g, {eps, 1.5});
    VectorField grad(g);
    for (auto _ : state) {
        benchmark::DoNotOptimize(model.energy_and_gradient(m, grad).total);
    }
}
BENCHMARK(BM_energy_and_gradient)->Arg(400)->Arg(1600)->Arg(3200);

}  // namespace
