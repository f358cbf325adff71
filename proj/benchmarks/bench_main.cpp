#include <benchmark/benchmark.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "fracvac/fracvac.hpp"

using namespace fracvac;

namespace {

ToyModelParams toy() { return {1.0, 0.5, 1.0, 1.0, 1.0, 0.0, 0.0}; }

TightBindingChain fibonacci_chain(int generation) {
    TightBindingChain c;
    c.word = fibonacci_word(generation);
    c.onsite_a = 0.7;
    c.onsite_b = -0.7;
    c.hopping = 1.0;
    return c;
}

void BM_TbSpectrum(benchmark::State& state) {
    const auto chain = fibonacci_chain(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(tb_spectrum(chain));
    state.counters["sites"] = static_cast<double>(chain.word.letters.size());
}
BENCHMARK(BM_TbSpectrum)->Arg(15)->Arg(17)->Arg(19)->Unit(benchmark::kMillisecond);

void BM_GammaOfT(benchmark::State& state) {
    const auto m = tb_spectrum(fibonacci_chain(static_cast<int>(state.range(0))));
    std::vector<double> t;
    for (int i = 0; i <= 1500; ++i) t.push_back(0.1 * std::pow(10.0, i / 300.0));
    for (auto _ : state) benchmark::DoNotOptimize(gamma_of_t(m, {0.25, 1.0}, t));
}
BENCHMARK(BM_GammaOfT)->Arg(15)->Arg(19)->Unit(benchmark::kMillisecond);

void BM_VolterraDiscrete(benchmark::State& state) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> omega, weight;
    for (int i = 0; i < 200; ++i) {
        omega.push_back(u(rng));
        weight.push_back(5e-4);
    }
    std::sort(omega.begin(), omega.end());
    const DiscreteEmitterModel m{0.0, SpectralMeasure(omega, weight)};
    const auto kernel = build_kernel_from_measure(m);
    const auto grid = uniform_grid(static_cast<double>(state.range(0)), 0.01);
    for (auto _ : state) benchmark::DoNotOptimize(volterra_solve(kernel, grid));
}
BENCHMARK(BM_VolterraDiscrete)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_VolterraToy(benchmark::State& state) {
    const auto kernel = toy_kernel(toy());
    const auto grid = uniform_grid(static_cast<double>(state.range(0)), 0.05);
    for (auto _ : state) benchmark::DoNotOptimize(volterra_solve(kernel, grid));
}
BENCHMARK(BM_VolterraToy)->Arg(50)->Arg(150)->Unit(benchmark::kMillisecond);

void BM_FindPoles(benchmark::State& state) {
    const auto p = toy();
    for (auto _ : state) benchmark::DoNotOptimize(find_poles(p, -60, 3));
}
BENCHMARK(BM_FindPoles)->Unit(benchmark::kMicrosecond);

void BM_PhiLaplace(benchmark::State& state) {
    const auto p = toy();
    cplx s(0.3, -1.2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(phi_laplace(p, s));
        s *= 1.0000001;
    }
}
BENCHMARK(BM_PhiLaplace);

}  // namespace

BENCHMARK_MAIN();
