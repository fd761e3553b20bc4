#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "nisim/kernels.hpp"

using namespace nisim;

namespace {

const PhysicalParams& params() {
    static const PhysicalParams p = PhysicalParams::defaults();
    return p;
}

PhaseFunction exact_phase(double omega) {
    return loop_phase_function(GeometryKind::FiveBlade, NoiseAxis::Y, Branch::Antisymmetric, omega, 1e-7, params(),
                               PhaseModel::Exact);
}

template <bool Parallel>
void BM_mc_phase_sums(benchmark::State& state) {
    const PhaseFunction f = exact_phase(150.0);
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        auto s = Parallel ? kernels::omp::mc_phase_sums(f, n, 1) : kernels::serial::mc_phase_sums(f, n, 1);
        benchmark::DoNotOptimize(s);
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * state.range(0));
}

template <bool Parallel>
void BM_density_values(benchmark::State& state) {
    const kernels::FiveBladeGamma g{std::polar(0.99, 0.01), std::polar(0.78, -0.02)};
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        auto v = Parallel ? kernels::omp::density_values(g, n) : kernels::serial::density_values(g, n);
        benchmark::DoNotOptimize(v.data());
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * state.range(0) * state.range(0));
}

template <bool Parallel>
void BM_coherence_batch(benchmark::State& state) {
    std::vector<PhaseFunction> phases;
    for (int i = 0; i < state.range(0); ++i) phases.push_back(exact_phase(2.0 * i));
    for (auto _ : state) {
        auto r = Parallel ? kernels::omp::coherence_batch(phases, 1e-9) : kernels::serial::coherence_batch(phases, 1e-9);
        benchmark::DoNotOptimize(r.data());
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * state.range(0));
}

template <bool Parallel>
void BM_dd_average_batch(benchmark::State& state) {
    const DDProfile p = DDProfile::for_reflection(find_reflection("Si111"), 2.71e-10, 1e-3);
    std::vector<double> centers;
    for (int i = 0; i < state.range(0); ++i) centers.push_back((i - state.range(0) / 2) * 1e-6);
    for (auto _ : state) {
        auto r = Parallel ? kernels::omp::dd_average_batch(centers, 4.26e-6, p, PhaseWeight::Single, {})
                          : kernels::serial::dd_average_batch(centers, 4.26e-6, p, PhaseWeight::Single, {});
        benchmark::DoNotOptimize(r.data());
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * state.range(0));
}

}  // namespace

BENCHMARK(BM_mc_phase_sums<false>)->Name("mc_phase_sums/serial")->Arg(1 << 20)->UseRealTime();
BENCHMARK(BM_mc_phase_sums<true>)->Name("mc_phase_sums/omp")->Arg(1 << 20)->UseRealTime();
BENCHMARK(BM_density_values<false>)->Name("density_values/serial")->Arg(512)->UseRealTime();
BENCHMARK(BM_density_values<true>)->Name("density_values/omp")->Arg(512)->UseRealTime();
BENCHMARK(BM_coherence_batch<false>)->Name("coherence_batch/serial")->Arg(200)->UseRealTime();
BENCHMARK(BM_coherence_batch<true>)->Name("coherence_batch/omp")->Arg(200)->UseRealTime();
BENCHMARK(BM_dd_average_batch<false>)->Name("dd_average_batch/serial")->Arg(64)->UseRealTime();
BENCHMARK(BM_dd_average_batch<true>)->Name("dd_average_batch/omp")->Arg(64)->UseRealTime();

BENCHMARK_MAIN();
