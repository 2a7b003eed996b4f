#include <benchmark/benchmark.h>

#include "spinwehrl/dynamics.hpp"
#include "spinwehrl/entropy_rates.hpp"
#include "spinwehrl/hypergeom.hpp"
#include "spinwehrl/phase_space.hpp"
#include "spinwehrl/scenarios.hpp"

using namespace spinwehrl;

namespace {

// A tilted, mixed state with coherences, so no term vanishes by symmetry.
DensityMatrix sample_state(int two_j) {
  const SpinQuantumNumber j(two_j);
  const DensityMatrix g = gibbs_state(j, 1.0, 0.7);
  const auto c = coherent_state(j, 0.9, 0.4);
  const DensityMatrix pure = DensityMatrix::pure(j, c.amplitudes);
  return DensityMatrix(j, 0.6 * g.matrix() + 0.4 * pure.matrix());
}

void BM_Husimi(benchmark::State& state) {
  const DensityMatrix rho = sample_state(static_cast<int>(state.range(0)));
  const GridPtr grid = make_shared_grid(static_cast<int>(state.range(1)), 2 * static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(husimi(rho, grid));
}
BENCHMARK(BM_Husimi)->Args({1, 48})->Args({4, 48})->Args({4, 96})->Args({20, 96});

void BM_WehrlDampingRates(benchmark::State& state) {
  const DensityMatrix rho = sample_state(static_cast<int>(state.range(0)));
  const GridPtr grid = make_shared_grid(96, 192);
  const DissipatorSpec d = AmplitudeDamping{1.0, 0.5};
  for (auto _ : state) benchmark::DoNotOptimize(wehrl_rates_quadrature(rho, d, 0.0, 1.0, grid));
}
BENCHMARK(BM_WehrlDampingRates)->Arg(1)->Arg(4)->Arg(10);

void BM_SpinHalfClosedForm(benchmark::State& state) {
  const BathParams bath(1.0, 0.5);
  const BlochVector b{0.3, -0.2, 0.5};
  for (auto _ : state) benchmark::DoNotOptimize(spin_half_damping_rates(b, bath, 1.0));
}
BENCHMARK(BM_SpinHalfClosedForm);

void BM_ExactFlux(benchmark::State& state) {
  const DensityMatrix rho = sample_state(static_cast<int>(state.range(0)));
  const BathParams bath(1.0, 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(damping_phi_exact(rho, bath));
}
BENCHMARK(BM_ExactFlux)->Arg(1)->Arg(4)->Arg(20);

void BM_Hypergeometric(benchmark::State& state) {
  const double z = static_cast<double>(state.range(0)) / 100.0;
  for (auto _ : state) benchmark::DoNotOptimize(gauss_2f1(1.0, 3.5, 6.0, z));
}
BENCHMARK(BM_Hypergeometric)->Arg(10)->Arg(50)->Arg(89)->Arg(95)->Arg(99);

void BM_Evolve(benchmark::State& state) {
  const DensityMatrix rho = sample_state(static_cast<int>(state.range(0)));
  const LindbladModel model(rho.spin(), RotatingField{1.0, 0.5, 0.8}, AmplitudeDamping{0.3, 0.5});
  const auto grid = uniform_time_grid(10.0, 0.1);
  EvolveOptions opts;
  opts.tol = 1e-10;
  for (auto _ : state) benchmark::DoNotOptimize(evolve(rho, model, grid, opts));
}
BENCHMARK(BM_Evolve)->Arg(1)->Arg(4)->Arg(10);

void BM_SpontaneousEmission(benchmark::State& state) {
  SpontaneousEmissionParams p;
  p.gamma = 0.1;
  p.temperature = 1.0;
  p.time = {40.0, 0.1, 1e-10};
  for (auto _ : state) benchmark::DoNotOptimize(spontaneous_emission(p));
}
BENCHMARK(BM_SpontaneousEmission)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
