#include <benchmark/benchmark.h>

#include <memory>
#include <vector>

#include "axiflow/gas.hpp"
#include "axiflow/nozzle.hpp"
#include "axiflow/solver.hpp"

namespace {

using namespace axiflow;

std::shared_ptr<const MappedGrid> tanh_grid(int nx, int nr, double delta) {
  const std::vector<double> params{0.8, 2.0};
  return std::make_shared<const MappedGrid>(make_profile(ProfileKind::kTanhStep, params), 16.0, nx,
                                            nr, delta);
}

void BM_Coenergy(benchmark::State& state) {
  const GasModel gas;
  double s = 0.0;
  for (auto _ : state) {
    s += 1e-7;
    if (s > 0.97) s = 0.0;
    benchmark::DoNotOptimize(gas.coenergy_terms(s));
  }
}
BENCHMARK(BM_Coenergy);

void BM_AssembleGradient(benchmark::State& state) {
  const GasModel gas;
  const auto grid = tanh_grid(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)) / 4, 1e-3);
  const auto psi = dirichlet_extension(*grid, 0.2, EndData::kStreamExtension);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_gradient(psi, *grid, gas));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(grid->cell_count()));
}
BENCHMARK(BM_AssembleGradient)->Arg(64)->Arg(128)->Arg(256);

void BM_AssembleHessian(benchmark::State& state) {
  const GasModel gas;
  const auto grid = tanh_grid(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)) / 4, 1e-3);
  const auto psi = dirichlet_extension(*grid, 0.2, EndData::kStreamExtension);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_hessian(psi, *grid, gas));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(grid->cell_count()));
}
BENCHMARK(BM_AssembleHessian)->Arg(64)->Arg(128)->Arg(256);

void BM_NewtonSolve(benchmark::State& state) {
  const GasModel gas;
  const auto grid = tanh_grid(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)) / 4, 1e-3);
  for (auto _ : state) benchmark::DoNotOptimize(newton_solve(grid, gas, 0.2));
}
BENCHMARK(BM_NewtonSolve)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
