#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "axiflow/continuation.hpp"

using namespace axiflow;

namespace {
GridSpec tanh_spec(int nx = 32, int nr = 8) {
  return GridSpec{NozzleProfile(ProfileKind::kTanhStep, {0.8, 2.0}), 8.0, nx, nr};
}
}  // namespace

TEST_CASE("sonic sequence") {
  const auto s = sonic_sequence(2.0, 6);
  REQUIRE(s.size() == 6);
  for (std::size_t n = 0; n < s.size(); ++n) {
    CHECK(s[n] == doctest::Approx(2.0 * (1 - 0.2 * std::pow(2.0, -double(n)))));
    if (n > 0) CHECK(s[n] > s[n - 1]);
    CHECK(s[n] < 2.0);
  }
}

TEST_CASE("grid spec builds with the requested shield") {
  const auto g = tanh_spec().build(0.01);
  CHECK(g->delta() == 0.01);
  CHECK(g->nx() == 32);
  CHECK(g->half_length() == 8.0);
}

TEST_CASE("shrink delta converges and differences decay") {
  DeltaSchedule sched;
  sched.tolerance = 1e-7;
  const double m = 0.5 / (2 * std::numbers::pi);
  const auto r = shrink_delta(tanh_spec(), GasModel(), m, sched);
  CHECK(r.converged);
  CHECK(r.deltas.front() == doctest::Approx(0.1 * 0.8));
  for (std::size_t k = 1; k < r.deltas.size(); ++k) CHECK(r.deltas[k] == doctest::Approx(0.5 * r.deltas[k - 1]));
  CHECK(r.differences.back() <= 1e-7 * m);
  CHECK(r.solution.converged);
  CHECK(r.solution.delta() == r.final_delta());
}

TEST_CASE("scaled start keeps the boundary datum") {
  const auto g = tanh_spec().build(0.0);
  const auto prev = newton_solve(g, GasModel(), 0.05);
  const auto init = scaled_start(prev, *g, 0.1, EndData::kStreamExtension);
  for (int i = 0; i <= g->nx(); ++i) CHECK(init[g->index(i, g->nr())] == doctest::Approx(0.1));
  const auto warm = newton_solve(g, GasModel(), 0.1, {}, init);
  const auto cold = newton_solve(g, GasModel(), 0.1);
  CHECK(warm.iterations <= cold.iterations);
  double diff = 0.0;
  for (std::size_t k = 0; k < warm.psi.size(); ++k) diff = std::max(diff, std::abs(warm.psi[k] - cold.psi[k]));
  CHECK(diff <= 1e-9);
}

TEST_CASE("sweep is monotone and job count does not change results") {
  const std::vector<double> m0{0.2, 0.6, 1.0, 1.4};
  SweepOptions one;
  SweepOptions two;
  two.jobs = 2;
  const auto a = mass_flux_sweep(tanh_spec(), GasModel(), 1e-4, m0, one);
  const auto b = mass_flux_sweep(tanh_spec(), GasModel(), 1e-4, m0, two);
  REQUIRE(a.entries.size() == 4);
  CHECK(a.monotone());
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(a.entries[k].converged);
    CHECK(a.entries[k].m0 == m0[k]);
    CHECK(a.entries[k].max_mach == doctest::Approx(b.entries[k].max_mach).epsilon(1e-8));
    CHECK(a.entries[k].error.empty());
  }
  SweepResult bad = a;
  std::swap(bad.entries[1].max_mach, bad.entries[2].max_mach);
  CHECK_FALSE(bad.monotone());
}

TEST_CASE("critical flux bracket on a coarse cylinder") {
  CriticalSearchOptions opt;
  opt.tolerance = 1e-2;
  const GridSpec spec{NozzleProfile(ProfileKind::kCylinder, {1.0}), 4.0, 16, 8};
  const auto est = find_critical_flux(spec, GasModel(), 1e-6, opt);
  CHECK_FALSE(est.open_upper);
  CHECK(est.lo < est.hi);
  CHECK(est.width() <= 1e-2 * est.hi);
  CHECK(est.lo_solution.converged);
  CHECK_FALSE(cutoff_predicate(est.lo_solution, GasModel()));
  CHECK(est.midpoint() == doctest::Approx(std::numbers::pi * 0.98).epsilon(0.05));
}

TEST_CASE("domain extension certifies a flat nozzle quickly") {
  const GridSpec spec{NozzleProfile(ProfileKind::kCylinder, {1.0}), 2.0, 8, 4};
  SolverOptions opt;
  opt.end_data = EndData::kShieldedUniform;
  const auto r = extend_domain(spec, GasModel(), 0.05, 0.01, 1e-6, 16.0, opt);
  CHECK(r.certified);
  CHECK(r.steps.size() >= 1);
  CHECK(r.certified_length >= 2.0);
}
