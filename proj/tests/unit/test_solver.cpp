#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <vector>

#include "axiflow/solver.hpp"

using namespace axiflow;

namespace {

std::shared_ptr<const MappedGrid> grid(ProfileKind kind, std::vector<double> params, double l, int nx, int nr,
                                       double delta) {
  return std::make_shared<const MappedGrid>(NozzleProfile(kind, std::move(params)), l, nx, nr, delta);
}

std::vector<double> perturbed(const MappedGrid& g, double m, double amp) {
  auto psi = dirichlet_extension(g, m, EndData::kStreamExtension);
  for (int i = 1; i < g.nx(); ++i) {
    for (int j = 1; j < g.nr(); ++j) {
      psi[g.index(i, j)] += amp * m * std::sin(0.7 * i + 1.3 * j) * g.sigma(j) * (1 - g.sigma(j));
    }
  }
  return psi;
}

}  // namespace

TEST_CASE("dirichlet data") {
  const NozzleProfile p(ProfileKind::kTanhStep, {0.8, 2.0});
  CHECK(dirichlet_data(1.0, 0.0, 0.3, p) == 0.0);
  CHECK(dirichlet_data(1.0, p.radius(1.0), 0.3, p) == doctest::Approx(0.3));
  const auto g = grid(ProfileKind::kTanhStep, {0.8, 2.0}, 4.0, 8, 4, 0.05);
  std::vector<double> psi(g->node_count(), -1.0);
  apply_dirichlet(*g, 0.3, EndData::kShieldedUniform, psi);
  const auto num = interior_numbering(*g);
  long interior = 0;
  for (int i = 0; i <= g->nx(); ++i) {
    for (int j = 0; j <= g->nr(); ++j) {
      const auto k = g->index(i, j);
      if (g->is_boundary(i, j)) {
        CHECK(num[k] == -1);
        CHECK(psi[k] >= 0.0);
      } else {
        CHECK(num[k] == interior++);
        CHECK(psi[k] == -1.0);
      }
    }
    CHECK(psi[g->index(i, 0)] == 0.0);
    CHECK(psi[g->index(i, g->nr())] == doctest::Approx(0.3));
  }
  const double f = g->wall(0), d = 0.05, r = g->r(0, 2);
  CHECK(psi[g->index(0, 2)] == doctest::Approx(0.3 * ((r + d) * (r + d) - d * d) / ((f + d) * (f + d) - d * d)));
  CHECK(end_data_from_string("shielded_uniform") == EndData::kShieldedUniform);
}

TEST_CASE("gradient matches finite differences of the energy") {
  const GasModel gas;
  const auto g = grid(ProfileKind::kBump, {1.0, -0.2, 1.0}, 3.0, 8, 4, 0.02);
  auto psi = perturbed(*g, 0.1, 0.3);
  const auto grad = assemble_gradient(psi, *g, gas);
  const auto num = interior_numbering(*g);
  for (std::size_t k = 0; k < psi.size(); ++k) {
    if (num[k] < 0) continue;
    const double h = 1e-6, save = psi[k];
    psi[k] = save + h;
    const double ep = assemble_energy(psi, *g, gas);
    psi[k] = save - h;
    const double em = assemble_energy(psi, *g, gas);
    psi[k] = save;
    CHECK(grad[num[k]] == doctest::Approx((ep - em) / (2 * h)).epsilon(1e-6).scale(1e-8));
  }
}

TEST_CASE("hessian is the derivative of the gradient, symmetric and positive definite") {
  const GasModel gas;
  const auto g = grid(ProfileKind::kTanhStep, {0.8, 2.0}, 3.0, 8, 4, 0.02);
  auto psi = perturbed(*g, 0.15, 0.2);
  const Eigen::MatrixXd hess(assemble_hessian(psi, *g, gas));
  CHECK((hess - hess.transpose()).norm() <= 1e-14 * hess.norm());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(hess);
  CHECK(eig.eigenvalues().minCoeff() > 0.0);
  const auto num = interior_numbering(*g);
  for (std::size_t k = 0; k < psi.size(); ++k) {
    if (num[k] < 0) continue;
    const double h = 1e-6, save = psi[k];
    psi[k] = save + h;
    const Eigen::VectorXd gp = assemble_gradient(psi, *g, gas);
    psi[k] = save - h;
    const Eigen::VectorXd gm = assemble_gradient(psi, *g, gas);
    psi[k] = save;
    const Eigen::VectorXd col = (gp - gm) / (2 * h);
    CHECK((col - hess.col(num[k])).norm() <= 1e-6 * (1.0 + col.norm()));
  }
}

TEST_CASE("zero flux gives the zero solution") {
  const auto g = grid(ProfileKind::kTanhStep, {0.8, 2.0}, 4.0, 16, 4, 0.01);
  const auto sol = newton_solve(g, GasModel(), 0.0);
  CHECK(sol.converged);
  CHECK(sol.iterations == 0);
  for (double v : sol.psi) CHECK(v == 0.0);
  CHECK(sol.m0() == 0.0);
}

TEST_CASE("newton converges from different starts to the same minimizer") {
  const GasModel gas;
  const auto g = grid(ProfileKind::kTanhStep, {0.8, 2.0}, 6.0, 32, 8, 0.01);
  const double m = 0.12;
  const auto a = newton_solve(g, gas, m);
  const auto b = newton_solve(g, gas, m, {}, perturbed(*g, m, 0.5));
  REQUIRE(a.converged);
  REQUIRE(b.converged);
  CHECK(a.grad_norm <= 1e-10 * std::max(1.0, m));
  CHECK(a.m0() == doctest::Approx(2 * std::numbers::pi * m));
  double diff = 0.0;
  for (std::size_t k = 0; k < a.psi.size(); ++k) diff = std::max(diff, std::abs(a.psi[k] - b.psi[k]));
  CHECK(diff <= 1e-8 * m);
  for (std::size_t k = 1; k < a.energy_history.size(); ++k) {
    CHECK(a.energy_history[k] <= a.energy_history[k - 1] + 1e-12 * std::abs(a.energy_history[0]));
  }
  CHECK_FALSE(a.cutoff_active);
}

TEST_CASE("discrete maximum principle") {
  const GasModel gas;
  const auto g = grid(ProfileKind::kBump, {1.0, -0.2, 1.0}, 4.0, 32, 8, 0.01);
  const double m = 0.15;
  const auto sol = newton_solve(g, gas, m);
  REQUIRE(sol.converged);
  for (double v : sol.psi) {
    CHECK(v >= -1e-10);
    CHECK(v <= m + 1e-10);
  }
  for (int i = 0; i <= g->nx(); ++i) {
    for (int j = 1; j <= g->nr(); ++j) CHECK(sol.psi[g->index(i, j)] > sol.psi[g->index(i, j - 1)]);
  }
}

TEST_CASE("shielded cylinder is reproduced to second order") {
  const GasModel gas;
  const double a = 1.0, d = 0.05, m = 0.1;
  auto exact = [&](double, double r) { return m * ((r + d) * (r + d) - d * d) / ((a + d) * (a + d) - d * d); };
  SolverOptions opt;
  opt.end_data = EndData::kShieldedUniform;
  std::vector<double> err;
  for (int n : {1, 2}) {
    const auto g = grid(ProfileKind::kCylinder, {a}, 4.0, 32 * n, 8 * n, d);
    const auto sol = newton_solve(g, gas, m, opt);
    REQUIRE(sol.converged);
    err.push_back(l2_error(sol.psi, *g, exact));
    CHECK(pde_residual(sol, gas).max < 1e-2);
  }
  CHECK(std::log2(err[0] / err[1]) >= 1.9);
}

TEST_CASE("error norms of the exact interpolant") {
  const auto g = grid(ProfileKind::kCylinder, {1.0}, 2.0, 8, 4, 0.0);
  std::vector<double> psi(g->node_count());
  for (int i = 0; i <= g->nx(); ++i) {
    for (int j = 0; j <= g->nr(); ++j) psi[g->index(i, j)] = g->x(i) + 2 * g->r(i, j);
  }
  auto lin = [](double x, double r) { return x + 2 * r; };
  CHECK(l2_error(psi, *g, lin) <= 1e-14);
  CHECK(nodal_max_error(psi, *g, lin) == 0.0);
  auto shifted = [](double x, double r) { return x + 2 * r + 0.5; };
  CHECK(l2_error(psi, *g, shifted) == doctest::Approx(0.5 * std::sqrt(4.0)));
}
