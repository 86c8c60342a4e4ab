#include "axiflow/solver.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace axiflow {

std::string_view to_string(EndData data) {
  return data == EndData::kStreamExtension ? "stream_extension" : "shielded_uniform";
}

EndData end_data_from_string(std::string_view name) {
  if (name == "stream_extension") return EndData::kStreamExtension;
  if (name == "shielded_uniform") return EndData::kShieldedUniform;
  throw std::invalid_argument("unknown end datum '" + std::string(name) + "'");
}

double StreamSolution::m0() const { return 2.0 * std::numbers::pi * m; }

double dirichlet_data(double x, double r, double m, const NozzleProfile& profile) {
  const double f = profile.radius(x);
  if (r < 0.0 || r > f * (1.0 + 1e-14)) {
    throw std::domain_error("dirichlet_data: r outside [0, f(x)]");
  }
  return m * r * r / (f * f);
}

namespace {

double boundary_value(const MappedGrid& grid, int i, int j, double m, EndData end_data) {
  if (j == 0) return 0.0;
  if (j == grid.nr()) return m;
  const double s = grid.sigma(j);
  if (end_data == EndData::kStreamExtension || grid.delta() == 0.0) return m * s * s;
  const double d = grid.delta();
  const double f = grid.wall(i);
  const double r = s * f;
  return m * ((r + d) * (r + d) - d * d) / ((f + d) * (f + d) - d * d);
}

struct PointTerms {
  double gx;
  double gr;
  double t;  // r + δ
  double s;  // |∇ψ|²/t²
};

PointTerms point_terms(const QuadPoint& q, std::span<const double> psi, double delta) {
  double gx = 0.0;
  double gr = 0.0;
  for (int k = 0; k < 4; ++k) {
    gx += psi[q.node[k]] * q.dx[k];
    gr += psi[q.node[k]] * q.dr[k];
  }
  const double t = q.r + delta;
  return {gx, gr, t, (gx * gx + gr * gr) / (t * t)};
}

}  // namespace

std::vector<double> dirichlet_extension(const MappedGrid& grid, double m, EndData end_data) {
  std::vector<double> psi(grid.node_count());
  for (int i = 0; i <= grid.nx(); ++i) {
    for (int j = 0; j <= grid.nr(); ++j) psi[grid.index(i, j)] = boundary_value(grid, i, j, m, end_data);
  }
  return psi;
}

void apply_dirichlet(const MappedGrid& grid, double m, EndData end_data, std::span<double> psi) {
  for (int i = 0; i <= grid.nx(); ++i) {
    for (int j = 0; j <= grid.nr(); ++j) {
      if (grid.is_boundary(i, j)) psi[grid.index(i, j)] = boundary_value(grid, i, j, m, end_data);
    }
  }
}

std::vector<long> interior_numbering(const MappedGrid& grid) {
  std::vector<long> number(grid.node_count(), -1);
  long next = 0;
  for (int i = 1; i < grid.nx(); ++i) {
    for (int j = 1; j < grid.nr(); ++j) number[grid.index(i, j)] = next++;
  }
  return number;
}

double assemble_energy(std::span<const double> psi, const MappedGrid& grid, const GasModel& gas) {
  double energy = 0.0;
  for (const auto& q : grid.quadrature()) {
    const auto p = point_terms(q, psi, grid.delta());
    energy += q.weight * p.t * gas.coenergy(p.s);
  }
  return energy;
}

Eigen::VectorXd assemble_gradient(std::span<const double> psi, const MappedGrid& grid,
                                  const GasModel& gas) {
  const auto number = interior_numbering(grid);
  Eigen::VectorXd grad =
      Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid.nx() - 1) * (grid.nr() - 1));
  for (const auto& q : grid.quadrature()) {
    const auto p = point_terms(q, psi, grid.delta());
    const double c = q.weight * 2.0 * gas.coenergy_derivative(p.s) / p.t;
    for (int k = 0; k < 4; ++k) {
      const long a = number[q.node[k]];
      if (a >= 0) grad[a] += c * (p.gx * q.dx[k] + p.gr * q.dr[k]);
    }
  }
  return grad;
}

namespace {

// Energy, gradient and (optionally) Hessian in one sweep over quadrature
// points, sharing the density solve at each point.
double assemble_all(std::span<const double> psi, const MappedGrid& grid, const GasModel& gas,
                    const std::vector<long>& number, Eigen::VectorXd* grad,
                    std::vector<Eigen::Triplet<double>>* triplets) {
  double energy = 0.0;
  if (grad) grad->setZero();
  if (triplets) triplets->clear();
  for (const auto& q : grid.quadrature()) {
    const auto p = point_terms(q, psi, grid.delta());
    const auto f = gas.coenergy_terms(p.s);
    energy += q.weight * p.t * f.value;
    const double c1 = q.weight * 2.0 * f.d1 / p.t;
    const double c2 = q.weight * 4.0 * f.d2 / (p.t * p.t * p.t);
    double proj[4];
    for (int k = 0; k < 4; ++k) proj[k] = p.gx * q.dx[k] + p.gr * q.dr[k];
    for (int k = 0; k < 4; ++k) {
      const long a = number[q.node[k]];
      if (a < 0) continue;
      if (grad) (*grad)[a] += c1 * proj[k];
      if (!triplets) continue;
      for (int l = 0; l < 4; ++l) {
        const long b = number[q.node[l]];
        if (b < 0) continue;
        const double v = c1 * (q.dx[k] * q.dx[l] + q.dr[k] * q.dr[l]) + c2 * proj[k] * proj[l];
        triplets->emplace_back(a, b, v);
      }
    }
  }
  return energy;
}

Eigen::SparseMatrix<double> to_matrix(Eigen::Index n,
                                      const std::vector<Eigen::Triplet<double>>& triplets) {
  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(triplets.begin(), triplets.end());
  return a;
}

void scan_cutoff(StreamSolution& sol, const GasModel& gas) {
  sol.max_momentum = max_quadrature_momentum(sol.psi, *sol.grid);
  sol.cutoff_active = sol.max_momentum > gas.truncation_start();
}

}  // namespace

double max_quadrature_momentum(std::span<const double> psi, const MappedGrid& grid) {
  double smax = 0.0;
  for (const auto& q : grid.quadrature()) smax = std::max(smax, point_terms(q, psi, grid.delta()).s);
  return smax;
}

Eigen::SparseMatrix<double> assemble_hessian(std::span<const double> psi, const MappedGrid& grid,
                                             const GasModel& gas) {
  const auto number = interior_numbering(grid);
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(grid.quadrature().size() * 16);
  assemble_all(psi, grid, gas, number, nullptr, &triplets);
  return to_matrix(static_cast<Eigen::Index>(grid.nx() - 1) * (grid.nr() - 1), triplets);
}

StreamSolution newton_solve(std::shared_ptr<const MappedGrid> grid, const GasModel& gas, double m,
                            const SolverOptions& options, std::span<const double> init) {
  if (!(options.tolerance > 0.0)) throw std::invalid_argument("newton_solve: tolerance must be positive");
  if (!(m >= 0.0)) throw std::invalid_argument("newton_solve: m must be nonnegative");
  const MappedGrid& g = *grid;
  StreamSolution sol;
  sol.grid = grid;
  sol.m = m;
  sol.end_data = options.end_data;
  if (init.empty()) {
    sol.psi = dirichlet_extension(g, m, options.end_data);
  } else {
    if (init.size() != g.node_count()) throw std::invalid_argument("newton_solve: init has wrong size");
    sol.psi.assign(init.begin(), init.end());
    auto expected = sol.psi;
    apply_dirichlet(g, m, options.end_data, expected);
    for (std::size_t k = 0; k < expected.size(); ++k) {
      if (std::abs(expected[k] - sol.psi[k]) > 1e-12 * std::max(1.0, m)) {
        throw std::invalid_argument("newton_solve: init violates the Dirichlet datum");
      }
    }
    sol.psi = std::move(expected);
  }

  const auto number = interior_numbering(g);
  const Eigen::Index n = static_cast<Eigen::Index>(g.nx() - 1) * (g.nr() - 1);
  Eigen::VectorXd grad(n);
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(g.quadrature().size() * 16);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt;
  bool analyzed = false;

  const double tol = options.tolerance * std::max(1.0, m);
  double energy = assemble_all(sol.psi, g, gas, number, &grad, &triplets);
  sol.energy_history.push_back(energy);
  std::vector<double> trial(sol.psi.size());

  int it = 0;
  for (; it < options.max_iterations; ++it) {
    if (grad.norm() <= tol) {
      sol.converged = true;
      break;
    }
    const auto hess = to_matrix(n, triplets);
    if (!analyzed) {
      ldlt.analyzePattern(hess);
      analyzed = true;
    }
    ldlt.factorize(hess);
    if (ldlt.info() != Eigen::Success) throw LinearSolveError("newton_solve: Hessian factorization failed");
    const Eigen::VectorXd dir = ldlt.solve(-grad);
    if (ldlt.info() != Eigen::Success || !dir.allFinite()) {
      throw LinearSolveError("newton_solve: Newton system solve failed");
    }
    const double slope = grad.dot(dir);

    const auto take_step = [&](double step) {
      trial = sol.psi;
      for (std::size_t k = 0; k < trial.size(); ++k) {
        if (number[k] >= 0) trial[k] += step * dir[number[k]];
      }
    };

    // Once the predicted decrease drops below the rounding noise of J (a sum
    // over every quadrature point), energy comparisons carry no information;
    // the full Newton step is then accepted on gradient-norm decrease.
    const double noise = 1e-12 * std::max(1.0, std::abs(energy));
    bool accepted = false;
    if (-slope <= noise) {
      take_step(1.0);
      Eigen::VectorXd trial_grad(n);
      const double trial_energy = assemble_all(trial, g, gas, number, &trial_grad, nullptr);
      if (trial_grad.norm() < grad.norm() && trial_energy <= energy + noise) {
        sol.psi.swap(trial);
        energy = assemble_all(sol.psi, g, gas, number, &grad, &triplets);
        sol.energy_history.push_back(energy);
        continue;
      }
    }
    double step = 1.0;
    for (int b = 0; b <= options.max_backtracks; ++b) {
      take_step(step);
      const double trial_energy = assemble_energy(trial, g, gas);
      if (trial_energy <= energy + options.sufficient_decrease * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    sol.psi.swap(trial);
    energy = assemble_all(sol.psi, g, gas, number, &grad, &triplets);
    sol.energy_history.push_back(energy);
  }
  if (!sol.converged && grad.norm() <= tol) sol.converged = true;
  sol.iterations = it;
  sol.energy = energy;
  sol.grad_norm = grad.norm();
  scan_cutoff(sol, gas);
  return sol;
}

ResidualNorms pde_residual(std::span<const double> psi, const MappedGrid& grid,
                           const GasModel& gas, double end_margin) {
  const int nx = grid.nx();
  const int nr = grid.nr();
  const double d = grid.delta();
  std::vector<double> qx(grid.node_count(), 0.0);
  std::vector<double> qr(grid.node_count(), 0.0);
  for (int i = 0; i <= nx; ++i) {
    for (int j = 1; j <= nr; ++j) {
      const auto gr = grid.gradient(psi, i, j);
      const double t = grid.r(i, j) + d;
      const double s = (gr.dx * gr.dx + gr.dr * gr.dr) / (t * t);
      const double h = gas.truncated_density_from_momentum(s);
      qx[grid.index(i, j)] = gr.dx / (t * h);
      qr[grid.index(i, j)] = gr.dr / (t * h);
    }
  }
  ResidualNorms out;
  double sum = 0.0;
  const double x_limit = grid.half_length() - end_margin;
  for (int i = 2; i <= nx - 2; ++i) {
    if (std::abs(grid.x(i)) > x_limit) continue;
    for (int j = 2; j <= nr - 2; ++j) {
      const auto a = grid.gradient(qx, i, j);
      const auto b = grid.gradient(qr, i, j);
      const double div = a.dx + b.dr;
      out.max = std::max(out.max, std::abs(div));
      sum += div * div * grid.node_area(i, j);
    }
  }
  out.l2 = std::sqrt(sum);
  return out;
}

ResidualNorms pde_residual(const StreamSolution& solution, const GasModel& gas,
                           double end_margin) {
  return pde_residual(solution.psi, *solution.grid, gas, end_margin);
}

double l2_error(std::span<const double> psi, const MappedGrid& grid,
                const std::function<double(double, double)>& exact) {
  static constexpr double kNodes[3] = {0.1127016653792583, 0.5, 0.8872983346207417};
  static constexpr double kWeights[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
  const double hx = grid.h_xi();
  const double hs = grid.h_sigma();
  const auto& profile = grid.profile();
  double sum = 0.0;
  for (int i = 0; i < grid.nx(); ++i) {
    for (int j = 0; j < grid.nr(); ++j) {
      const double p00 = psi[grid.index(i, j)];
      const double p10 = psi[grid.index(i + 1, j)];
      const double p01 = psi[grid.index(i, j + 1)];
      const double p11 = psi[grid.index(i + 1, j + 1)];
      for (int a = 0; a < 3; ++a) {
        const double xi = grid.xi(i) + kNodes[a] * hx;
        const double f = profile.radius(xi);
        for (int b = 0; b < 3; ++b) {
          const double sigma = grid.sigma(j) + kNodes[b] * hs;
          const double u = kNodes[a];
          const double v = kNodes[b];
          const double ph = (1 - u) * (1 - v) * p00 + u * (1 - v) * p10 + (1 - u) * v * p01 + u * v * p11;
          const double e = ph - exact(xi, sigma * f);
          sum += kWeights[a] * kWeights[b] * hx * hs * f * e * e;
        }
      }
    }
  }
  return std::sqrt(sum);
}

double nodal_max_error(std::span<const double> psi, const MappedGrid& grid,
                       const std::function<double(double, double)>& exact) {
  double err = 0.0;
  for (int i = 0; i <= grid.nx(); ++i) {
    for (int j = 0; j <= grid.nr(); ++j) {
      err = std::max(err, std::abs(psi[grid.index(i, j)] - exact(grid.x(i), grid.r(i, j))));
    }
  }
  return err;
}

}  // namespace axiflow
