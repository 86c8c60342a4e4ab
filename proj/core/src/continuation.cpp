#include "axiflow/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>

namespace axiflow {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double max_abs_difference(std::span<const double> a, std::span<const double> b) {
  double out = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) out = std::max(out, std::abs(a[k] - b[k]));
  return out;
}

StreamSolution solve_or_throw(std::shared_ptr<const MappedGrid> grid, const GasModel& gas, double m,
                              const SolverOptions& options, std::span<const double> init,
                              const char* who) {
  auto sol = newton_solve(std::move(grid), gas, m, options, init);
  if (!sol.converged) {
    throw std::runtime_error(std::string(who) + ": Newton did not converge at m = " +
                             std::to_string(m) + " (gradient norm " +
                             std::to_string(sol.grad_norm) + ")");
  }
  return sol;
}

double compact_l2(const MappedGrid& g, const Compact& c, const std::vector<double>& a0,
                  const std::vector<double>& a1, const std::vector<double>& b0,
                  const std::vector<double>& b1) {
  double sum = 0.0;
  for (int i = 0; i <= g.nx(); ++i) {
    if (g.x(i) < c.x0 || g.x(i) > c.x1) continue;
    for (int j = 0; j <= g.nr(); ++j) {
      const double r = g.r(i, j);
      if (r < c.r0 || r > c.r1) continue;
      const std::size_t k = g.index(i, j);
      const double da = a1[k] - a0[k];
      const double db = b1[k] - b0[k];
      sum += (da * da + db * db) * g.node_area(i, j);
    }
  }
  return std::sqrt(sum);
}

bool nonincreasing(const std::vector<double>& v) {
  for (std::size_t k = 1; k < v.size(); ++k) {
    if (v[k] > v[k - 1]) return false;
  }
  return true;
}

}  // namespace

std::shared_ptr<const MappedGrid> GridSpec::build(double delta) const {
  return std::make_shared<const MappedGrid>(profile, half_length, nx, nr, delta, rule);
}

std::vector<double> scaled_start(const StreamSolution& previous, const MappedGrid& grid, double m,
                                 EndData end_data) {
  std::vector<double> psi;
  if (previous.m > 0.0 && previous.psi.size() == grid.node_count()) {
    psi = previous.psi;
    const double scale = m / previous.m;
    for (double& v : psi) v *= scale;
    apply_dirichlet(grid, m, end_data, psi);
  } else {
    psi = dirichlet_extension(grid, m, end_data);
  }
  return psi;
}

ShrinkResult shrink_delta(const GridSpec& spec, const GasModel& gas, double m,
                          const DeltaSchedule& schedule, const SolverOptions& options) {
  if (!(schedule.factor > 0.0 && schedule.factor < 1.0)) {
    throw std::invalid_argument("shrink_delta: schedule factor must lie in (0, 1)");
  }
  if (!(schedule.tolerance > 0.0)) throw std::invalid_argument("shrink_delta: tolerance must be positive");
  const double delta0 = schedule.delta0 > 0.0 ? schedule.delta0 : 0.1 * spec.profile.min_radius();
  ShrinkResult out;
  double delta = delta0;
  out.solution = solve_or_throw(spec.build(delta), gas, m, options, {}, "shrink_delta");
  out.deltas.push_back(delta);
  for (int k = 0; k < schedule.max_steps; ++k) {
    delta *= schedule.factor;
    auto grid = spec.build(delta);
    const auto start = scaled_start(out.solution, *grid, m, options.end_data);
    auto next = solve_or_throw(grid, gas, m, options, start, "shrink_delta");
    const double diff = max_abs_difference(next.psi, out.solution.psi);
    out.solution = std::move(next);
    out.deltas.push_back(delta);
    out.differences.push_back(diff);
    if (diff <= schedule.tolerance * m) {
      out.converged = true;
      break;
    }
  }
  return out;
}

ExtendResult extend_domain(const GridSpec& spec, const GasModel& gas, double m, double delta,
                           double tolerance, double l_max, const SolverOptions& options) {
  ExtendResult out;
  GridSpec current = spec;
  auto prev = solve_or_throw(current.build(delta), gas, m, options, {}, "extend_domain");
  while (current.half_length * 2.0 <= l_max) {
    GridSpec next_spec = current;
    next_spec.half_length *= 2.0;
    next_spec.nx *= 2;
    auto next = solve_or_throw(next_spec.build(delta), gas, m, options, {}, "extend_domain");
    // Station i of the short domain is station i + nx/2 of the long one.
    const MappedGrid& a = *prev.grid;
    const MappedGrid& b = *next.grid;
    const int shift = current.nx / 2;
    double diff = 0.0;
    for (int i = 0; i <= a.nx(); ++i) {
      for (int j = 0; j <= a.nr(); ++j) {
        diff = std::max(diff, std::abs(prev.psi[a.index(i, j)] - next.psi[b.index(i + shift, j)]));
      }
    }
    out.steps.push_back({current.half_length, current.nx, diff});
    if (diff <= tolerance * m) {
      out.certified = true;
      out.certified_length = current.half_length;
      return out;
    }
    current = next_spec;
    prev = std::move(next);
  }
  out.steps.push_back({current.half_length, current.nx, std::nan("")});
  return out;
}

bool SweepResult::monotone(double tol) const {
  for (std::size_t k = 1; k < entries.size(); ++k) {
    if (entries[k].max_mach < entries[k - 1].max_mach - tol) return false;
    if (entries[k].wall_speed_max < entries[k - 1].wall_speed_max - tol) return false;
  }
  return true;
}

SweepResult mass_flux_sweep(const GridSpec& spec, const GasModel& gas, double delta,
                            std::span<const double> m0_values, const SweepOptions& options) {
  for (std::size_t k = 1; k < m0_values.size(); ++k) {
    if (!(m0_values[k] >= m0_values[k - 1])) {
      throw std::invalid_argument("mass_flux_sweep: fluxes must be ascending");
    }
  }
  if (!m0_values.empty() && m0_values.front() < 0.0) {
    throw std::invalid_argument("mass_flux_sweep: fluxes must be nonnegative");
  }
  SweepResult out;
  out.delta = delta;
  out.half_length = spec.half_length;
  out.nx = spec.nx;
  out.nr = spec.nr;
  out.entries.resize(m0_values.size());
  const auto grid = spec.build(delta);
  const Compact compact = options.compact.value_or(default_compact(*grid));

  const auto run_chain = [&](std::size_t begin, std::size_t end) {
    StreamSolution prev;
    for (std::size_t k = begin; k < end; ++k) {
      SweepEntry& e = out.entries[k];
      e.m0 = m0_values[k];
      const double m = e.m0 / kTwoPi;
      try {
        const auto start = scaled_start(prev, *grid, m, options.solver.end_data);
        auto sol = newton_solve(grid, gas, m, options.solver, start);
        e.converged = sol.converged;
        e.iterations = sol.iterations;
        e.cutoff_active = sol.cutoff_active;
        const auto field = velocity_from_stream(sol, gas);
        const auto rep = diagnose(field, gas, options.thresholds, compact);
        e.max_mach = rep.max_mach;
        e.q_min = rep.positivity.min_speed;
        e.min_u = rep.positivity.min_u;
        e.wall_speed_max = rep.wall_speed_max;
        e.flux_drift = rep.flux_drift;
        e.farfield_left = rep.far_field.left;
        e.farfield_right = rep.far_field.right;
        e.diagnostics_passed = sol.converged && rep.passed();
        if (sol.converged) prev = std::move(sol);
      } catch (const std::exception& ex) {
        e.error = ex.what();
      }
    }
  };

  const std::size_t n = m0_values.size();
  const std::size_t jobs =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::max(options.jobs, 1)), 1, std::max<std::size_t>(n, 1));
  if (jobs == 1) {
    run_chain(0, n);
  } else {
    std::vector<std::thread> workers;
    for (std::size_t c = 0; c < jobs; ++c) {
      workers.emplace_back(run_chain, c * n / jobs, (c + 1) * n / jobs);
    }
    for (auto& w : workers) w.join();
  }
  return out;
}

bool cutoff_predicate(const StreamSolution& solution, const GasModel& gas) {
  if (solution.cutoff_active) return true;
  const auto field = velocity_from_stream(solution, gas);
  return max_mach(field) >= gas.m_tilde();
}

CriticalFluxEstimate find_critical_flux(const GridSpec& spec, const GasModel& gas, double delta,
                                        const CriticalSearchOptions& options) {
  if (!(options.upper > 0.0)) throw std::invalid_argument("find_critical_flux: upper must be positive");
  if (!(options.tolerance > 0.0)) throw std::invalid_argument("find_critical_flux: tolerance must be positive");
  CriticalFluxEstimate out;
  out.delta = delta;
  out.half_length = spec.half_length;
  out.nx = spec.nx;
  out.nr = spec.nr;
  const auto grid = spec.build(delta);

  out.lo_solution = solve_or_throw(grid, gas, 0.0, options.solver, {}, "find_critical_flux");
  ++out.solves;

  // Returns true on activation; a converged inactive solve becomes the new lo.
  const auto probe = [&](double m0) {
    const double m = m0 / kTwoPi;
    const auto start = scaled_start(out.lo_solution, *grid, m, options.solver.end_data);
    auto sol = newton_solve(grid, gas, m, options.solver, start);
    ++out.solves;
    if (!sol.converged) {
      throw std::runtime_error("find_critical_flux: Newton did not converge at m0 = " +
                               std::to_string(m0));
    }
    if (cutoff_predicate(sol, gas)) return true;
    out.lo = m0;
    out.lo_solution = std::move(sol);
    return false;
  };

  double hi = options.upper;
  while (!probe(hi)) {
    if (hi >= options.ceiling) {
      out.open_upper = true;
      out.hi = hi;
      return out;
    }
    hi = std::min(2.0 * hi, options.ceiling);
  }
  out.hi = hi;
  while (out.hi - out.lo > options.tolerance * out.hi) {
    const double mid = 0.5 * (out.lo + out.hi);
    if (probe(mid)) out.hi = mid;
  }
  return out;
}

std::vector<double> sonic_sequence(double lo, int terms) {
  std::vector<double> out;
  for (int n = 0; n < terms; ++n) out.push_back(lo * (1.0 - 0.2 * std::ldexp(1.0, -n)));
  return out;
}

SonicStudy sonic_limit_study(const GridSpec& spec, const GasModel& gas, double delta,
                             std::span<const double> m0_values, const Compact& compact,
                             const SolverOptions& options) {
  for (std::size_t k = 1; k < m0_values.size(); ++k) {
    if (!(m0_values[k] >= m0_values[k - 1])) {
      throw std::invalid_argument("sonic_limit_study: fluxes must be nondecreasing");
    }
  }
  SonicStudy out;
  const auto grid = spec.build(delta);
  const auto bumps = standard_bumps(compact);
  StreamSolution prev_sol;
  FlowField prev;
  std::vector<double> prev_mu;
  std::vector<double> prev_mv;
  for (std::size_t k = 0; k < m0_values.size(); ++k) {
    const double m = m0_values[k] / kTwoPi;
    const auto start = scaled_start(prev_sol, *grid, m, options.end_data);
    auto sol = solve_or_throw(grid, gas, m, options, start, "sonic_limit_study");
    auto field = velocity_from_stream(sol, gas);
    std::vector<double> mu(field.U.size());
    std::vector<double> mv(field.U.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
      mu[i] = field.rho[i] * field.U[i];
      mv[i] = field.rho[i] * field.V[i];
    }
    out.m0.push_back(m0_values[k]);
    out.max_mach.push_back(max_mach(field));
    out.entropy.push_back(entropy_pair_residual(field, gas, bumps).max());
    if (k > 0) {
      out.cauchy_velocity.push_back(compact_l2(*grid, compact, prev.U, field.U, prev.V, field.V));
      out.cauchy_flux.push_back(compact_l2(*grid, compact, prev_mu, mu, prev_mv, mv));
    }
    prev = std::move(field);
    prev_mu = std::move(mu);
    prev_mv = std::move(mv);
    prev_sol = std::move(sol);
  }
  out.velocity_decreasing = nonincreasing(out.cauchy_velocity);
  out.flux_decreasing = nonincreasing(out.cauchy_flux);
  out.entropy_bounded = true;
  for (double e : out.entropy) {
    if (e > 2.0 * out.entropy.front()) out.entropy_bounded = false;
  }
  return out;
}

}  // namespace axiflow
