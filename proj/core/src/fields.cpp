#include "axiflow/fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace axiflow {
namespace {

constexpr double kPi = std::numbers::pi;

double bump_profile(double t) {
  if (std::abs(t) >= 1.0) return 0.0;
  const double u = 1.0 - t * t;
  return u * u * u * u;
}

double bump_profile_d1(double t) {
  if (std::abs(t) >= 1.0) return 0.0;
  const double u = 1.0 - t * t;
  return -8.0 * t * u * u * u;
}

std::string at(double x, double r) {
  return "(x=" + std::to_string(x) + ", r=" + std::to_string(r) + ")";
}

}  // namespace

double FlowField::m0() const { return 2.0 * kPi * m; }

double AngleBounds::excess() const {
  return std::max({0.0, lower - min, max - upper});
}

FlowField velocity_from_stream(const StreamSolution& solution, const GasModel& gas) {
  return velocity_from_stream(solution.grid, solution.psi, solution.m, solution.cutoff_active, gas);
}

FlowField velocity_from_stream(std::shared_ptr<const MappedGrid> grid, std::span<const double> psi,
                               double m, bool truncated, const GasModel& gas) {
  const MappedGrid& g = *grid;
  if (psi.size() != g.node_count()) throw std::invalid_argument("velocity_from_stream: size mismatch");
  FlowField out;
  out.grid = grid;
  out.m = m;
  out.truncated = truncated;
  out.psi.assign(psi.begin(), psi.end());
  const std::size_t n = g.node_count();
  for (auto* v : {&out.U, &out.V, &out.rho, &out.q, &out.mach, &out.omega}) v->assign(n, 0.0);

  // Mass-flux components ρU, ρV; the axis row is filled by even
  // extrapolation ρU(r) ≈ A + B r² from rows 1 and 2.
  std::vector<double> mu(n, 0.0);
  std::vector<double> mv(n, 0.0);
  const double d = g.delta();
  for (int i = 0; i <= g.nx(); ++i) {
    for (int j = 1; j <= g.nr(); ++j) {
      const auto gr = g.gradient(psi, i, j);
      const double t = g.r(i, j) + d;
      mu[g.index(i, j)] = gr.dr / t;
      mv[g.index(i, j)] = -gr.dx / t;
    }
    const double r1 = g.r(i, 1) * g.r(i, 1);
    const double r2 = g.r(i, 2) * g.r(i, 2);
    mu[g.index(i, 0)] = (r2 * mu[g.index(i, 1)] - r1 * mu[g.index(i, 2)]) / (r2 - r1);
    mv[g.index(i, 0)] = 0.0;
  }

  for (int i = 0; i <= g.nx(); ++i) {
    for (int j = 0; j <= g.nr(); ++j) {
      const std::size_t k = g.index(i, j);
      const double s = mu[k] * mu[k] + mv[k] * mv[k];
      double rho;
      if (truncated) {
        rho = gas.truncated_density_from_momentum(s);
      } else if (s <= 1.0) {
        rho = gas.density_from_momentum(s);
      } else {
        throw std::domain_error("velocity_from_stream: momentum " + std::to_string(s) +
                                " exceeds the sonic value at " + at(g.x(i), g.r(i, j)) +
                                " with the cutoff inactive");
      }
      out.rho[k] = rho;
      out.U[k] = mu[k] / rho;
      out.V[k] = mv[k] / rho;
      out.q[k] = std::hypot(out.U[k], out.V[k]);
      out.mach[k] = out.q[k] / std::sqrt(gas.sound_speed_sq(rho));
      out.omega[k] = std::atan2(out.V[k], out.U[k]);
    }
  }
  return out;
}

AngleBounds flow_angle(const FlowField& field, double end_margin) {
  const MappedGrid& g = *field.grid;
  const auto& profile = g.profile();
  AngleBounds b;
  b.lower = std::min(std::atan(profile.min_slope()), 0.0);
  b.upper = std::max(std::atan(profile.max_slope()), 0.0);
  b.min = std::numeric_limits<double>::infinity();
  b.max = -std::numeric_limits<double>::infinity();
  const double x_limit = g.half_length() - end_margin;
  for (int i = 0; i <= g.nx(); ++i) {
    if (std::abs(g.x(i)) > x_limit) continue;
    for (int j = 0; j <= g.nr(); ++j) {
      const std::size_t k = g.index(i, j);
      if (!(field.U[k] > 0.0)) {
        if (field.m == 0.0) continue;
        throw std::domain_error("flow_angle: U = " + std::to_string(field.U[k]) + " at " +
                                at(g.x(i), g.r(i, j)));
      }
      b.min = std::min(b.min, field.omega[k]);
      b.max = std::max(b.max, field.omega[k]);
    }
  }
  if (b.min > b.max) b.min = b.max = 0.0;
  return b;
}

double mass_flux_at_station(const FlowField& field, int station) {
  const MappedGrid& g = *field.grid;
  if (station < 0 || station > g.nx()) throw std::out_of_range("mass_flux_at_station: station");
  double sum = 0.0;
  for (int j = 0; j < g.nr(); ++j) {
    const std::size_t a = g.index(station, j);
    const std::size_t b = g.index(station, j + 1);
    const double fa = field.rho[a] * field.U[a] * (g.r(station, j) + g.delta());
    const double fb = field.rho[b] * field.U[b] * (g.r(station, j + 1) + g.delta());
    sum += 0.5 * (fa + fb) * (g.r(station, j + 1) - g.r(station, j));
  }
  return 2.0 * kPi * sum;
}

double mass_flux_at_station(const FlowField& field, double x) {
  const MappedGrid& g = *field.grid;
  if (x < -g.half_length() || x > g.half_length()) {
    throw std::out_of_range("mass_flux_at_station: x outside [-L, L]");
  }
  return mass_flux_at_station(field, static_cast<int>(std::lround((x + g.half_length()) / g.h_xi())));
}

double flux_drift(const FlowField& field) {
  const double m0 = field.m0();
  double drift = 0.0;
  for (int i = 0; i <= field.grid->nx(); ++i) {
    const double dev = std::abs(mass_flux_at_station(field, i) - m0);
    drift = std::max(drift, m0 > 0.0 ? dev / m0 : dev);
  }
  return drift;
}

FarFieldError far_field_error(const FlowField& field, const GasModel& gas, double m0,
                              double margin) {
  const MappedGrid& g = *field.grid;
  const auto& profile = g.profile();
  const double l = g.half_length();
  if (!(margin >= 0.0 && margin < l)) throw std::invalid_argument("far_field_error: margin");
  const auto limit = [&](double radius) {
    const double s = m0 * m0 / (kPi * kPi * std::pow(radius, 4));
    if (s > 1.0) return std::numeric_limits<double>::quiet_NaN();
    return std::sqrt(gas.speed_from_momentum(s));
  };
  const auto deviation = [&](double x, double u_inf) {
    if (std::isnan(u_inf)) return std::numeric_limits<double>::infinity();
    const int i = static_cast<int>(std::lround((x + l) / g.h_xi()));
    double err = 0.0;
    for (int j = 0; j <= g.nr(); ++j) {
      const std::size_t k = g.index(i, j);
      err = std::max(err, std::hypot(field.U[k] - u_inf, field.V[k]));
    }
    return err;
  };
  FarFieldError out;
  out.u_left = limit(profile.left_radius());
  out.u_right = limit(profile.right_radius());
  out.left = deviation(-(l - margin), out.u_left);
  out.right = deviation(l - margin, out.u_right);
  return out;
}

PositivityReport positivity_check(const FlowField& field) {
  const MappedGrid& g = *field.grid;
  PositivityReport out;
  out.min_u = std::numeric_limits<double>::infinity();
  out.min_speed = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= g.nx(); ++i) {
    for (int j = 0; j <= g.nr(); ++j) {
      const std::size_t k = g.index(i, j);
      if (field.U[k] < out.min_u) {
        out.min_u = field.U[k];
        out.x = g.x(i);
        out.r = g.r(i, j);
      }
      out.min_speed = std::min(out.min_speed, field.q[k]);
    }
  }
  out.pass = field.m == 0.0 || out.min_u > 0.0;
  return out;
}

Compact default_compact(const MappedGrid& grid) {
  const double l = grid.half_length();
  const double b = grid.profile().min_radius();
  return {-0.5 * l, 0.5 * l, 0.2 * b, 0.8 * b};
}

std::vector<TestBump> standard_bumps(const Compact& c) {
  const double xc = 0.5 * (c.x0 + c.x1);
  const double rc = 0.5 * (c.r0 + c.r1);
  const double wx = 0.25 * (c.x1 - c.x0);
  const double wr = 0.25 * (c.r1 - c.r0);
  return {{xc, rc, 2.0 * wx, 2.0 * wr},
          {xc - wx, rc - wr, wx, wr},
          {xc + wx, rc - wr, wx, wr},
          {xc - wx, rc + wr, wx, wr},
          {xc + wx, rc + wr, wx, wr}};
}

EntropyResiduals entropy_pair_residual(const FlowField& field, const GasModel& gas,
                                       std::span<const TestBump> bumps) {
  const MappedGrid& g = *field.grid;
  const auto& profile = g.profile();
  const double l = g.half_length();
  for (const auto& bump : bumps) {
    const double xa = bump.xc - bump.wx;
    const double xb = bump.xc + bump.wx;
    const double ra = bump.rc - bump.wr;
    const double rb = bump.rc + bump.wr;
    bool inside = bump.wx > 0.0 && bump.wr > 0.0 && xa > -l && xb < l && ra > 0.0;
    for (int k = 0; inside && k <= 64; ++k) {
      inside = rb < profile.radius(xa + (xb - xa) * k / 64.0);
    }
    if (!inside) {
      throw std::invalid_argument("entropy_pair_residual: test bump is not interior to the domain");
    }
  }
  EntropyResiduals out;
  for (const auto& bump : bumps) {
    double plus = 0.0;
    double minus = 0.0;
    for (int i = 0; i <= g.nx(); ++i) {
      const double tx = (g.x(i) - bump.xc) / bump.wx;
      if (std::abs(tx) >= 1.0) continue;
      const double px = bump_profile(tx);
      const double dpx = bump_profile_d1(tx) / bump.wx;
      for (int j = 0; j <= g.nr(); ++j) {
        const double tr = (g.r(i, j) - bump.rc) / bump.wr;
        if (std::abs(tr) >= 1.0) continue;
        const double pr = bump_profile(tr);
        const double chi = px * pr;
        const double chi_x = dpx * pr;
        const double chi_r = px * bump_profile_d1(tr) / bump.wr;
        const std::size_t k = g.index(i, j);
        const double rho = field.rho[k];
        const double u = field.U[k];
        const double v = field.V[k];
        const double p = gas.pressure(rho);
        const double t = g.r(i, j) + g.delta();
        const double w = g.node_area(i, j);
        plus += w * ((rho * u * u + p) * chi_x + rho * u * v * chi_r - rho * u * v / t * chi);
        minus += w * (rho * u * v * chi_x + (rho * v * v + p) * chi_r - rho * v * v / t * chi);
      }
    }
    out.plus = std::max(out.plus, std::abs(plus));
    out.minus = std::max(out.minus, std::abs(minus));
  }
  return out;
}

IrrotationalityResidual irrotationality_residual(const FlowField& field, double end_margin) {
  const MappedGrid& g = *field.grid;
  IrrotationalityResidual out;
  const double x_limit = g.half_length() - end_margin;
  double sum = 0.0;
  for (int i = 1; i < g.nx(); ++i) {
    if (std::abs(g.x(i)) > x_limit) continue;
    for (int j = 1; j < g.nr(); ++j) {
      const double curl = g.gradient(field.U, i, j).dr - g.gradient(field.V, i, j).dx;
      out.max = std::max(out.max, std::abs(curl));
      sum += curl * curl * g.node_area(i, j);
    }
  }
  out.l2 = std::sqrt(sum);
  return out;
}

Sample3d to_3d_sample(const FlowField& field, double x, double y, double z) {
  const MappedGrid& g = *field.grid;
  const double l = g.half_length();
  const double r = std::hypot(y, z);
  if (!(x >= -l && x <= l)) throw std::domain_error("to_3d_sample: x outside [-L, L]");
  const double f = g.profile().radius(x);
  if (r > f * (1.0 + 1e-12)) throw std::domain_error("to_3d_sample: point outside the nozzle");
  const double a = (x + l) / g.h_xi();
  const double b = std::min(r / f, 1.0) / g.h_sigma();
  const int i = std::min(static_cast<int>(a), g.nx() - 1);
  const int j = std::min(static_cast<int>(b), g.nr() - 1);
  const double u = a - i;
  const double v = b - j;
  const auto lerp = [&](const std::vector<double>& q) {
    return (1 - u) * (1 - v) * q[g.index(i, j)] + u * (1 - v) * q[g.index(i + 1, j)] +
           (1 - u) * v * q[g.index(i, j + 1)] + u * v * q[g.index(i + 1, j + 1)];
  };
  const double rho = lerp(field.rho);
  const double ux = lerp(field.U);
  if (r == 0.0) return {rho, ux, 0.0, 0.0};
  const double vr = lerp(field.V);
  return {rho, ux, vr * y / r, vr * z / r};
}

double wall_speed_max(const FlowField& field) {
  const MappedGrid& g = *field.grid;
  double out = 0.0;
  for (int i = 0; i <= g.nx(); ++i) {
    const auto gr = g.gradient(field.psi, i, g.nr());
    out = std::max(out, std::hypot(gr.dx, gr.dr));
  }
  return out;
}

double max_mach(const FlowField& field) {
  return field.mach.empty() ? 0.0 : *std::max_element(field.mach.begin(), field.mach.end());
}

std::vector<DiagnosticCheck> DiagnosticsReport::checks() const {
  const auto& t = thresholds;
  std::vector<DiagnosticCheck> out;
  out.push_back({"max_principle", max_principle_violation, t.max_principle,
                 max_principle_violation <= t.max_principle});
  out.push_back({"barrier", barrier_violation, barrier_slack, barrier_violation <= barrier_slack});
  out.push_back({"positivity", positivity.min_u, 0.0, positivity.pass});
  out.push_back({"angle", angle_defined ? angle.excess() : std::numeric_limits<double>::infinity(),
                 t.angle, angle_defined && angle.excess() <= t.angle});
  out.push_back({"flux_drift", flux_drift, t.flux_drift, flux_drift <= t.flux_drift});
  const double ff = std::max(far_field.left, far_field.right);
  out.push_back({"far_field", ff, t.far_field, ff <= t.far_field});
  out.push_back({"entropy", entropy.max(), t.entropy, entropy.max() <= t.entropy});
  out.push_back({"irrotationality", irrotationality.l2, t.irrotationality,
                 irrotationality.l2 <= t.irrotationality});
  out.push_back({"subsonic", max_mach, 1.0, !cutoff_active && max_mach < 1.0});
  return out;
}

bool DiagnosticsReport::passed() const {
  for (const auto& c : checks()) {
    if (!c.pass) return false;
  }
  return true;
}

DiagnosticsReport diagnose(const FlowField& field, const GasModel& gas,
                           const DiagnosticThresholds& thresholds, const Compact& compact) {
  const MappedGrid& g = *field.grid;
  DiagnosticsReport rep;
  rep.thresholds = thresholds;
  rep.m0 = field.m0();
  rep.cutoff_active = field.truncated;
  const double b = g.profile().min_radius();
  const double d = g.delta();
  for (int i = 0; i <= g.nx(); ++i) {
    for (int j = 0; j <= g.nr(); ++j) {
      const double psi = field.psi[g.index(i, j)];
      rep.max_principle_violation =
          std::max({rep.max_principle_violation, -psi, psi - field.m});
      const double t = g.r(i, j) + d;
      rep.barrier_violation = std::max(rep.barrier_violation, psi - field.m * t * t / (b * b));
    }
  }
  const double h = g.mesh_size();
  rep.barrier_slack = thresholds.barrier_coefficient * h * h;
  rep.positivity = positivity_check(field);
  try {
    rep.angle = flow_angle(field, thresholds.end_margin);
  } catch (const std::domain_error&) {
    rep.angle_defined = false;
  }
  rep.flux_drift = flux_drift(field);
  rep.far_field = far_field_error(field, gas, rep.m0, thresholds.far_field_margin);
  const auto bumps = standard_bumps(compact);
  rep.entropy = entropy_pair_residual(field, gas, bumps);
  rep.irrotationality = irrotationality_residual(field, thresholds.end_margin);
  rep.max_mach = max_mach(field);
  rep.wall_speed_max = wall_speed_max(field);
  return rep;
}

}  // namespace axiflow
