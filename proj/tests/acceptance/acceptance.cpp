// Acceptance suite. One line per criterion; nonzero exit if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "axiflow/app.hpp"
#include "axiflow/continuation.hpp"
#include "axiflow/fields.hpp"
#include "axiflow/gas.hpp"
#include "axiflow/nozzle.hpp"
#include "axiflow/solver.hpp"

using namespace axiflow;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;
int failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d %s: %s\n", pass ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return d;
}

void gas_identities() {
  double inv = 0.0, bern = 0.0, nu = 1e300, lam = 0.0;
  bool bounds_ok = true;
  for (double g : {1.2, 1.4, 5.0 / 3.0}) {
    const GasModel gas(g);
    for (int i = 0; i < 10000; ++i) {
      const double q2 = i / 10000.0;
      const double rho = gas.density_from_speed(q2);
      inv = std::max(inv, std::abs(gas.density_from_momentum(gas.momentum_from_speed(q2)) - rho) / rho);
      bern = std::max(bern, std::abs(gas.bernoulli_residual(q2, rho)));
    }
    const auto b = gas.ellipticity_bounds();
    bounds_ok = bounds_ok && b.nu > 0.0;
    const double s_max = 2.0 * gas.truncation_end();
    for (int i = 0; i <= 10000; ++i) {
      const double s = s_max * i / 10000.0;
      const double h = gas.truncated_density_from_momentum(s);
      const double c = h * h / (h - 2.0 * s * gas.truncated_density_derivative(s));
      nu = std::min(nu, c);
      lam = std::max(lam, c);
      if (c < b.nu * (1 - 1e-12) || c > b.lambda * (1 + 1e-12)) bounds_ok = false;
    }
  }
  report(1, "gas identities", inv <= 1e-12 && bern <= 1e-10 && bounds_ok,
         fmt("max |H(G)-g|/g %.2e, Bernoulli %.2e, coefficient range [%.6f, %.6f] inside bounds: %s", inv, bern,
             nu, lam, bounds_ok ? "yes" : "no"));
}

void cylinder_exactness() {
  const GasModel gas;
  bool pass = true;
  std::string detail;
  for (double a : {0.8, 1.0}) {
    for (double d : {0.05, 0.0125}) {
      const double m = 0.5 / (2 * kPi);
      auto exact = [&](double, double r) { return m * ((r + d) * (r + d) - d * d) / ((a + d) * (a + d) - d * d); };
      SolverOptions opt;
      opt.end_data = EndData::kShieldedUniform;
      std::vector<double> err;
      for (int n : {1, 2, 4}) {
        auto g = std::make_shared<const MappedGrid>(NozzleProfile(ProfileKind::kCylinder, {a}), 4.0, 64 * n,
                                                    16 * n, d);
        const auto sol = newton_solve(g, gas, m, opt);
        pass = pass && sol.converged;
        err.push_back(l2_error(sol.psi, *g, exact));
      }
      const double order = std::log2(err[0] / err[2]) / 2.0;
      const double worst = std::min(std::log2(err[0] / err[1]), std::log2(err[1] / err[2]));
      pass = pass && order >= 1.9 && worst >= 1.9;
      detail += fmt("a=%.2g d=%.4g order %.3f; ", a, d, order);
    }
  }
  report(2, "cylinder exactness", pass, detail);
}

struct TanhRun {
  GridSpec spec;
  double lo = 0.0;
  double delta = 0.0;
  CriticalFluxEstimate critical;
};

TanhRun tanh_critical(const GasModel& gas) {
  const NozzleProfile prof(ProfileKind::kTanhStep, {0.8, 2.0});
  TanhRun t{GridSpec{prof, pick_domain_length(prof, 1e-6), 256, 64}};
  CriticalSearchOptions co;
  co.upper = 2.5;
  t.delta = shrink_delta(t.spec, gas, 0.25 * co.upper / (2 * kPi)).final_delta();
  t.critical = find_critical_flux(t.spec, gas, t.delta, co);
  t.lo = t.critical.lo;
  return t;
}

void tanh_half_critical(const GasModel& gas, const TanhRun& t) {
  const double m0 = 0.5 * t.lo;
  const double m = m0 / (2 * kPi);
  const auto sh = shrink_delta(t.spec, gas, m);
  const auto& sol = sh.solution;
  const auto& g = *sol.grid;
  const auto field = velocity_from_stream(sol, gas);
  const double b = g.profile().min_radius();
  const double slack = 10.0 * g.mesh_size() * g.mesh_size();
  double below = 0.0, above = 0.0, barrier = 0.0;
  for (int i = 0; i <= g.nx(); ++i) {
    for (int j = 0; j <= g.nr(); ++j) {
      const double psi = sol.psi[g.index(i, j)];
      const double rd = g.r(i, j) + g.delta();
      below = std::max(below, -psi);
      above = std::max(above, psi - m);
      barrier = std::max(barrier, psi - m * rd * rd / (b * b) - slack);
    }
  }
  report(3, "maximum principle and barrier",
         sh.converged && sol.converged && below <= 1e-10 && above <= 1e-10 && barrier <= 0.0,
         fmt("m0 %.6f delta %.2e, min psi %.2e, max psi - m %.2e, barrier excess %.2e", m0, sh.final_delta(), -below,
             above, barrier));

  const auto ff = far_field_error(field, gas, m0, 2.0);
  report(4, "far field", ff.left < 1e-3 && ff.right < 1e-3,
         fmt("x=-(L-2): %.2e, x=L-2: %.2e", ff.left, ff.right));

  const auto pos = positivity_check(field);
  bool angle_ok = pos.min_u > 0.0;
  AngleBounds ang;
  if (angle_ok) {
    ang = flow_angle(field);
    angle_ok = ang.min >= ang.lower - 1e-3 && ang.max <= ang.upper + 1e-3;
  }
  const double drift = flux_drift(field);
  report(5, "qualitative estimates", pos.min_u > 0.0 && angle_ok && drift < 1e-3,
         fmt("min U %.6f, angle [%.6f, %.6f] in [%.6f, %.6f], flux drift %.2e", pos.min_u, ang.min, ang.max,
             ang.lower, ang.upper, drift));
}

void monotonicity(const GasModel& gas, const TanhRun& t) {
  std::vector<double> m0;
  for (int k = 1; k <= 8; ++k) m0.push_back(t.lo * k / 8.0);
  const double delta = shrink_delta(t.spec, gas, 0.5 * m0.back() / (2 * kPi)).final_delta();
  const auto sw = mass_flux_sweep(t.spec, gas, delta, m0);
  bool wall = true, conv = true;
  std::string ms;
  for (std::size_t k = 0; k < sw.entries.size(); ++k) {
    conv = conv && sw.entries[k].converged;
    if (k && sw.entries[k].wall_speed_max < sw.entries[k - 1].wall_speed_max - 1e-6) wall = false;
    ms += fmt("%.4f ", sw.entries[k].max_mach);
  }
  report(6, "monotonicity", conv && sw.monotone(1e-6) && wall, "M: " + ms);
}

void cylinder_critical(const GasModel& gas) {
  bool pass = true;
  std::string detail;
  for (double a : {0.8, 1.0}) {
    const NozzleProfile prof(ProfileKind::kCylinder, {a});
    const GridSpec spec{prof, 4.0, 256, 64};
    const double hat = kPi * a * a * gas.m_tilde();
    CriticalSearchOptions co;
    co.upper = 1.25 * hat;
    const double delta = shrink_delta(spec, gas, 0.25 * co.upper / (2 * kPi)).final_delta();
    const auto c = find_critical_flux(spec, gas, delta, co);
    const bool ok = !c.open_upper && c.lo * 0.98 <= hat && hat <= c.hi * 1.02 && c.width() <= 1e-3 * hat;
    pass = pass && ok;
    detail += fmt("a=%.1f [%.6f, %.6f] target %.6f width/target %.2e; ", a, c.lo, c.hi, hat, c.width() / hat);
  }
  report(7, "cylinder critical flux", pass, detail);
}

void sonic_limit(const GasModel& gas, const TanhRun& t) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto seq = sonic_sequence(t.lo, 6);
  const auto grid = t.spec.build(t.delta);
  const auto st = sonic_limit_study(t.spec, gas, t.delta, seq, default_compact(*grid));
  const double elapsed = seconds_since(t0);
  bool bounded = !st.entropy.empty();
  for (double e : st.entropy) bounded = bounded && e <= 2.0 * st.entropy.front();
  std::string cv, cf;
  for (double v : st.cauchy_velocity) cv += fmt("%.2e ", v);
  for (double v : st.cauchy_flux) cf += fmt("%.2e ", v);
  report(8, "sonic limit study",
         st.velocity_decreasing && st.flux_decreasing && bounded && st.certified() && elapsed <= 300.0,
         fmt("velocity %s| flux %s| entropy first %.2e max %.2e | %.1f s", cv.c_str(), cf.c_str(),
             st.entropy.empty() ? 0.0 : st.entropy.front(),
             st.entropy.empty() ? 0.0 : *std::max_element(st.entropy.begin(), st.entropy.end()), elapsed));
}

std::vector<double> perturbed_start(const MappedGrid& g, double m) {
  auto psi = dirichlet_extension(g, m, EndData::kStreamExtension);
  for (int i = 1; i < g.nx(); ++i) {
    for (int j = 1; j < g.nr(); ++j) {
      psi[g.index(i, j)] += 0.3 * m * std::sin(0.37 * i + 1.1 * j) * g.sigma(j) * (1 - g.sigma(j));
    }
  }
  return psi;
}

void continuation_robustness(const GasModel& gas, const TanhRun& t) {
  const double m = 0.5 * t.lo / (2 * kPi);
  DeltaSchedule halve;
  DeltaSchedule quarter;
  quarter.factor = 0.25;
  const auto a = shrink_delta(t.spec, gas, m, halve);
  const auto b = shrink_delta(t.spec, gas, m, quarter);
  const double schedules = max_abs_diff(a.solution.psi, b.solution.psi);

  const auto grid = t.spec.build(t.delta);
  const auto prev = newton_solve(grid, gas, 0.9 * m);
  const auto warm = newton_solve(grid, gas, m, {}, scaled_start(prev, *grid, m, EndData::kStreamExtension));
  const auto cold = newton_solve(grid, gas, m);
  const auto other = newton_solve(grid, gas, m, {}, perturbed_start(*grid, m));
  const double warm_cold = max_abs_diff(warm.psi, cold.psi);
  const double guesses = max_abs_diff(other.psi, cold.psi);
  const bool conv = a.converged && b.converged && warm.converged && cold.converged && other.converged;
  report(9, "continuation robustness", conv && schedules <= 1e-6 * m && warm_cold <= 1e-8 && guesses <= 1e-8,
         fmt("schedules %.2e (limit %.2e), warm/cold %.2e, initial guesses %.2e", schedules, 1e-6 * m, warm_cold,
             guesses));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

bool same_outputs(Command cmd, const RunConfig& cfg, const fs::path& root, int& files, int& exits) {
  std::ostringstream log;
  const int ra = run(cmd, cfg, RunOptions{1, (root / "a").string()}, log);
  const int rb = run(cmd, cfg, RunOptions{1, (root / "b").string()}, log);
  exits = std::max(exits, std::max(ra, rb));
  bool same = ra == kExitPass && rb == kExitPass;
  for (const auto& e : fs::directory_iterator(root / "a")) {
    ++files;
    same = same && slurp(e.path()) == slurp(root / "b" / e.path().filename());
  }
  return same;
}

void reproducibility() {
  const char* base = R"(
[nozzle]
kind = tanh_step
params = 0.8, 2
[grid]
nx = 128
nr = 32
[flux]
)";
  const fs::path root = fs::temp_directory_path() / "axiflow_acceptance_repro";
  fs::remove_all(root);
  int files = 0, exits = 0;
  const bool solve = same_outputs(Command::kSolve, parse_config(std::string(base) + "m0 = 1.0\n"), root / "solve",
                                  files, exits);
  const bool sweep = same_outputs(Command::kSweep, parse_config(std::string(base) + "sweep = 0.5, 1.0, 1.5\n"),
                                  root / "sweep", files, exits);
  fs::remove_all(root);
  report(10, "reproducibility", solve && sweep && files >= 4,
         fmt("%d files compared across solve and sweep, worst exit code %d", files, exits));
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  const GasModel gas;
  gas_identities();
  cylinder_exactness();
  const TanhRun t = tanh_critical(gas);
  std::printf("tanh_step(0.8, 2) on 256x64, L %.0f, delta %.2e: critical bracket [%.6f, %.6f]\n",
              t.spec.half_length, t.delta, t.critical.lo, t.critical.hi);
  tanh_half_critical(gas, t);
  monotonicity(gas, t);
  cylinder_critical(gas);
  sonic_limit(gas, t);
  continuation_robustness(gas, t);
  reproducibility();
  std::printf("%d of 10 criteria failed, %.1f s\n", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
