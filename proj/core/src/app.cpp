#include "axiflow/app.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "axiflow/continuation.hpp"
#include "axiflow/io.hpp"

namespace axiflow {
namespace {

namespace fs = std::filesystem;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Setup {
  GasModel gas;
  NozzleProfile profile;
  GridSpec spec;
  SolverOptions solver;
  DeltaSchedule schedule;
  fs::path out_dir;
};

Setup make_setup(const RunConfig& c, const RunOptions& options) {
  GasModel gas(c.gas.gamma, c.gas.m_tilde);
  NozzleProfile profile(c.nozzle.kind, c.nozzle.params);
  const double l = c.grid.half_length
                       ? *c.grid.half_length
                       : pick_domain_length(profile, c.grid.tol_flat, c.grid.l_min, c.grid.l_max);
  GridSpec spec{profile, l, c.grid.nx, c.grid.nr, c.grid.quadrature};
  SolverOptions solver;
  solver.tolerance = c.tolerances.newton;
  solver.max_iterations = c.tolerances.max_iterations;
  solver.end_data = c.grid.end_data;
  DeltaSchedule schedule;
  schedule.delta0 = c.grid.delta0.value_or(0.0);
  schedule.factor = c.grid.delta_factor;
  schedule.tolerance = c.tolerances.delta;
  schedule.max_steps = c.grid.delta_max_steps;
  return {gas, profile, spec, solver, schedule, options.out_dir.value_or(c.output.directory)};
}

Compact compact_for(const RunConfig& c, const MappedGrid& grid) {
  if (c.compact) return {c.compact->x0, c.compact->x1, c.compact->r0, c.compact->r1};
  return default_compact(grid);
}

void write_file(const fs::path& path, const std::string& text, std::ostream& log) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw fs::filesystem_error("cannot open for writing", path, std::make_error_code(std::errc::io_error));
  f << text;
  f.close();
  if (!f) throw fs::filesystem_error("write failed", path, std::make_error_code(std::errc::io_error));
  log << "wrote " << path.string() << '\n';
}

void add_setup(Report& r, Command cmd, const RunConfig& c, const Setup& s) {
  r.add("command", std::string(to_string(cmd)));
  r.add("gas.gamma", c.gas.gamma);
  r.add("gas.m_tilde", c.gas.m_tilde);
  r.add("nozzle.kind", std::string(to_string(c.nozzle.kind)));
  std::string params;
  for (std::size_t k = 0; k < c.nozzle.params.size(); ++k) {
    params += (k ? ", " : "") + format_double(c.nozzle.params[k]);
  }
  r.add("nozzle.params", params);
  r.add("grid.L", s.spec.half_length);
  r.add("grid.nx", s.spec.nx);
  r.add("grid.nr", s.spec.nr);
  r.add("grid.quadrature", std::string(to_string(s.spec.rule)));
  r.add("grid.end_data", std::string(to_string(c.grid.end_data)));
}

// Picks L by doubling when grid.extend is set; returns false if not certified.
bool maybe_extend(const RunConfig& c, Setup& s, double m, Report& r, std::ostream& log) {
  if (!c.grid.extend) return true;
  const double delta = c.grid.delta.value_or(s.schedule.delta0 > 0.0 ? s.schedule.delta0
                                                                     : 0.1 * s.profile.min_radius());
  const auto ext = extend_domain(s.spec, s.gas, m, delta, c.tolerances.domain, c.grid.l_max, s.solver);
  for (std::size_t k = 0; k < ext.steps.size(); ++k) {
    r.add("domain.step" + std::to_string(k) + ".L", ext.steps[k].half_length);
    r.add("domain.step" + std::to_string(k) + ".difference", ext.steps[k].difference);
  }
  r.add("domain.certified", ext.certified);
  log << "extend_domain: " << (ext.certified ? "certified L = " + format_double(ext.certified_length)
                                             : std::string("not certified"))
      << '\n';
  if (!ext.certified) return false;
  const double scale = ext.certified_length / s.spec.half_length;
  s.spec.nx = static_cast<int>(std::lround(s.spec.nx * scale));
  s.spec.half_length = ext.certified_length;
  r.add("domain.L", s.spec.half_length);
  r.add("domain.nx", s.spec.nx);
  return true;
}

// Working δ for multi-solve commands: fixed, or the end of a shrink at m_ref.
double working_delta(const RunConfig& c, const Setup& s, double m0_ref, Report& r, std::ostream& log,
                     bool& ok) {
  if (c.grid.delta) {
    r.add("delta", *c.grid.delta);
    r.add("delta.source", "config");
    return *c.grid.delta;
  }
  const auto sh = shrink_delta(s.spec, s.gas, m0_ref / kTwoPi, s.schedule, s.solver);
  r.add("delta", sh.final_delta());
  r.add("delta.source", "shrink");
  r.add("delta.reference_m0", m0_ref);
  r.add("delta.steps", static_cast<int>(sh.deltas.size()));
  r.add("delta.converged", sh.converged);
  log << "shrink_delta: " << sh.deltas.size() << " levels, delta = " << format_double(sh.final_delta())
      << (sh.converged ? "" : " (not converged)") << '\n';
  ok = ok && sh.converged;
  return sh.final_delta();
}

int finish(Report& r, bool pass, const fs::path& path, const RunConfig& c, std::ostream& log) {
  r.add("status", pass ? "pass" : "fail");
  if (c.output.report) {
    std::ostringstream text;
    r.write(text);
    write_file(path, text.str(), log);
  }
  log << "status: " << (pass ? "pass" : "fail") << '\n';
  return pass ? kExitPass : kExitFail;
}

int run_solve(const RunConfig& c, Setup& s, std::ostream& log) {
  Report r;
  add_setup(r, Command::kSolve, c, s);
  const double m0 = *c.flux.m0;
  const double m = m0 / kTwoPi;
  bool ok = maybe_extend(c, s, m, r, log);
  r.add("m0", m0);
  r.add("m", m);
  StreamSolution sol;
  if (c.grid.delta) {
    sol = newton_solve(s.spec.build(*c.grid.delta), s.gas, m, s.solver);
    r.add("delta", *c.grid.delta);
    r.add("delta.source", "config");
  } else {
    const auto sh = shrink_delta(s.spec, s.gas, m, s.schedule, s.solver);
    sol = sh.solution;
    r.add("delta", sh.final_delta());
    r.add("delta.source", "shrink");
    r.add("delta.steps", static_cast<int>(sh.deltas.size()));
    r.add("delta.converged", sh.converged);
    if (!sh.differences.empty()) r.add("delta.last_difference", sh.differences.back());
    ok = ok && sh.converged;
  }
  r.add("newton.converged", sol.converged);
  r.add("newton.iterations", sol.iterations);
  r.add("newton.grad_norm", sol.grad_norm);
  r.add("energy", sol.energy);
  r.add("max_momentum", sol.max_momentum);
  log << "solve: m0 = " << format_double(m0) << ", " << sol.iterations << " Newton steps, "
      << (sol.converged ? "converged" : "NOT converged") << '\n';
  ok = ok && sol.converged;
  try {
    const auto field = velocity_from_stream(sol, s.gas);
    const auto rep = diagnose(field, s.gas, c.diagnostics, compact_for(c, *sol.grid));
    r.add_diagnostics(rep);
    ok = ok && rep.passed();
    if (c.output.field) {
      std::ostringstream text;
      write_field_csv(text, field);
      write_file(s.out_dir / "field.csv", text.str(), log);
    }
  } catch (const std::domain_error& e) {
    r.add("error", std::string(e.what()));
    ok = false;
  }
  return finish(r, ok, s.out_dir / "solve_report.txt", c, log);
}

int run_sweep(const RunConfig& c, Setup& s, int jobs, std::ostream& log) {
  Report r;
  add_setup(r, Command::kSweep, c, s);
  const double top = c.flux.sweep.back();
  const double ref = c.flux.reference_m0.value_or(0.5 * top);
  bool ok = maybe_extend(c, s, ref / kTwoPi, r, log);
  const double delta = working_delta(c, s, ref, r, log, ok);
  SweepOptions so;
  so.solver = s.solver;
  so.thresholds = c.diagnostics;
  if (c.compact) so.compact = Compact{c.compact->x0, c.compact->x1, c.compact->r0, c.compact->r1};
  so.jobs = jobs;
  const auto sweep = mass_flux_sweep(s.spec, s.gas, delta, c.flux.sweep, so);
  r.add("entries", static_cast<int>(sweep.entries.size()));
  for (std::size_t k = 0; k < sweep.entries.size(); ++k) {
    const auto& e = sweep.entries[k];
    const std::string p = "entry" + std::to_string(k) + ".";
    r.add(p + "m0", e.m0);
    r.add(p + "converged", e.converged);
    r.add(p + "iterations", e.iterations);
    r.add(p + "min_axial_velocity", e.min_u);
    r.add(p + "wall_speed_max", e.wall_speed_max);
    r.add(p + "diagnostics_passed", e.diagnostics_passed);
    if (!e.error.empty()) r.add(p + "error", e.error);
    ok = ok && e.converged && e.error.empty() && e.diagnostics_passed;
    log << "sweep: m0 = " << format_double(e.m0) << "  M = " << format_double(e.max_mach)
        << (e.diagnostics_passed ? "" : "  (diagnostics failed)") << '\n';
  }
  const bool monotone = sweep.monotone();
  r.add("monotone", monotone);
  r.add_thresholds(c.diagnostics);
  ok = ok && monotone;
  std::ostringstream text;
  write_sweep_csv(text, sweep);
  write_file(s.out_dir / "sweep.csv", text.str(), log);
  return finish(r, ok, s.out_dir / "sweep_report.txt", c, log);
}

int run_critical(const RunConfig& c, Setup& s, std::ostream& log) {
  Report r;
  add_setup(r, Command::kCritical, c, s);
  const double upper = *c.flux.critical_upper;
  const double ref = c.flux.reference_m0.value_or(0.25 * upper);
  bool ok = maybe_extend(c, s, ref / kTwoPi, r, log);
  const double delta = working_delta(c, s, ref, r, log, ok);
  CriticalSearchOptions co;
  co.solver = s.solver;
  co.upper = upper;
  co.tolerance = c.tolerances.critical;
  co.ceiling = c.flux.critical_ceiling;
  const auto est = find_critical_flux(s.spec, s.gas, delta, co);
  r.add("lo", est.lo);
  r.add("hi", est.hi);
  r.add("width", est.width());
  r.add("midpoint", est.midpoint());
  r.add("open_upper", est.open_upper);
  r.add("solves", est.solves);
  r.add("note", "bracket depends on grid, delta and L");
  log << "critical: [" << format_double(est.lo) << ", " << format_double(est.hi) << "]"
      << (est.open_upper ? " open upper end" : "") << '\n';
  ok = ok && !est.open_upper;
  const auto field = velocity_from_stream(est.lo_solution, s.gas);
  const auto rep = diagnose(field, s.gas, c.diagnostics, compact_for(c, *est.lo_solution.grid));
  Report lo;
  lo.add_diagnostics(rep);
  for (const auto& [k, v] : lo.entries()) r.add("lo." + k, v);
  ok = ok && rep.passed();
  return finish(r, ok, s.out_dir / "critical_report.txt", c, log);
}

int run_diagnose(const RunConfig& c, Setup& s, std::ostream& log) {
  Report r;
  add_setup(r, Command::kDiagnose, c, s);
  const fs::path field_path =
      c.diagnose.field_file.empty() ? s.out_dir / "field.csv" : fs::path(c.diagnose.field_file);
  std::ifstream in(field_path, std::ios::binary);
  if (!in) throw fs::filesystem_error("cannot open field file", field_path,
                                      std::make_error_code(std::errc::no_such_file_or_directory));
  const auto table = read_field_csv(in);
  r.add("field_file", field_path.string());

  std::optional<double> delta = c.diagnose.delta;
  if (!delta) delta = c.grid.delta;
  if (!delta) {
    std::ifstream rep(field_path.parent_path() / "solve_report.txt", std::ios::binary);
    for (const auto& [k, v] : read_report(rep)) {
      if (k == "delta") delta = parse_double(v);
    }
  }
  if (!delta) {
    throw ConfigError("diagnose.delta: not set and no solve_report.txt beside the field file");
  }
  r.add("delta", *delta);
  const auto grid = s.spec.build(*delta);
  bool match = table.size() == grid->node_count();
  for (int i = 0; match && i <= grid->nx(); ++i) {
    for (int j = 0; match && j <= grid->nr(); ++j) {
      const std::size_t k = grid->index(i, j);
      match = std::abs(table.x[k] - grid->x(i)) <= 1e-9 * (1.0 + std::abs(grid->x(i))) &&
              std::abs(table.r[k] - grid->r(i, j)) <= 1e-9;
    }
  }
  if (!match) throw ConfigError("grid: field file does not match the configured grid");
  const double m = table.psi[grid->index(0, grid->nr())];
  const bool truncated = max_quadrature_momentum(table.psi, *grid) > s.gas.truncation_start();
  bool ok = true;
  try {
    const auto field = velocity_from_stream(grid, table.psi, m, truncated, s.gas);
    const auto rep = diagnose(field, s.gas, c.diagnostics, compact_for(c, *grid));
    r.add_diagnostics(rep);
    ok = rep.passed();
  } catch (const std::domain_error& e) {
    r.add("error", std::string(e.what()));
    ok = false;
  }
  return finish(r, ok, s.out_dir / "diagnose_report.txt", c, log);
}

}  // namespace

std::string_view to_string(Command command) {
  switch (command) {
    case Command::kSolve:
      return "solve";
    case Command::kSweep:
      return "sweep";
    case Command::kCritical:
      return "critical";
    case Command::kDiagnose:
      return "diagnose";
  }
  return "unknown";
}

Command command_from_string(std::string_view name) {
  if (name == "solve") return Command::kSolve;
  if (name == "sweep") return Command::kSweep;
  if (name == "critical") return Command::kCritical;
  if (name == "diagnose") return Command::kDiagnose;
  throw std::invalid_argument("unknown command '" + std::string(name) + "'");
}

int run(Command command, const RunConfig& config, const RunOptions& options, std::ostream& log) {
  const RunMode expected = command == Command::kSweep      ? RunMode::kSweep
                           : command == Command::kCritical ? RunMode::kCritical
                                                           : RunMode::kSolve;
  if (command != Command::kDiagnose && config.mode() != expected) {
    log << "error: '" << to_string(command) << "' needs a config in " << to_string(expected)
        << " mode, got " << to_string(config.mode()) << '\n';
    return kExitUsage;
  }
  try {
    Setup s = make_setup(config, options);
    fs::create_directories(s.out_dir);
    switch (command) {
      case Command::kSolve:
        return run_solve(config, s, log);
      case Command::kSweep:
        return run_sweep(config, s, std::max(options.jobs, 1), log);
      case Command::kCritical:
        return run_critical(config, s, log);
      case Command::kDiagnose:
        return run_diagnose(config, s, log);
    }
  } catch (const fs::filesystem_error& e) {
    log << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ConfigError& e) {
    log << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kExitFail;
  }
  return kExitFail;
}

}  // namespace axiflow
