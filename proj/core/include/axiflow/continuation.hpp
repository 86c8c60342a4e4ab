#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "axiflow/fields.hpp"
#include "axiflow/gas.hpp"
#include "axiflow/nozzle.hpp"
#include "axiflow/solver.hpp"

namespace axiflow {

/// Grid parameters shared by every solve of a continuation run.
struct GridSpec {
  NozzleProfile profile;
  double half_length;
  int nx;
  int nr;
  QuadratureRule rule = QuadratureRule::kMidpoint;

  std::shared_ptr<const MappedGrid> build(double delta) const;
};

/// δ_k = δ₀·factor^k, k = 0, 1, ...
struct DeltaSchedule {
  /// Non-positive selects 0.1·b.
  double delta0 = 0.0;
  double factor = 0.5;
  /// Stop once ‖ψ_{k+1} − ψ_k‖_∞ ≤ tolerance·m.
  double tolerance = 1e-8;
  int max_steps = 60;
};

struct ShrinkResult {
  StreamSolution solution;
  std::vector<double> deltas;
  /// differences[k] = ‖ψ_{k+1} − ψ_k‖_∞.
  std::vector<double> differences;
  bool converged = false;
  double final_delta() const { return deltas.empty() ? 0.0 : deltas.back(); }
};

/// Warm-started solves along the δ schedule. Throws std::runtime_error if a
/// member solve fails to converge.
ShrinkResult shrink_delta(const GridSpec& spec, const GasModel& gas, double m,
                          const DeltaSchedule& schedule = {}, const SolverOptions& options = {});

struct DomainStep {
  double half_length;
  int nx;
  /// ‖ψ_{2L} − ψ_L‖_∞ on [−L, L]; absent for the last L.
  double difference;
};

struct ExtendResult {
  std::vector<DomainStep> steps;
  /// First L whose doubling changed ψ by at most tolerance·m.
  double certified_length = 0.0;
  bool certified = false;
};

/// Doubles L from spec.half_length at fixed mesh spacing (nx doubles too)
/// until the difference drops to tolerance·m or L exceeds l_max.
ExtendResult extend_domain(const GridSpec& spec, const GasModel& gas, double m, double delta,
                           double tolerance = 1e-6, double l_max = 256.0,
                           const SolverOptions& options = {});

/// Warm start for a solve at flux m on `grid`, built from a solution at
/// another flux (scaled by m/m_prev) with the boundary datum reapplied.
std::vector<double> scaled_start(const StreamSolution& previous, const MappedGrid& grid, double m,
                                 EndData end_data);

struct SweepEntry {
  double m0 = 0.0;
  double max_mach = 0.0;  ///< M(m₀)
  double q_min = 0.0;
  double min_u = 0.0;
  double wall_speed_max = 0.0;
  bool cutoff_active = false;
  bool converged = false;
  int iterations = 0;
  double flux_drift = 0.0;
  double farfield_left = 0.0;
  double farfield_right = 0.0;
  bool diagnostics_passed = false;
  /// Non-empty if the solve or the diagnostics threw.
  std::string error;
};

struct SweepResult {
  std::vector<SweepEntry> entries;
  double delta = 0.0;
  double half_length = 0.0;
  int nx = 0;
  int nr = 0;

  /// M(m₀) and the wall speed are nondecreasing within tol.
  bool monotone(double tol = 1e-6) const;
};

struct SweepOptions {
  SolverOptions solver;
  DiagnosticThresholds thresholds;
  std::optional<Compact> compact;
  /// Contiguous chunks solved concurrently; each chunk is a warm-started chain.
  int jobs = 1;
};

/// Solves at each flux of an ascending list on a shared grid and δ.
SweepResult mass_flux_sweep(const GridSpec& spec, const GasModel& gas, double delta,
                            std::span<const double> m0_values, const SweepOptions& options = {});

struct CriticalSearchOptions {
  SolverOptions solver;
  /// Initial upper end of the bracket [0, upper].
  double upper = 1.0;
  /// Stop once hi − lo ≤ tolerance·hi.
  double tolerance = 5e-4;
  /// Geometric expansion of the upper end stops here.
  double ceiling = 64.0;
};

struct CriticalFluxEstimate {
  /// Largest m₀ with a converged solve, cutoff inactive and M < m̃.
  double lo = 0.0;
  /// Smallest m₀ with cutoff activation (or M ≥ m̃); the ceiling when open.
  double hi = 0.0;
  double width() const { return hi - lo; }
  double midpoint() const { return 0.5 * (lo + hi); }
  /// No activation up to the ceiling.
  bool open_upper = false;
  int solves = 0;
  double delta = 0.0;
  double half_length = 0.0;
  int nx = 0;
  int nr = 0;
  /// Solution at lo.
  StreamSolution lo_solution;
};

/// True if the solution is outside the certified subsonic class.
bool cutoff_predicate(const StreamSolution& solution, const GasModel& gas);

/// Bisection on cutoff_predicate.
CriticalFluxEstimate find_critical_flux(const GridSpec& spec, const GasModel& gas, double delta,
                                        const CriticalSearchOptions& options = {});

struct SonicStudy {
  std::vector<double> m0;
  std::vector<double> max_mach;
  /// Discrete L² differences on the compact between consecutive members.
  std::vector<double> cauchy_velocity;
  std::vector<double> cauchy_flux;
  std::vector<double> entropy;
  bool velocity_decreasing = false;
  bool flux_decreasing = false;
  /// Every entropy residual ≤ 2× the first one.
  bool entropy_bounded = false;
  bool certified() const { return velocity_decreasing && flux_decreasing && entropy_bounded; }
};

/// m₀,n = lo·(1 − 0.2·2^{−n}), n = 0 .. terms−1.
std::vector<double> sonic_sequence(double lo, int terms = 6);

/// Solves along an increasing flux sequence and tracks Cauchy differences
/// of (U, V) and (ρU, ρV) on the compact. Throws std::runtime_error if a
/// member solve fails.
SonicStudy sonic_limit_study(const GridSpec& spec, const GasModel& gas, double delta,
                             std::span<const double> m0_values, const Compact& compact,
                             const SolverOptions& options = {});

}  // namespace axiflow
