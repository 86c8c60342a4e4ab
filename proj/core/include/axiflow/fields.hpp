#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "axiflow/gas.hpp"
#include "axiflow/nozzle.hpp"
#include "axiflow/solver.hpp"

namespace axiflow {

/// Nodal flow quantities derived from a stream function. With an axis
/// shield δ the radius r is replaced by r + δ throughout, so that
/// ψ_r = (r+δ)ρU and ψ_x = −(r+δ)ρV.
struct FlowField {
  std::shared_ptr<const MappedGrid> grid;
  double m = 0.0;
  std::vector<double> psi;
  std::vector<double> U;
  std::vector<double> V;
  std::vector<double> rho;
  std::vector<double> q;
  std::vector<double> mach;
  std::vector<double> omega;
  /// The truncated density H̃ was used; set when the solve reported cutoff.
  bool truncated = false;

  double delta() const { return grid->delta(); }
  double m0() const;
};

/// Derive the flow from a solution. Throws std::domain_error if some node
/// has |∇ψ/(r+δ)|² > 1 while the solution's cutoff flag is clear.
FlowField velocity_from_stream(const StreamSolution& solution, const GasModel& gas);

/// Same, for a bare nodal field whose wall value is m.
FlowField velocity_from_stream(std::shared_ptr<const MappedGrid> grid, std::span<const double> psi,
                               double m, bool truncated, const GasModel& gas);

struct AngleBounds {
  double min = 0.0;    ///< computed min ω over nodes with U > 0
  double max = 0.0;
  double lower = 0.0;  ///< min{inf arctan f′, 0}
  double upper = 0.0;  ///< max{sup arctan f′, 0}
  /// Amount by which [min, max] leaves [lower, upper]; zero if inside.
  double excess() const;
};

/// Bounds on ω = arctan(V/U) over stations with |x| ≤ L − end_margin.
/// Throws std::domain_error naming the first node with U ≤ 0 when the
/// flux is positive.
AngleBounds flow_angle(const FlowField& field, double end_margin = 0.0);

/// 2π ∫₀^{f} ρU (r+δ) dr at station i by the trapezoid rule.
double mass_flux_at_station(const FlowField& field, int station);

/// Station nearest to x.
double mass_flux_at_station(const FlowField& field, double x);

/// max over stations of |flux − m₀| / m₀ (absolute when m₀ = 0).
double flux_drift(const FlowField& field);

struct FarFieldError {
  double left = 0.0;
  double right = 0.0;
  double u_left = 0.0;   ///< √(G⁻¹(m₀²/(π² r₋⁴)))
  double u_right = 0.0;  ///< √(G⁻¹(m₀²/(π² r₊⁴)))
};

/// max over r of |(U, V) − (U±, 0)| at the stations nearest x = ∓(L − margin).
FarFieldError far_field_error(const FlowField& field, const GasModel& gas, double m0,
                              double margin = 2.0);

struct PositivityReport {
  double min_u = 0.0;
  double x = 0.0;
  double r = 0.0;
  double min_speed = 0.0;  ///< q(m) = min over nodes of q
  bool pass = false;       ///< min U > 0, or m = 0
};

PositivityReport positivity_check(const FlowField& field);

/// Rectangle [x0, x1] × [r0, r1] in physical coordinates.
struct Compact {
  double x0 = 0.0;
  double x1 = 0.0;
  double r0 = 0.0;
  double r1 = 0.0;
};

/// [−L/2, L/2] × [0.2 b, 0.8 b].
Compact default_compact(const MappedGrid& grid);

/// Tensor bump χ(x, r) = φ((x−xc)/wx) φ((r−rc)/wr), φ(t) = (1−t²)⁴ on |t| < 1.
struct TestBump {
  double xc;
  double rc;
  double wx;
  double wr;
};

/// The center bump and four quarter-offset bumps inside the compact.
std::vector<TestBump> standard_bumps(const Compact& compact);

struct EntropyResiduals {
  double plus = 0.0;   ///< η₊ = ρU² + p, Λ₊ = ρUV, S₊ = −ρUV/(r+δ)
  double minus = 0.0;  ///< η₋ = ρUV, Λ₋ = ρV² + p, S₋ = −ρV²/(r+δ)
  double max() const { return plus > minus ? plus : minus; }
};

/// max over bumps of |∫ η χ_x + Λ χ_r + S χ dx dr| for both momentum pairs.
/// Throws std::invalid_argument if a bump leaves the interior of Ω_L.
EntropyResiduals entropy_pair_residual(const FlowField& field, const GasModel& gas,
                                       std::span<const TestBump> bumps);

struct IrrotationalityResidual {
  double max = 0.0;
  double l2 = 0.0;
};

/// Centered U_r − V_x at interior nodes with |x| ≤ L − end_margin.
IrrotationalityResidual irrotationality_residual(const FlowField& field, double end_margin = 0.0);

struct Sample3d {
  double rho;
  double u;
  double v;
  double w;
};

/// (ρ, u, v, w) at a Cartesian point; u = U, v = V y/r, w = V z/r.
/// Throws std::domain_error outside the nozzle.
Sample3d to_3d_sample(const FlowField& field, double x, double y, double z);

/// max over stations of |∇ψ| on the wall.
double wall_speed_max(const FlowField& field);

double max_mach(const FlowField& field);

struct DiagnosticThresholds {
  double max_principle = 1e-10;
  /// Barrier slack is barrier_coefficient·h² with h the grid's mesh size.
  double barrier_coefficient = 10.0;
  double angle = 1e-3;
  double flux_drift = 1e-3;
  double far_field = 1e-3;
  double far_field_margin = 2.0;
  double entropy = 1e-2;
  double irrotationality = 1e-2;
  /// Stations within this distance of ξ = ±L are left out of residuals.
  double end_margin = 2.0;

  bool operator==(const DiagnosticThresholds&) const = default;
};

struct DiagnosticCheck {
  std::string name;
  double value;
  double threshold;
  bool pass;
};

struct DiagnosticsReport {
  double m0 = 0.0;
  double max_principle_violation = 0.0;
  double barrier_violation = 0.0;
  double barrier_slack = 0.0;
  PositivityReport positivity;
  AngleBounds angle;
  bool angle_defined = true;
  double flux_drift = 0.0;
  FarFieldError far_field;
  EntropyResiduals entropy;
  IrrotationalityResidual irrotationality;
  double max_mach = 0.0;
  double wall_speed_max = 0.0;
  bool cutoff_active = false;
  DiagnosticThresholds thresholds;

  std::vector<DiagnosticCheck> checks() const;
  bool passed() const;
};

/// Full diagnostic suite on a derived field.
DiagnosticsReport diagnose(const FlowField& field, const GasModel& gas,
                           const DiagnosticThresholds& thresholds, const Compact& compact);

}  // namespace axiflow
