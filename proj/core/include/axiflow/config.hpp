#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "axiflow/fields.hpp"
#include "axiflow/nozzle.hpp"
#include "axiflow/solver.hpp"

namespace axiflow {

/// Syntax error (with line number) or validation error (naming the key).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class RunMode { kSolve, kSweep, kCritical };

std::string_view to_string(RunMode mode);

struct GasConfig {
  double gamma = 1.4;
  double m_tilde = 0.98;
  bool operator==(const GasConfig&) const = default;
};

struct NozzleConfig {
  ProfileKind kind = ProfileKind::kCylinder;
  std::vector<double> params{1.0};
  bool operator==(const NozzleConfig&) const = default;
};

struct GridConfig {
  int nx = 128;
  int nr = 32;
  /// Unset: pick_domain_length(tol_flat, l_min, l_max).
  std::optional<double> half_length;
  double tol_flat = 1e-6;
  double l_min = 4.0;
  double l_max = 1024.0;
  /// Double L from the chosen value until ψ settles (tolerances.domain).
  bool extend = false;
  QuadratureRule quadrature = QuadratureRule::kMidpoint;
  /// Unset: working δ from shrink_delta.
  std::optional<double> delta;
  /// Unset: 0.1·b.
  std::optional<double> delta0;
  double delta_factor = 0.5;
  int delta_max_steps = 60;
  EndData end_data = EndData::kStreamExtension;
  bool operator==(const GridConfig&) const = default;
};

struct FluxConfig {
  std::optional<double> m0;
  std::vector<double> sweep;
  std::optional<double> critical_upper;
  double critical_ceiling = 64.0;
  /// Flux at which the working δ is found in sweep and critical modes.
  /// Unset: half the largest sweep flux, or a quarter of critical_upper.
  std::optional<double> reference_m0;
  bool operator==(const FluxConfig&) const = default;
};

struct ToleranceConfig {
  double newton = 1e-10;
  int max_iterations = 100;
  double delta = 1e-8;
  double domain = 1e-6;
  double critical = 5e-4;
  bool operator==(const ToleranceConfig&) const = default;
};

struct OutputConfig {
  std::string directory = "out";
  bool field = true;
  bool report = true;
  bool operator==(const OutputConfig&) const = default;
};

struct DiagnoseConfig {
  /// Unset: <directory>/field.csv.
  std::string field_file;
  /// Unset: grid.delta, then the delta recorded in the report beside the field file.
  std::optional<double> delta;
  bool operator==(const DiagnoseConfig&) const = default;
};

struct CompactConfig {
  double x0;
  double x1;
  double r0;
  double r1;
  bool operator==(const CompactConfig&) const = default;
};

struct RunConfig {
  GasConfig gas;
  NozzleConfig nozzle;
  GridConfig grid;
  FluxConfig flux;
  ToleranceConfig tolerances;
  DiagnosticThresholds diagnostics;
  /// Unset: default_compact of the grid.
  std::optional<CompactConfig> compact;
  OutputConfig output;
  DiagnoseConfig diagnose;

  RunMode mode() const;
  bool operator==(const RunConfig&) const = default;
};

/// INI-style document: `[section]` headers, `key = value` lines, `#` or `;`
/// comments, lists separated by commas. Unknown sections and keys are
/// rejected; every value is validated.
RunConfig parse_config(std::string_view text);

/// Every key, explicit defaults included; parse_config inverts it exactly.
std::string serialize_config(const RunConfig& config);

}  // namespace axiflow
