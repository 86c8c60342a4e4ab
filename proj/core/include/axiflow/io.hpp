#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "axiflow/continuation.hpp"
#include "axiflow/fields.hpp"

namespace axiflow {

/// Shortest decimal text that reads back to the same double.
std::string format_double(double value);

/// Strict decimal parse of the whole string; throws std::invalid_argument.
double parse_double(std::string_view text);

inline constexpr std::string_view kFieldHeader = "x,r,psi,U,V,rho,mach,omega";
inline constexpr std::string_view kSweepHeader =
    "m0,M,q_min,cutoff_active,flux_drift,farfield_left,farfield_right";

/// Rows of a field file, station-major.
struct FieldTable {
  std::vector<double> x, r, psi, U, V, rho, mach, omega;
  std::size_t size() const { return x.size(); }
  bool operator==(const FieldTable&) const = default;
};

FieldTable field_table(const FlowField& field);

void write_field_csv(std::ostream& out, const FieldTable& table);
void write_field_csv(std::ostream& out, const FlowField& field);

/// Throws std::runtime_error with the offending line on malformed input.
FieldTable read_field_csv(std::istream& in);

void write_sweep_csv(std::ostream& out, const SweepResult& sweep);

/// Ordered `key = value` lines.
class Report {
 public:
  void add(std::string key, double value);
  void add(std::string key, int value);
  void add(std::string key, bool value);
  void add(std::string key, const char* value);
  void add(std::string key, std::string value);
  void add_thresholds(const DiagnosticThresholds& thresholds);
  void add_diagnostics(const DiagnosticsReport& report);

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
  void write(std::ostream& out) const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// Parses `key = value` lines written by Report::write.
std::vector<std::pair<std::string, std::string>> read_report(std::istream& in);

}  // namespace axiflow
