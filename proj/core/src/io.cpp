#include "axiflow/io.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <system_error>

namespace axiflow {

std::string format_double(double value) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

double parse_double(std::string_view text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last || first == last) {
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  }
  return value;
}

FieldTable field_table(const FlowField& field) {
  const MappedGrid& g = *field.grid;
  FieldTable t;
  for (int i = 0; i <= g.nx(); ++i) {
    for (int j = 0; j <= g.nr(); ++j) {
      const std::size_t k = g.index(i, j);
      t.x.push_back(g.x(i));
      t.r.push_back(g.r(i, j));
      t.psi.push_back(field.psi[k]);
      t.U.push_back(field.U[k]);
      t.V.push_back(field.V[k]);
      t.rho.push_back(field.rho[k]);
      t.mach.push_back(field.mach[k]);
      t.omega.push_back(field.omega[k]);
    }
  }
  return t;
}

void write_field_csv(std::ostream& out, const FieldTable& t) {
  out << kFieldHeader << '\n';
  for (std::size_t k = 0; k < t.size(); ++k) {
    out << format_double(t.x[k]) << ',' << format_double(t.r[k]) << ',' << format_double(t.psi[k])
        << ',' << format_double(t.U[k]) << ',' << format_double(t.V[k]) << ','
        << format_double(t.rho[k]) << ',' << format_double(t.mach[k]) << ','
        << format_double(t.omega[k]) << '\n';
  }
}

void write_field_csv(std::ostream& out, const FlowField& field) {
  write_field_csv(out, field_table(field));
}

FieldTable read_field_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kFieldHeader) {
    throw std::runtime_error("field file: expected header '" + std::string(kFieldHeader) + "'");
  }
  FieldTable t;
  std::vector<double>* cols[] = {&t.x, &t.r, &t.psi, &t.U, &t.V, &t.rho, &t.mach, &t.omega};
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::size_t pos = 0;
    for (int c = 0; c < 8; ++c) {
      const std::size_t end = line.find(',', pos);
      const bool last = c == 7;
      if (last != (end == std::string::npos)) {
        throw std::runtime_error("field file line " + std::to_string(line_no) +
                                 ": expected 8 columns");
      }
      const std::string_view cell =
          std::string_view(line).substr(pos, last ? std::string::npos : end - pos);
      try {
        cols[c]->push_back(parse_double(cell));
      } catch (const std::invalid_argument& e) {
        throw std::runtime_error("field file line " + std::to_string(line_no) + ": " + e.what());
      }
      pos = end + 1;
    }
  }
  return t;
}

void write_sweep_csv(std::ostream& out, const SweepResult& sweep) {
  out << kSweepHeader << '\n';
  for (const auto& e : sweep.entries) {
    out << format_double(e.m0) << ',' << format_double(e.max_mach) << ',' << format_double(e.q_min)
        << ',' << (e.cutoff_active ? "true" : "false") << ',' << format_double(e.flux_drift) << ','
        << format_double(e.farfield_left) << ',' << format_double(e.farfield_right) << '\n';
  }
}

void Report::add(std::string key, double value) { entries_.emplace_back(std::move(key), format_double(value)); }
void Report::add(std::string key, int value) { entries_.emplace_back(std::move(key), std::to_string(value)); }
void Report::add(std::string key, bool value) { entries_.emplace_back(std::move(key), value ? "true" : "false"); }
void Report::add(std::string key, const char* value) { entries_.emplace_back(std::move(key), value); }
void Report::add(std::string key, std::string value) { entries_.emplace_back(std::move(key), std::move(value)); }

void Report::add_thresholds(const DiagnosticThresholds& t) {
  add("threshold.max_principle", t.max_principle);
  add("threshold.barrier_coefficient", t.barrier_coefficient);
  add("threshold.angle", t.angle);
  add("threshold.flux_drift", t.flux_drift);
  add("threshold.far_field", t.far_field);
  add("threshold.far_field_margin", t.far_field_margin);
  add("threshold.entropy", t.entropy);
  add("threshold.irrotationality", t.irrotationality);
  add("threshold.end_margin", t.end_margin);
}

void Report::add_diagnostics(const DiagnosticsReport& r) {
  add("m0", r.m0);
  add("max_mach", r.max_mach);
  add("cutoff_active", r.cutoff_active);
  add("min_speed", r.positivity.min_speed);
  add("min_axial_velocity", r.positivity.min_u);
  add("min_axial_velocity.x", r.positivity.x);
  add("min_axial_velocity.r", r.positivity.r);
  add("max_principle_violation", r.max_principle_violation);
  add("barrier_violation", r.barrier_violation);
  add("barrier_slack", r.barrier_slack);
  add("angle.defined", r.angle_defined);
  add("angle.min", r.angle.min);
  add("angle.max", r.angle.max);
  add("angle.lower", r.angle.lower);
  add("angle.upper", r.angle.upper);
  add("flux_drift", r.flux_drift);
  add("far_field.left", r.far_field.left);
  add("far_field.right", r.far_field.right);
  add("far_field.u_left", r.far_field.u_left);
  add("far_field.u_right", r.far_field.u_right);
  add("entropy.plus", r.entropy.plus);
  add("entropy.minus", r.entropy.minus);
  add("irrotationality.max", r.irrotationality.max);
  add("irrotationality.l2", r.irrotationality.l2);
  add("wall_speed_max", r.wall_speed_max);
  add_thresholds(r.thresholds);
  for (const auto& c : r.checks()) {
    add("check." + c.name + ".value", c.value);
    add("check." + c.name + ".threshold", c.threshold);
    add("check." + c.name + ".pass", c.pass);
  }
  add("diagnostics_passed", r.passed());
}

void Report::write(std::ostream& out) const {
  for (const auto& [k, v] : entries_) out << k << " = " << v << '\n';
}

std::vector<std::pair<std::string, std::string>> read_report(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t eq = line.find(" = ");
    if (eq == std::string::npos) continue;
    out.emplace_back(line.substr(0, eq), line.substr(eq + 3));
  }
  return out;
}

}  // namespace axiflow
