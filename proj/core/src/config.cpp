#include "axiflow/config.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>

#include "axiflow/io.hpp"

namespace axiflow {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double to_double(std::string_view v) { return parse_double(trim(v)); }

int to_int(std::string_view v) {
  const double d = to_double(v);
  if (d != static_cast<double>(static_cast<int>(d))) {
    throw std::invalid_argument("not an integer: '" + std::string(v) + "'");
  }
  return static_cast<int>(d);
}

bool to_bool(std::string_view v) {
  v = trim(v);
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  throw std::invalid_argument("not a boolean: '" + std::string(v) + "'");
}

std::optional<double> to_optional(std::string_view v) {
  if (trim(v) == "auto") return std::nullopt;
  return to_double(v);
}

std::vector<double> to_list(std::string_view v) {
  std::vector<double> out;
  v = trim(v);
  if (v.empty()) return out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = v.find(',', pos);
    out.push_back(to_double(v.substr(pos, comma == std::string_view::npos ? comma : comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::string from_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) out += ", ";
    out += format_double(v[k]);
  }
  return out;
}

std::string from_optional(const std::optional<double>& v) { return v ? format_double(*v) : "auto"; }
std::string from_bool(bool v) { return v ? "true" : "false"; }

struct Field {
  const char* section;
  const char* key;
  std::function<void(RunConfig&, std::string_view)> parse;
  /// nullopt: omit from serialized output.
  std::function<std::optional<std::string>(const RunConfig&)> format;
};

#define AXIFLOW_DOUBLE(sec, name, member)                                            \
  Field {                                                                            \
    sec, name, [](RunConfig& c, std::string_view v) { c.member = to_double(v); },    \
        [](const RunConfig& c) { return std::optional<std::string>(format_double(c.member)); } \
  }
#define AXIFLOW_INT(sec, name, member)                                               \
  Field {                                                                            \
    sec, name, [](RunConfig& c, std::string_view v) { c.member = to_int(v); },       \
        [](const RunConfig& c) { return std::optional<std::string>(std::to_string(c.member)); } \
  }
#define AXIFLOW_BOOL(sec, name, member)                                              \
  Field {                                                                            \
    sec, name, [](RunConfig& c, std::string_view v) { c.member = to_bool(v); },      \
        [](const RunConfig& c) { return std::optional<std::string>(from_bool(c.member)); } \
  }
#define AXIFLOW_AUTO(sec, name, member)                                              \
  Field {                                                                            \
    sec, name, [](RunConfig& c, std::string_view v) { c.member = to_optional(v); },  \
        [](const RunConfig& c) { return std::optional<std::string>(from_optional(c.member)); } \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      AXIFLOW_DOUBLE("gas", "gamma", gas.gamma),
      AXIFLOW_DOUBLE("gas", "m_tilde", gas.m_tilde),
      {"nozzle", "kind",
       [](RunConfig& c, std::string_view v) { c.nozzle.kind = profile_kind_from_string(trim(v)); },
       [](const RunConfig& c) { return std::optional<std::string>(to_string(c.nozzle.kind)); }},
      {"nozzle", "params", [](RunConfig& c, std::string_view v) { c.nozzle.params = to_list(v); },
       [](const RunConfig& c) { return std::optional<std::string>(from_list(c.nozzle.params)); }},
      AXIFLOW_INT("grid", "nx", grid.nx),
      AXIFLOW_INT("grid", "nr", grid.nr),
      AXIFLOW_AUTO("grid", "L", grid.half_length),
      AXIFLOW_DOUBLE("grid", "tol_flat", grid.tol_flat),
      AXIFLOW_DOUBLE("grid", "L_min", grid.l_min),
      AXIFLOW_DOUBLE("grid", "L_max", grid.l_max),
      AXIFLOW_BOOL("grid", "extend", grid.extend),
      {"grid", "quadrature",
       [](RunConfig& c, std::string_view v) { c.grid.quadrature = quadrature_rule_from_string(trim(v)); },
       [](const RunConfig& c) { return std::optional<std::string>(to_string(c.grid.quadrature)); }},
      AXIFLOW_AUTO("grid", "delta", grid.delta),
      AXIFLOW_AUTO("grid", "delta0", grid.delta0),
      AXIFLOW_DOUBLE("grid", "delta_factor", grid.delta_factor),
      AXIFLOW_INT("grid", "delta_max_steps", grid.delta_max_steps),
      {"grid", "end_data",
       [](RunConfig& c, std::string_view v) { c.grid.end_data = end_data_from_string(trim(v)); },
       [](const RunConfig& c) { return std::optional<std::string>(to_string(c.grid.end_data)); }},
      {"flux", "m0", [](RunConfig& c, std::string_view v) { c.flux.m0 = to_double(v); },
       [](const RunConfig& c) {
         return c.flux.m0 ? std::optional<std::string>(format_double(*c.flux.m0)) : std::nullopt;
       }},
      {"flux", "sweep", [](RunConfig& c, std::string_view v) { c.flux.sweep = to_list(v); },
       [](const RunConfig& c) {
         return c.flux.sweep.empty() ? std::nullopt
                                     : std::optional<std::string>(from_list(c.flux.sweep));
       }},
      {"flux", "critical_upper",
       [](RunConfig& c, std::string_view v) { c.flux.critical_upper = to_double(v); },
       [](const RunConfig& c) {
         return c.flux.critical_upper
                    ? std::optional<std::string>(format_double(*c.flux.critical_upper))
                    : std::nullopt;
       }},
      AXIFLOW_DOUBLE("flux", "critical_ceiling", flux.critical_ceiling),
      AXIFLOW_AUTO("flux", "reference_m0", flux.reference_m0),
      AXIFLOW_DOUBLE("tolerances", "newton", tolerances.newton),
      AXIFLOW_INT("tolerances", "max_iterations", tolerances.max_iterations),
      AXIFLOW_DOUBLE("tolerances", "delta", tolerances.delta),
      AXIFLOW_DOUBLE("tolerances", "domain", tolerances.domain),
      AXIFLOW_DOUBLE("tolerances", "critical", tolerances.critical),
      AXIFLOW_DOUBLE("diagnostics", "max_principle", diagnostics.max_principle),
      AXIFLOW_DOUBLE("diagnostics", "barrier_coefficient", diagnostics.barrier_coefficient),
      AXIFLOW_DOUBLE("diagnostics", "angle", diagnostics.angle),
      AXIFLOW_DOUBLE("diagnostics", "flux_drift", diagnostics.flux_drift),
      AXIFLOW_DOUBLE("diagnostics", "far_field", diagnostics.far_field),
      AXIFLOW_DOUBLE("diagnostics", "far_field_margin", diagnostics.far_field_margin),
      AXIFLOW_DOUBLE("diagnostics", "entropy", diagnostics.entropy),
      AXIFLOW_DOUBLE("diagnostics", "irrotationality", diagnostics.irrotationality),
      AXIFLOW_DOUBLE("diagnostics", "end_margin", diagnostics.end_margin),
      {"diagnostics", "compact",
       [](RunConfig& c, std::string_view v) {
         if (trim(v) == "auto") {
           c.compact.reset();
           return;
         }
         const auto l = to_list(v);
         if (l.size() != 4) throw std::invalid_argument("expected x0, x1, r0, r1 or auto");
         c.compact = CompactConfig{l[0], l[1], l[2], l[3]};
       },
       [](const RunConfig& c) {
         if (!c.compact) return std::optional<std::string>("auto");
         return std::optional<std::string>(
             from_list({c.compact->x0, c.compact->x1, c.compact->r0, c.compact->r1}));
       }},
      {"output", "directory",
       [](RunConfig& c, std::string_view v) { c.output.directory = std::string(trim(v)); },
       [](const RunConfig& c) { return std::optional<std::string>(c.output.directory); }},
      AXIFLOW_BOOL("output", "field", output.field),
      AXIFLOW_BOOL("output", "report", output.report),
      {"diagnose", "field_file",
       [](RunConfig& c, std::string_view v) { c.diagnose.field_file = std::string(trim(v)); },
       [](const RunConfig& c) {
         return c.diagnose.field_file.empty() ? std::nullopt
                                              : std::optional<std::string>(c.diagnose.field_file);
       }},
      AXIFLOW_AUTO("diagnose", "delta", diagnose.delta),
  };
  return table;
}

#undef AXIFLOW_DOUBLE
#undef AXIFLOW_INT
#undef AXIFLOW_BOOL
#undef AXIFLOW_AUTO

[[noreturn]] void invalid(const std::string& key, const std::string& why) {
  throw ConfigError(key + ": " + why);
}

void require_positive(const std::string& key, double v) {
  if (!(v > 0.0)) invalid(key, "must be positive");
}

void validate(const RunConfig& c) {
  if (!(c.gas.gamma > 1.0)) invalid("gas.gamma", "must exceed 1");
  if (!(c.gas.m_tilde > 0.0 && c.gas.m_tilde < 1.0)) invalid("gas.m_tilde", "must lie in (0, 1)");
  try {
    NozzleProfile(c.nozzle.kind, c.nozzle.params);
  } catch (const std::invalid_argument& e) {
    invalid("nozzle.params", e.what());
  }
  const NozzleProfile profile(c.nozzle.kind, c.nozzle.params);
  if (c.grid.nx < 4) invalid("grid.nx", "must be at least 4");
  if (c.grid.nr < 4) invalid("grid.nr", "must be at least 4");
  if (c.grid.half_length) require_positive("grid.L", *c.grid.half_length);
  require_positive("grid.tol_flat", c.grid.tol_flat);
  require_positive("grid.L_min", c.grid.l_min);
  if (!(c.grid.l_max >= c.grid.l_min)) invalid("grid.L_max", "must be at least L_min");
  if (c.grid.delta && !(*c.grid.delta > 0.0 && *c.grid.delta <= profile.min_radius())) {
    invalid("grid.delta", "must lie in (0, b]");
  }
  if (c.grid.delta0 && !(*c.grid.delta0 > 0.0 && *c.grid.delta0 <= profile.min_radius())) {
    invalid("grid.delta0", "must lie in (0, b]");
  }
  if (!(c.grid.delta_factor > 0.0 && c.grid.delta_factor < 1.0)) {
    invalid("grid.delta_factor", "must lie in (0, 1)");
  }
  if (c.grid.delta_max_steps < 1) invalid("grid.delta_max_steps", "must be at least 1");

  const int modes = (c.flux.m0 ? 1 : 0) + (c.flux.sweep.empty() ? 0 : 1) + (c.flux.critical_upper ? 1 : 0);
  if (modes != 1) invalid("flux", "exactly one of m0, sweep, critical_upper must be set");
  if (c.flux.m0 && !(*c.flux.m0 >= 0.0)) invalid("flux.m0", "must be nonnegative");
  for (std::size_t k = 0; k < c.flux.sweep.size(); ++k) {
    if (!(c.flux.sweep[k] >= 0.0)) invalid("flux.sweep", "values must be nonnegative");
    if (k && !(c.flux.sweep[k] > c.flux.sweep[k - 1])) invalid("flux.sweep", "values must be ascending");
  }
  if (c.flux.critical_upper) require_positive("flux.critical_upper", *c.flux.critical_upper);
  if (c.flux.critical_upper && !(c.flux.critical_ceiling >= *c.flux.critical_upper)) {
    invalid("flux.critical_ceiling", "must be at least critical_upper");
  }
  if (c.flux.reference_m0) require_positive("flux.reference_m0", *c.flux.reference_m0);

  require_positive("tolerances.newton", c.tolerances.newton);
  if (c.tolerances.max_iterations < 1) invalid("tolerances.max_iterations", "must be at least 1");
  require_positive("tolerances.delta", c.tolerances.delta);
  require_positive("tolerances.domain", c.tolerances.domain);
  require_positive("tolerances.critical", c.tolerances.critical);

  const auto& d = c.diagnostics;
  require_positive("diagnostics.max_principle", d.max_principle);
  require_positive("diagnostics.barrier_coefficient", d.barrier_coefficient);
  require_positive("diagnostics.angle", d.angle);
  require_positive("diagnostics.flux_drift", d.flux_drift);
  require_positive("diagnostics.far_field", d.far_field);
  if (!(d.far_field_margin >= 0.0)) invalid("diagnostics.far_field_margin", "must be nonnegative");
  require_positive("diagnostics.entropy", d.entropy);
  require_positive("diagnostics.irrotationality", d.irrotationality);
  if (!(d.end_margin >= 0.0)) invalid("diagnostics.end_margin", "must be nonnegative");
  if (c.compact && !(c.compact->x0 < c.compact->x1 && c.compact->r0 > 0.0 &&
                     c.compact->r0 < c.compact->r1)) {
    invalid("diagnostics.compact", "need x0 < x1 and 0 < r0 < r1");
  }
  if (c.output.directory.empty()) invalid("output.directory", "must not be empty");
  if (c.diagnose.delta && !(*c.diagnose.delta >= 0.0)) invalid("diagnose.delta", "must be nonnegative");
}

}  // namespace

std::string_view to_string(RunMode mode) {
  switch (mode) {
    case RunMode::kSolve:
      return "solve";
    case RunMode::kSweep:
      return "sweep";
    case RunMode::kCritical:
      return "critical";
  }
  return "unknown";
}

RunMode RunConfig::mode() const {
  if (flux.m0) return RunMode::kSolve;
  if (!flux.sweep.empty()) return RunMode::kSweep;
  return RunMode::kCritical;
}

RunConfig parse_config(std::string_view text) {
  RunConfig c;
  std::string section;
  std::set<std::string> sections;
  std::set<std::string> seen;
  for (const auto& f : fields()) sections.insert(f.section);
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const std::size_t hash = line.find_first_of("#;");
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (!sections.count(section)) throw ConfigError(where + "unknown section [" + section + "]");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + "expected 'key = value'");
    if (section.empty()) throw ConfigError(where + "key outside any section");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    const auto it = std::find_if(fields().begin(), fields().end(), [&](const Field& f) {
      return section == f.section && key == f.key;
    });
    if (it == fields().end()) throw ConfigError(where + "unknown key '" + key + "' in [" + section + "]");
    const std::string full = section + "." + key;
    if (!seen.insert(full).second) throw ConfigError(where + "duplicate key " + full);
    try {
      it->parse(c, value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(where + full + ": " + e.what());
    }
  }
  validate(c);
  return c;
}

std::string serialize_config(const RunConfig& config) {
  std::ostringstream out;
  std::string section;
  for (const auto& f : fields()) {
    const auto v = f.format(config);
    if (!v) continue;
    if (section != f.section) {
      if (!section.empty()) out << '\n';
      section = f.section;
      out << '[' << section << "]\n";
    }
    out << f.key << " = " << *v << '\n';
  }
  return out.str();
}

}  // namespace axiflow
