#include "cusplab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <system_error>

namespace cusplab {

namespace {

std::string with_line(int line, const std::string& message) {
  return line > 0 ? "line " + std::to_string(line) + ": " + message : message;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

const std::vector<std::string> kSections = {"material", "initial_data", "grid", "solver",
                                            "output"};

const std::vector<std::string> kMaterialKeys = {"alpha1", "alpha2", "alpha3", "alpha4", "alpha5",
                                                "alpha6", "gamma1", "gamma2", "K1",     "K3"};

std::string section_of(const std::string& key) {
  for (const auto& [k, section] : config_keys()) {
    if (k == key) return section;
  }
  return {};
}

double& material_field(LeslieMaterial& m, const std::string& key) {
  if (key == "gamma1") return m.gamma1;
  if (key == "gamma2") return m.gamma2;
  if (key == "K1") return m.K1;
  if (key == "K3") return m.K3;
  return m.alpha[static_cast<std::size_t>(key.back() - '1')];
}

// Typed access to the entries with the line number carried into every error.
class Reader {
 public:
  explicit Reader(const ConfigEntries& entries) : entries_(entries) {}

  bool has(const std::string& key) const { return entries_.count(key) > 0; }
  int line(const std::string& key) const { return has(key) ? entries_.at(key).line : 0; }
  bool is_auto(const std::string& key) const { return has(key) && entries_.at(key).value == "auto"; }

  std::string text(const std::string& key, const std::string& fallback) const {
    return has(key) ? entries_.at(key).value : fallback;
  }

  double number(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    const std::string& v = entries_.at(key).value;
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
      throw ConfigError(line(key), "malformed number '" + v + "' for key '" + key + "'");
    }
    return out;
  }

  std::optional<double> number_or_auto(const std::string& key) const {
    if (!has(key) || is_auto(key)) return std::nullopt;
    return number(key, 0.0);
  }

  std::size_t count(const std::string& key, std::size_t fallback) const {
    if (!has(key)) return fallback;
    const std::string& v = entries_.at(key).value;
    std::size_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
      throw ConfigError(line(key), "malformed integer '" + v + "' for key '" + key + "'");
    }
    return out;
  }

  bool flag(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string& v = entries_.at(key).value;
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError(line(key), "key '" + key + "' expects true or false, got '" + v + "'");
  }

  void require(bool ok, const std::string& key, const std::string& constraint) const {
    if (!ok) throw ConfigError(line(key), key + " must " + constraint);
  }

 private:
  const ConfigEntries& entries_;
};

}  // namespace

ConfigError::ConfigError(int line, const std::string& message)
    : std::runtime_error(with_line(line, message)), line_(line) {}

std::string to_string(Expectation e) { return e == Expectation::blowup ? "blowup" : "completion"; }

const std::vector<std::pair<std::string, std::string>>& config_keys() {
  static const std::vector<std::pair<std::string, std::string>> keys = [] {
    std::vector<std::pair<std::string, std::string>> k = {{"preset", "material"}};
    for (const auto& m : kMaterialKeys) k.emplace_back(m, "material");
    for (const char* name : {"family", "epsilon", "theta_star", "amplitude", "amplitude_slack",
                             "enforce_hypotheses", "smooth_amplitude"}) {
      k.emplace_back(name, "initial_data");
    }
    for (const char* name : {"x_min", "x_max", "nx"}) k.emplace_back(name, "grid");
    for (const char* name : {"cfl", "t_end", "blowup_threshold", "blowup_factor",
                             "gradient_resolution_factor", "heat_weight", "snapshot_stride",
                             "trace", "trace_start_x"}) {
      k.emplace_back(name, "solver");
    }
    for (const char* name : {"directory", "expectation"}) k.emplace_back(name, "output");
    return k;
  }();
  return keys;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

ConfigEntries parse_entries(const std::string& text) {
  ConfigEntries entries;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string content = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (content.empty()) continue;

    if (content.front() == '[') {
      if (content.back() != ']') throw ConfigError(line, "malformed section header");
      section = trim(content.substr(1, content.size() - 2));
      if (std::find(kSections.begin(), kSections.end(), section) == kSections.end()) {
        throw ConfigError(line, "unknown section [" + section + "]");
      }
      continue;
    }

    const auto eq = content.find('=');
    if (eq == std::string::npos) throw ConfigError(line, "expected 'key = value'");
    const std::string key = trim(content.substr(0, eq));
    const std::string value = trim(content.substr(eq + 1));
    const std::string home = section_of(key);
    if (home.empty()) throw ConfigError(line, "unknown key '" + key + "'");
    if (!section.empty() && home != section) {
      throw ConfigError(line, "unknown key '" + key + "' in [" + section + "]");
    }
    if (value.empty()) throw ConfigError(line, "missing value for key '" + key + "'");
    if (entries.count(key)) throw ConfigError(line, "duplicate key '" + key + "'");
    entries[key] = {value, line};
  }
  return entries;
}

ConfigEntries with_overrides(ConfigEntries entries,
                             const std::vector<std::pair<std::string, std::string>>& overrides) {
  for (const auto& [key, value] : overrides) {
    if (section_of(key).empty()) throw ConfigError(0, "unknown key '" + key + "'");
    if (trim(value).empty()) throw ConfigError(0, "missing value for key '" + key + "'");
    entries[key] = {trim(value), 0};
  }
  return entries;
}

LeslieMaterial material_from(const ConfigEntries& entries) {
  const Reader r(entries);
  LeslieMaterial m;
  const std::string name = r.text("preset", "");
  if (!name.empty()) {
    try {
      m = preset(name);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(r.line("preset"), e.what());
    }
  } else {
    for (const auto& key : kMaterialKeys) {
      if (!r.has(key)) throw ConfigError(0, "missing required key '" + key + "' (or set preset)");
    }
  }
  for (const auto& key : kMaterialKeys) material_field(m, key) = r.number(key, material_field(m, key));
  return m;
}

RunConfig resolve(const ConfigEntries& entries) {
  const Reader r(entries);
  RunConfig cfg;

  cfg.preset = r.text("preset", "");
  cfg.material = material_from(entries);
  const ValidationReport report = validate(cfg.material);
  if (!report.ok) {
    std::string names;
    for (const auto& v : report.violations) names += (names.empty() ? "" : ", ") + v.relation;
    throw ConfigError(0, "material violates: " + names);
  }
  MaterialBounds bounds;
  try {
    bounds = bounds_of(cfg.material);
  } catch (const std::exception& e) {
    throw ConfigError(0, e.what());
  }
  const bool constant_speed = cfg.preset == "constant-speed";

  // initial data
  ProfileFamily family;
  try {
    family = profile_family_from(r.text("family", "theorem"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(r.line("family"), e.what());
  }
  const double epsilon = r.number("epsilon", 0.05);
  r.require(epsilon > 0.0, "epsilon", "be positive");
  const double theta_star = r.number("theta_star", 0.25 * std::numbers::pi);
  const double slack = r.number("amplitude_slack", 1.1);
  r.require(slack >= 1.0, "amplitude_slack", "be at least 1");
  const double smooth_amplitude = r.number("smooth_amplitude", 0.1);
  r.require(smooth_amplitude > 0.0, "smooth_amplitude", "be positive");
  const bool enforce = r.flag("enforce_hypotheses", !constant_speed);
  std::optional<double> amplitude = r.number_or_auto("amplitude");
  if (!r.has("amplitude") && constant_speed) amplitude = 5.0;
  if (amplitude) r.require(*amplitude > 0.0, "amplitude", "be positive or auto");

  if (family == ProfileFamily::theorem) {
    try {
      cfg.spec = make_theorem_spec(cfg.material, epsilon, theta_star, amplitude, slack, enforce);
    } catch (const std::exception& e) {
      throw ConfigError(r.line("amplitude"), e.what());
    }
  } else {
    cfg.spec.family = ProfileFamily::smooth;
    cfg.spec.epsilon = epsilon;
    cfg.spec.theta_star = theta_star;
    cfg.spec.amplitude_slack = slack;
    cfg.spec.enforce_hypotheses = enforce;
    cfg.spec.smooth_amplitude = smooth_amplitude;
  }

  // grid
  try {
    cfg.grid = Grid(r.number("x_min", -4.0), r.number("x_max", 5.0), r.count("nx", 32769));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(r.line("nx"), e.what());
  }

  // solver
  SolverConfig& s = cfg.solver;
  s.cfl = r.number("cfl", s.cfl);
  r.require(s.cfl > 0.0 && s.cfl <= 0.9, "cfl", "lie in (0, 0.9]");
  const std::optional<double> t_end = r.number_or_auto("t_end");
  s.t_end = t_end ? *t_end : std::min(1.0, 1.2 * blowup_bound_T(bounds.damping_sup));
  r.require(s.t_end > 0.0, "t_end", "be positive or auto");
  s.blowup_threshold = r.number_or_auto("blowup_threshold");
  if (s.blowup_threshold) {
    r.require(*s.blowup_threshold > 0.0, "blowup_threshold", "be positive or auto");
  }
  s.blowup_factor = r.number("blowup_factor", s.blowup_factor);
  r.require(s.blowup_factor > 0.0, "blowup_factor", "be positive");
  s.gradient_resolution_factor = r.number("gradient_resolution_factor", s.gradient_resolution_factor);
  r.require(s.gradient_resolution_factor > 0.0, "gradient_resolution_factor", "be positive");
  s.heat_weight = r.number("heat_weight", s.heat_weight);
  r.require(s.heat_weight >= 0.5 && s.heat_weight <= 1.0, "heat_weight", "lie in [0.5, 1]");
  s.snapshot_stride = r.count("snapshot_stride", 1000);
  s.trace = r.flag("trace", true);
  s.trace_start_x = r.number("trace_start_x", 0.0);

  // the data support plus the distance a wave covers by t_end must fit
  const InitialProfile profile(cfg.spec, cfg.material);
  const double margin = bounds.C_U * s.t_end + 1.0;
  if (!cfg.grid.contains(profile.support_left() - margin, profile.support_right() + margin)) {
    throw ConfigError(r.line("x_min"), "grid [" + format_double(cfg.grid.x_min) + ", " +
                                           format_double(cfg.grid.x_max) + "] must cover [" +
                                           format_double(profile.support_left() - margin) + ", " +
                                           format_double(profile.support_right() + margin) + "]");
  }

  // output
  cfg.output_dir = r.text("directory", "out");
  const bool expect_blowup =
      family == ProfileFamily::theorem && enforce && cfg.material.c_prime(theta_star) > 0.0;
  const std::string expectation =
      r.text("expectation", expect_blowup ? "blowup" : "completion");
  if (expectation == "blowup") {
    cfg.expectation = Expectation::blowup;
  } else if (expectation == "completion") {
    cfg.expectation = Expectation::completion;
  } else {
    throw ConfigError(r.line("expectation"), "expectation must be blowup or completion");
  }
  return cfg;
}

RunConfig parse_config(const std::string& text) { return resolve(parse_entries(text)); }

std::string to_text(const RunConfig& c) {
  std::ostringstream out;
  auto num = [&](const char* key, double v) { out << key << " = " << format_double(v) << "\n"; };

  out << "[material]\n";
  if (!c.preset.empty()) out << "preset = " << c.preset << "\n";
  for (std::size_t i = 0; i < 6; ++i) num(kMaterialKeys[i].c_str(), c.material.alpha[i]);
  num("gamma1", c.material.gamma1);
  num("gamma2", c.material.gamma2);
  num("K1", c.material.K1);
  num("K3", c.material.K3);

  out << "\n[initial_data]\n";
  out << "family = " << to_string(c.spec.family) << "\n";
  num("epsilon", c.spec.epsilon);
  num("theta_star", c.spec.theta_star);
  if (c.spec.family == ProfileFamily::theorem) {
    num("amplitude", c.spec.amplitude);
  } else {
    out << "amplitude = auto\n";
  }
  num("amplitude_slack", c.spec.amplitude_slack);
  out << "enforce_hypotheses = " << (c.spec.enforce_hypotheses ? "true" : "false") << "\n";
  num("smooth_amplitude", c.spec.smooth_amplitude);

  out << "\n[grid]\n";
  num("x_min", c.grid.x_min);
  num("x_max", c.grid.x_max);
  out << "nx = " << c.grid.nx << "\n";

  out << "\n[solver]\n";
  num("cfl", c.solver.cfl);
  num("t_end", c.solver.t_end);
  if (c.solver.blowup_threshold) {
    num("blowup_threshold", *c.solver.blowup_threshold);
  } else {
    out << "blowup_threshold = auto\n";
  }
  num("blowup_factor", c.solver.blowup_factor);
  num("gradient_resolution_factor", c.solver.gradient_resolution_factor);
  num("heat_weight", c.solver.heat_weight);
  out << "snapshot_stride = " << c.solver.snapshot_stride << "\n";
  out << "trace = " << (c.solver.trace ? "true" : "false") << "\n";
  num("trace_start_x", c.solver.trace_start_x);

  out << "\n[output]\n";
  out << "directory = " << c.output_dir << "\n";
  out << "expectation = " << to_string(c.expectation) << "\n";
  return out.str();
}

}  // namespace cusplab
