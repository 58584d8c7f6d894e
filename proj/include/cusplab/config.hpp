#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cusplab/grid.hpp"
#include "cusplab/initial_data.hpp"
#include "cusplab/material.hpp"
#include "cusplab/solver.hpp"

namespace cusplab {

/// Parse or resolution failure. `line()` is 0 when the offending value came
/// from an override rather than from the text.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

enum class Expectation { blowup, completion };
std::string to_string(Expectation e);

/// Fully resolved run description. Every field is explicit; nothing is "auto".
struct RunConfig {
  std::string preset;  ///< empty when the material was given field by field
  LeslieMaterial material;
  InitialDataSpec spec;
  Grid grid;
  SolverConfig solver;
  std::string output_dir = "out";
  Expectation expectation = Expectation::blowup;

  bool operator==(const RunConfig&) const = default;
};

/// One `key = value` entry with the line it came from.
struct ConfigEntry {
  std::string value;
  int line = 0;
};
using ConfigEntries = std::map<std::string, ConfigEntry>;

/// Splits the text into entries, checking section placement and duplicates.
ConfigEntries parse_entries(const std::string& text);

/// Material from `preset` plus any individual field keys, without checking
/// the relations. Without a preset every field is required.
LeslieMaterial material_from(const ConfigEntries& entries);

/// Applies defaults, resolves "auto" values and validates everything.
RunConfig resolve(const ConfigEntries& entries);

/// parse_entries + resolve.
RunConfig parse_config(const std::string& text);

/// Entries overridden by `key=value` strings (flags win over the file).
ConfigEntries with_overrides(ConfigEntries entries,
                             const std::vector<std::pair<std::string, std::string>>& overrides);

/// Config text that parses back to an identical RunConfig.
std::string to_text(const RunConfig& config);

/// Every accepted key with its section.
const std::vector<std::pair<std::string, std::string>>& config_keys();

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

}  // namespace cusplab
