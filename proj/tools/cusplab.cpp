// Command-line front end: run, sweep, refine, validate, presets.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "cusplab/config.hpp"
#include "cusplab/scenario.hpp"

using namespace cusplab;

namespace {

struct ConfigSource {
  std::string file;
  std::vector<std::string> sets;
  std::map<std::string, std::string> flags;  // --<key> value

  void attach(CLI::App* cmd) {
    cmd->add_option("-c,--config", file, "config file")->check(CLI::ExistingFile);
    cmd->add_option("--set", sets, "override as key=value (repeatable)");
    for (const auto& [key, section] : config_keys()) {
      cmd->add_option("--" + key, flags[key], "[" + section + "] " + key);
    }
  }

  ConfigEntries entries() const {
    std::string text;
    if (!file.empty()) {
      std::ifstream in(file);
      if (!in) throw std::runtime_error("cannot read " + file);
      std::ostringstream buf;
      buf << in.rdbuf();
      text = buf.str();
    }
    std::vector<std::pair<std::string, std::string>> overrides;
    for (const auto& [key, value] : flags) {
      if (!value.empty()) overrides.emplace_back(key, value);
    }
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw ConfigError(0, "--set expects key=value, got '" + s + "'");
      overrides.emplace_back(s.substr(0, eq), s.substr(eq + 1));
    }
    ConfigEntries out = with_overrides(parse_entries(text), overrides);
    // with neither a preset nor an explicit material, use the general preset
    if (!out.count("preset") && !out.count("alpha1")) out["preset"] = {"general", 0};
    return out;
  }

  RunConfig load() const { return resolve(entries()); }
};

void print_summary(const ScenarioOutcome& o) {
  const BlowupReport& rep = o.result.report;
  std::cout << "output      " << o.directory.string() << "\n"
            << "steps       " << o.result.steps << "\n"
            << "t_final     " << o.result.final_state.t << "\n"
            << "E(0)        " << o.result.initial.report.energy << "\n"
            << "T bound     " << rep.T_bound << "\n"
            << "detected    " << (rep.detected ? "yes" : "no") << "\n";
  if (rep.detected) {
    std::cout << "t0          " << rep.t0 << "\n"
              << "trigger     " << to_string(rep.trigger) << "\n"
              << "cusp        " << (rep.cusp_signature ? "yes" : "no") << "\n";
  }
  std::cout << "S growth    " << rep.S_growth << "\n"
            << "max sup|R|  " << rep.max_sup_R << " (cap " << rep.R_cap << ")\n"
            << "max sup|J|  " << o.max_sup_J << "\n";
  if (!o.expectation_met) std::cerr << "warning: outcome differs from the configured expectation\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Director/flow cusp formation experiments"};
  app.require_subcommand(1);

  ConfigSource run_src, sweep_src, refine_src, validate_src;

  auto* run_cmd = app.add_subcommand("run", "run one configuration");
  run_src.attach(run_cmd);

  auto* sweep_cmd = app.add_subcommand("sweep", "epsilon sweep with log-log slopes");
  sweep_src.attach(sweep_cmd);
  std::vector<double> eps_list{0.2, 0.1, 0.05};
  sweep_cmd->add_option("--eps", eps_list, "decreasing epsilon values")->delimiter(',');

  auto* refine_cmd = app.add_subcommand("refine", "grid refinement study on smooth data");
  refine_src.attach(refine_cmd);
  int levels = 3;
  refine_cmd->add_option("--levels", levels, "number of grid levels (>= 3)");

  auto* validate_cmd = app.add_subcommand("validate", "check material relations only");
  validate_src.attach(validate_cmd);

  app.add_subcommand("presets", "list named materials");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kError;
  }

  try {
    if (app.got_subcommand("presets")) {
      for (const auto& name : preset_names()) {
        const LeslieMaterial m = preset(name);
        std::cout << name << ": alpha =";
        for (double a : m.alpha) std::cout << " " << format_double(a);
        std::cout << ", gamma1 = " << format_double(m.gamma1)
                  << ", gamma2 = " << format_double(m.gamma2) << ", K1 = " << format_double(m.K1)
                  << ", K3 = " << format_double(m.K3) << "\n";
      }
      return kCompleted;
    }

    if (app.got_subcommand("validate")) {
      const LeslieMaterial m = material_from(validate_src.entries());
      const ValidationReport rep = validate(m);
      for (const auto& v : rep.violations) {
        std::cout << "violated " << v.relation << " (slack " << format_double(v.slack) << ")\n";
      }
      if (rep.ok) {
        const MaterialBounds b = bounds_of(m);
        std::cout << "ok\n"
                  << "g in [" << b.g_L << ", " << b.g_U << "], h in [" << b.h_L << ", " << b.h_U
                  << "], c in [" << b.C_L << ", " << b.C_U << "]\n"
                  << "damping in [" << b.damping_margin << ", " << b.damping_sup << "]\n"
                  << "T = " << blowup_bound_T(b.damping_sup) << "\n";
      }
      return rep.ok ? kCompleted : kError;
    }

    if (app.got_subcommand("run")) {
      const RunConfig cfg = run_src.load();
      const ScenarioOutcome o = run_scenario(cfg);
      print_summary(o);
      return o.exit_status;
    }

    if (app.got_subcommand("sweep")) {
      const RunConfig cfg = sweep_src.load();
      const SweepResult s = epsilon_sweep(cfg, eps_list);
      for (const auto& r : s.rows) {
        std::cout << "eps " << r.epsilon << "  E0 " << r.E0 << "  max sup|J| " << r.max_sup_J
                  << "  detected " << (r.detected ? "yes" : "no") << "\n";
      }
      std::cout << "E0 slope " << s.E0_slope << ", sup|J| slope " << s.sup_J_slope
                << (s.sup_J_decreasing ? " (decreasing)" : " (not decreasing)") << "\n";
      return kCompleted;
    }

    if (app.got_subcommand("refine")) {
      const RunConfig cfg = refine_src.load();
      const RefinementResult r = refinement_study(cfg, levels, cfg.output_dir);
      for (const auto& l : r.levels) {
        std::cout << "nx " << l.nx << "  diff theta " << l.diff_theta << "  diff u " << l.diff_u
                  << "  order theta " << l.order_theta << "  order u " << l.order_u
                  << "  budget " << l.budget_residual << "\n";
      }
      std::cout << (r.passed ? "orders ok" : "order below 0.8") << "\n";
      return r.passed ? kCompleted : kError;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
