// Command-line frontend: scenario materialization, estimator design,
// verification, closed-loop simulation, and plug-in/unplug updates over
// stable JSON/CSV files.
//
// Exit codes: 0 = success, 2 = the procedure stopped at a designed check
// (not-Schur recursion, rejected plug-in, ...), 1 = usage or runtime error.

#include <exception>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dse/design.hpp"
#include "dse/errors.hpp"
#include "dse/json_io.hpp"
#include "dse/network_model.hpp"
#include "dse/power_network.hpp"
#include "dse/simulation.hpp"
#include "dse/verify.hpp"

namespace {

using namespace dse;

constexpr int kExitSuccess = 0;
constexpr int kExitError = 1;
constexpr int kExitStopped = 2;

struct CommonDesignFlags {
  std::string mode = "frobenius";
  int horizon = 0;
  int horizon_cap = 12;
  bool keep_zero_exchanges = false;
};

DesignConfig to_config(const CommonDesignFlags& flags) {
  DesignConfig config;
  if (flags.mode == "frobenius") {
    config.coupling_mode = CouplingMode::Frobenius;
  } else if (flags.mode == "direct_mu") {
    config.coupling_mode = CouplingMode::DirectMu;
  } else {
    throw ConfigError("unknown coupling mode '" + flags.mode + "'");
  }
  config.horizon = flags.horizon;
  config.horizon_cap = flags.horizon_cap;
  config.revise_exchange = !flags.keep_zero_exchanges;
  return config;
}

void add_design_flags(CLI::App* cmd, CommonDesignFlags& flags) {
  cmd->add_option("--mode", flags.mode, "Cross-gain objective: frobenius or direct_mu")
      ->check(CLI::IsMember({"frobenius", "direct_mu"}));
  cmd->add_option("--horizon", flags.horizon,
                  "Contraction horizon (0 = automatic per subsystem)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--horizon-cap", flags.horizon_cap,
                  "Upper limit for the automatic horizon probe")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--keep-zero-exchanges", flags.keep_zero_exchanges,
                "Do not drop measurement exchanges whose designed gain is zero");
}

int report_status(const DesignReport& report) {
  if (report.success()) {
    std::cout << "design succeeded: " << report.subsystems.size()
              << " subsystems, rho=" << format_shortest(report.theta.rho)
              << ", region determined after " << report.admissible.k_star << " steps\n";
    return kExitSuccess;
  }
  std::cout << "stopped: " << to_string(report.status);
  if (report.stopped_at >= 0) std::cout << " at subsystem " << report.stopped_at;
  if (report.status == DesignStatus::StoppedNotSchur)
    std::cout << " (recursion matrix not Schur, rho=" << format_shortest(report.theta.rho)
              << ")";
  std::cout << "\n";
  return kExitStopped;
}

int cmd_scenario(const std::string& name, const std::string& config_path,
                 const std::string& out) {
  PowerScenario scenario;
  if (!config_path.empty()) {
    scenario = scenario_from_json(read_text_file(config_path));
  } else {
    scenario = builtin_scenario(name);
  }
  std::vector<std::string> warnings;
  const NetworkModel model = build_power_network(scenario, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  write_text_file(out, model_to_json(model));
  std::cout << "wrote " << out << " (" << model.size() << " subsystems)\n";
  return kExitSuccess;
}

int cmd_design(const std::string& model_path, const std::string& out,
               const CommonDesignFlags& flags, bool verbose) {
  const NetworkModel model = model_from_json(read_text_file(model_path));
  const DesignReport report = design(model, to_config(flags));
  write_text_file(out, report_to_json(report));
  if (verbose)
    for (const auto& line : report.log) std::cout << "  " << line << "\n";
  return report_status(report);
}

int cmd_verify(const std::string& model_path, const std::string& design_path, int samples,
               unsigned long long seed) {
  const NetworkModel model = model_from_json(read_text_file(model_path));
  const DesignReport report = report_from_json(read_text_file(design_path));
  if (!report.success()) {
    std::cout << "design status is " << to_string(report.status) << "; nothing to verify\n";
    return kExitStopped;
  }
  VerifyConfig config;
  config.samples = samples;
  config.seed = seed;
  const VerifyReport result = verify_design(model, report, config);
  std::cout << "checked " << result.checked << " scaling vectors\n"
            << "worst admissibility margin: " << format_shortest(result.worst_admissibility)
            << "\n"
            << "worst invariance margin:    " << format_shortest(result.worst_invariance)
            << "\n"
            << "worst region margin:        " << format_shortest(result.worst_recursion)
            << "\n";
  if (!result.ok) {
    std::cout << "FAIL: " << result.failure << "\n";
    return kExitError;
  }
  std::cout << "all conditions hold\n";
  return kExitSuccess;
}

int cmd_simulate(const std::string& model_path, const std::string& design_path, int steps,
                 unsigned long long seed, const std::string& disturbance, double fraction,
                 const std::string& out, const std::string& summary_path) {
  const NetworkModel model = model_from_json(read_text_file(model_path));
  const DesignReport report = report_from_json(read_text_file(design_path));
  if (!report.success()) {
    std::cout << "design status is " << to_string(report.status) << "; cannot simulate\n";
    return kExitStopped;
  }
  SimulationConfig config;
  config.steps = steps;
  config.seed = seed;
  config.init_fraction = fraction;
  if (disturbance == "none") {
    config.disturbance = DisturbanceMode::None;
  } else if (disturbance == "uniform") {
    config.disturbance = DisturbanceMode::Uniform;
  } else {
    config.disturbance = DisturbanceMode::Extremes;
  }
  const SimulationTrace trace = simulate(model, report, config);
  write_text_file(out, trace_to_csv(model, trace));

  double peak = 0;
  for (const double e : trace.max_error) peak = std::max(peak, e);
  nlohmann::json summary;
  summary["schema_version"] = kSchemaVersion;
  summary["steps"] = steps;
  summary["seed"] = seed;
  summary["disturbance"] = to_string(config.disturbance);
  summary["violations"] = trace.violations;
  summary["max_error_initial"] = trace.max_error.front();
  summary["max_error_final"] = trace.max_error.back();
  summary["max_error_peak"] = peak;
  const std::string summary_text = summary.dump(2) + "\n";
  if (!summary_path.empty()) write_text_file(summary_path, summary_text);
  std::cout << summary_text;
  std::cout << "wrote " << out << "\n";
  return kExitSuccess;
}

int cmd_plugin(const std::string& model_path, const std::string& design_path,
               const std::string& request_path, const std::string& out_model,
               const std::string& out_design, const CommonDesignFlags& flags) {
  const NetworkModel model = model_from_json(read_text_file(model_path));
  const DesignReport report = report_from_json(read_text_file(design_path));
  const PlugInRequest request = plugin_request_from_json(read_text_file(request_path));
  const PlugInOutcome outcome = plug_in(model, report, request, to_config(flags));
  if (!outcome.accepted) {
    std::cout << "plug-in rejected: " << to_string(outcome.status) << "\n";
    return kExitStopped;
  }
  write_text_file(out_model, model_to_json(outcome.model));
  write_text_file(out_design, report_to_json(outcome.report));
  std::cout << "plug-in accepted: network now has " << outcome.model.size()
            << " subsystems, rho=" << format_shortest(outcome.report.theta.rho) << "\n";
  return kExitSuccess;
}

int cmd_unplug(const std::string& model_path, const std::string& design_path, int leaving,
               bool refresh, const std::string& out_model, const std::string& out_design) {
  const NetworkModel model = model_from_json(read_text_file(model_path));
  const DesignReport report = report_from_json(read_text_file(design_path));
  const UnplugOutcome outcome = unplug(model, report, leaving, refresh);
  const auto flag = [](bool ok) { return ok ? "ok" : "VIOLATED"; };
  std::cout << "rho: " << format_shortest(report.theta.rho) << " -> "
            << format_shortest(outcome.report.theta.rho) << "\n"
            << "region invariance:    " << flag(outcome.invariance_ok) << "\n"
            << "region admissibility: " << flag(outcome.admissibility_ok) << "\n"
            << "equilibrium inside:   " << flag(outcome.equilibrium_ok) << "\n";
  if (!outcome.strongly_connected)
    std::cerr << "warning: remaining network is not strongly connected\n";
  if (!outcome.report.success()) {
    std::cout << "unplug stopped: " << to_string(outcome.report.status) << "\n";
    return kExitStopped;
  }
  write_text_file(out_model, model_to_json(outcome.model));
  write_text_file(out_design, report_to_json(outcome.report));
  std::cout << "wrote " << out_model << " and " << out_design << "\n";
  if (!(outcome.invariance_ok && outcome.admissibility_ok && outcome.equilibrium_ok))
    return kExitError;
  return kExitSuccess;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Design toolkit and simulator for distributed state estimation "
               "with guaranteed error bounds"};
  app.require_subcommand(1);

  // scenario
  std::string scn_name = "example2", scn_config, scn_out = "model.json";
  CLI::App* scenario = app.add_subcommand(
      "scenario", "Materialize a power-network scenario into a model file");
  scenario->add_option("--name", scn_name, "Builtin scenario: example1, example2, example3");
  scenario->add_option("--config", scn_config, "Scenario JSON file (overrides --name)")
      ->check(CLI::ExistingFile);
  scenario->add_option("--out", scn_out, "Output model file");

  // design
  std::string dsg_model, dsg_out = "design.json";
  CommonDesignFlags dsg_flags;
  bool dsg_verbose = false;
  CLI::App* design_cmd = app.add_subcommand("design", "Design the distributed estimator");
  design_cmd->add_option("model", dsg_model, "Model JSON file")->required();
  design_cmd->add_option("--out", dsg_out, "Output design file");
  add_design_flags(design_cmd, dsg_flags);
  design_cmd->add_flag("--verbose", dsg_verbose, "Print the per-step design log");

  // verify
  std::string vrf_model, vrf_design;
  int vrf_samples = 200;
  unsigned long long vrf_seed = 1;
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "Re-check the invariance conditions of a design");
  verify_cmd->add_option("model", vrf_model, "Model JSON file")->required();
  verify_cmd->add_option("design", vrf_design, "Design JSON file")->required();
  verify_cmd->add_option("--samples", vrf_samples, "Random scaling vectors on top of corners")
      ->check(CLI::NonNegativeNumber);
  verify_cmd->add_option("--seed", vrf_seed, "Sampling seed");

  // simulate
  std::string sim_model, sim_design, sim_out = "trace.csv", sim_summary;
  std::string sim_disturbance = "uniform";
  int sim_steps = 50;
  unsigned long long sim_seed = 0;
  double sim_fraction = 1.0;
  CLI::App* simulate_cmd =
      app.add_subcommand("simulate", "Run the closed estimation loop and write a trace");
  simulate_cmd->add_option("model", sim_model, "Model JSON file")->required();
  simulate_cmd->add_option("design", sim_design, "Design JSON file")->required();
  simulate_cmd->add_option("--steps", sim_steps, "Number of steps")
      ->check(CLI::Range(1, 1000000000));
  simulate_cmd->add_option("--seed", sim_seed, "Disturbance seed");
  simulate_cmd->add_option("--disturbance", sim_disturbance, "none, uniform, or extremes")
      ->check(CLI::IsMember({"none", "uniform", "extremes"}));
  simulate_cmd->add_option("--fraction", sim_fraction,
                           "Initial scaling as a fraction of the inscribed box corner")
      ->check(CLI::Range(0.0, 1.0));
  simulate_cmd->add_option("--out", sim_out, "Output CSV trace");
  simulate_cmd->add_option("--summary", sim_summary, "Optional JSON summary file");

  // plugin
  std::string plg_model, plg_design, plg_request;
  std::string plg_out_model = "model_plugged.json", plg_out_design = "design_plugged.json";
  CommonDesignFlags plg_flags;
  CLI::App* plugin_cmd =
      app.add_subcommand("plugin", "Add a subsystem to an already designed network");
  plugin_cmd->add_option("model", plg_model, "Model JSON file")->required();
  plugin_cmd->add_option("design", plg_design, "Design JSON file")->required();
  plugin_cmd->add_option("request", plg_request, "Plug-in request JSON file")->required();
  plugin_cmd->add_option("--out-model", plg_out_model, "Output model file");
  plugin_cmd->add_option("--out-design", plg_out_design, "Output design file");
  add_design_flags(plugin_cmd, plg_flags);

  // unplug
  std::string unp_model, unp_design;
  std::string unp_out_model = "model_reduced.json", unp_out_design = "design_reduced.json";
  int unp_sub = -1;
  bool unp_refresh = false;
  CLI::App* unplug_cmd =
      app.add_subcommand("unplug", "Remove a subsystem and re-check the scaling region");
  unplug_cmd->add_option("model", unp_model, "Model JSON file")->required();
  unplug_cmd->add_option("design", unp_design, "Design JSON file")->required();
  unplug_cmd->add_option("--sub", unp_sub, "Index of the leaving subsystem")->required();
  unplug_cmd->add_flag("--refresh", unp_refresh,
                       "Rebuild the scaling region instead of slicing it");
  unplug_cmd->add_option("--out-model", unp_out_model, "Output model file");
  unplug_cmd->add_option("--out-design", unp_out_design, "Output design file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitSuccess : kExitError;
  }

  try {
    if (scenario->parsed()) return cmd_scenario(scn_name, scn_config, scn_out);
    if (design_cmd->parsed()) return cmd_design(dsg_model, dsg_out, dsg_flags, dsg_verbose);
    if (verify_cmd->parsed()) return cmd_verify(vrf_model, vrf_design, vrf_samples, vrf_seed);
    if (simulate_cmd->parsed())
      return cmd_simulate(sim_model, sim_design, sim_steps, sim_seed, sim_disturbance,
                          sim_fraction, sim_out, sim_summary);
    if (plugin_cmd->parsed())
      return cmd_plugin(plg_model, plg_design, plg_request, plg_out_model, plg_out_design,
                        plg_flags);
    if (unplug_cmd->parsed())
      return cmd_unplug(unp_model, unp_design, unp_sub, unp_refresh, unp_out_model,
                        unp_out_design);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
