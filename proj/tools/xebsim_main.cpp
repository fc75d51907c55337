#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "xebsim/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Interleaved gate benchmarking with single-qubit references: "
               "simulation and post-processing toolkit"};
  app.require_subcommand(1);

  xebsim::CommonOptions common;
  std::uint64_t seed_value = 0;

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    if (needs_config) {
      cmd->add_option("--config", common.config_path, "experiment configuration file")
          ->required()
          ->check(CLI::ExistingFile);
    }
    cmd->add_option("--seed", seed_value, "override the config seed")
        ->each([&](const std::string&) { common.seed_override = seed_value; });
    cmd->add_option("--out", common.out_dir, "output directory");
    cmd->add_option("--threads", common.threads, "worker threads (0 = auto)");
    cmd->add_option("--format", common.format, "curve table format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
  };

  CLI::App* simulate = app.add_subcommand("simulate", "run configured XEB/IRB protocols");
  add_common(simulate, true);
  CLI::App* interleave = app.add_subcommand("interleave", "interleaved gate fidelity study");
  add_common(interleave, true);
  CLI::App* dist = app.add_subcommand("dist-test", "output-distribution comparisons");
  add_common(dist, true);

  xebsim::FitCommandOptions fit;
  CLI::App* fit_cmd = app.add_subcommand("fit", "post-process external benchmarking data");
  fit_cmd->add_option("data", fit.data_path, "fidelity-point or counts CSV")
      ->required()
      ->check(CLI::ExistingFile);
  std::string ideal_path;
  fit_cmd->add_option("--ideal", ideal_path, "companion ideal-probability CSV for counts data")
      ->check(CLI::ExistingFile)
      ->each([&](const std::string& v) { fit.ideal_path = v; });
  fit_cmd->add_option("--model", fit.models,
                      "decay models to fit (exponential, f_single, additive)")
      ->delimiter(',');
  fit_cmd->add_option("--m-min", fit.m_min, "discard depths below this before fitting");
  fit_cmd->add_option("--qubits", fit.num_qubits, "qubit count for the f_single model");
  fit_cmd->add_option("--ref-errors", fit.ref_errors,
                      "single-qubit error rates e_i for the refined interleaved estimator")
      ->delimiter(',');
  fit_cmd->add_option("--ref-errors-stderr", fit.ref_errors_stderr,
                      "uncertainties of the supplied e_i")
      ->delimiter(',');
  fit_cmd->add_option("--bootstrap", fit.bootstrap_resamples, "bootstrap resamples");
  fit_cmd->add_option("--seed", fit.seed, "bootstrap seed");
  fit_cmd->add_option("--out", fit.out_dir, "output directory");
  fit_cmd->add_option("--format", fit.format, "report format")->check(CLI::IsMember({"csv", "json"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return xebsim::cmd_simulate(common);
    if (interleave->parsed()) return xebsim::cmd_interleave(common);
    if (dist->parsed()) return xebsim::cmd_dist_test(common);
    if (fit_cmd->parsed()) return xebsim::cmd_fit(fit);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
