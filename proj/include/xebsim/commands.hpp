#ifndef XEBSIM_COMMANDS_HPP_
#define XEBSIM_COMMANDS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace xebsim {

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed_override;
  std::string out_dir;  // empty: use config value, else "out"
  int threads = 0;      // 0 = auto
  std::string format = "csv";
};

// simulate: run the configured XEB/IRB protocols, write report.json plus one
// plot-ready curve table per protocol.
int cmd_simulate(const CommonOptions& options);

// interleave: full interleaved study (isolated fits, interleaved run, refined
// and naive gate fidelities, randomization verdict, optional IRB comparison).
int cmd_interleave(const CommonOptions& options);

// dist-test: empirical and analytic CDF tables for the configured ensembles
// plus the distribution verdicts.
int cmd_dist_test(const CommonOptions& options);

struct FitCommandOptions {
  std::string data_path;
  std::optional<std::string> ideal_path;  // companion file for counts data
  std::vector<std::string> models;        // default: exponential
  int m_min = 1;
  int num_qubits = 0;                     // 0: infer (counts) or 1
  std::vector<double> ref_errors;         // e_i for the refined estimator
  std::vector<double> ref_errors_stderr;
  int bootstrap_resamples = 1000;
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  std::string format = "csv";
};

// fit: post-process external data (fidelity points or raw bitstring counts),
// fit requested models, and apply the refined estimator when reference error
// rates are supplied.
int cmd_fit(const FitCommandOptions& options);

}  // namespace xebsim

#endif  // XEBSIM_COMMANDS_HPP_
