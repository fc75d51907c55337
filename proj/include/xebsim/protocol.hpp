#ifndef XEBSIM_PROTOCOL_HPP_
#define XEBSIM_PROTOCOL_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "xebsim/decay.hpp"
#include "xebsim/distributions.hpp"
#include "xebsim/simulator.hpp"
#include "xebsim/xeb.hpp"

namespace xebsim {

enum class Protocol { kXebSingle, kXebMulti, kIrbClifford, kXebInterleaved };

const char* protocol_name(Protocol p);
Protocol protocol_from_name(const std::string& name);

struct ExperimentPlan {
  Protocol protocol = Protocol::kXebSingle;
  int num_qubits = 1;
  std::vector<int> depths;
  int circuits_per_depth = 50;
  long long shots = 0;  // 0 = exact probabilities
  LocalNoiseModel noise;
  std::optional<Matrix> target_gate;  // required for xeb-interleaved
  std::uint64_t seed = 0;
  int m_min = 4;
  int bootstrap_resamples = 1000;
  int threads = 1;  // 0 = hardware concurrency

  void validate() const;  // throws std::invalid_argument
};

// Interleaved-gate fidelity record: the refined (joint-decay-referenced) and
// the naive (additive-referenced) estimates with uncertainties propagated in
// quadrature, plus their average-gate-fidelity conversions.
struct GateFidelityEstimate {
  double p_int = 0.0, p_int_std_error = 0.0;
  double refined_p = 0.0, refined_std_error = 0.0;
  double naive_p = 0.0, naive_std_error = 0.0;
  double refined_avg_fidelity = 0.0, refined_avg_std_error = 0.0;
  double naive_avg_fidelity = 0.0, naive_avg_std_error = 0.0;
  int gate_dim = 4;
  std::vector<double> errors_used;       // e_i entering the reference parameter
  std::vector<double> errors_std_error;  // their uncertainties
  std::string errors_source;             // "isolated-fit" | "simultaneous-fit" | "user"
};

struct ExperimentResult {
  ExperimentPlan plan;
  std::vector<FidelityPoint> curve;  // one per depth; std_error from bootstrap
  std::vector<std::vector<CircuitRecord>> records;  // XEB protocols: [depth][circuit]
  std::vector<std::vector<double>> survivals;       // IRB: normalized (s - 1/d)/(1 - 1/d)
  std::vector<DecayFit> fits;                       // fitted models (primary first)
  DecayModel primary_model = DecayModel::kExponential;
  std::vector<double> primary_param_std_error;      // bootstrap, aligned with primary params
  int bootstrap_resamples_used = 0;
  std::optional<GateFidelityEstimate> gate_estimate;
  std::optional<DistributionVerdict> verdict;

  const DecayFit& primary_fit() const;
};

// Run one benchmarking protocol end to end: build circuits per depth, simulate
// under the plan's noise, aggregate fidelity points, bootstrap uncertainties,
// and fit decay models. Deterministic for a fixed plan (including seed),
// independent of thread count.
ExperimentResult run_experiment(const ExperimentPlan& plan);

struct BootstrapResult {
  std::vector<double> per_depth_std_error;  // NaN where fewer than 2 circuits
  std::vector<double> param_std_error;
  int resamples_used = 0;
};

// Resample circuits with replacement within each depth, recompute the
// per-depth estimator and refit; std errors are standard deviations over
// resamples. num_resamples must be >= 100.
BootstrapResult bootstrap_xeb(const std::vector<std::vector<CircuitRecord>>& records_by_depth,
                              const std::vector<int>& depths, DecayModel model,
                              const FitOptions& opts, int num_resamples, std::uint64_t seed);
BootstrapResult bootstrap_survival(const std::vector<std::vector<double>>& survivals_by_depth,
                                   const std::vector<int>& depths, DecayModel model,
                                   const FitOptions& opts, int num_resamples, std::uint64_t seed);

// Refined and naive gate estimates from an interleaved decay parameter and
// single-qubit error rates.
GateFidelityEstimate interleaved_gate_estimate(double p_int, double p_int_std_error,
                                               const std::vector<double>& errors,
                                               const std::vector<double>& errors_std_error,
                                               int gate_dim, const std::string& errors_source);

struct IsolatedFitResult {
  std::vector<double> p;          // fitted p_i, one per qubit
  std::vector<double> std_error;  // bootstrap
};

// Benchmark each qubit in isolation (n=1 XEB) and fit its exponential decay.
IsolatedFitResult isolated_single_qubit_fit(const LocalNoiseModel& noise,
                                            const std::vector<int>& depths,
                                            int circuits_per_depth, long long shots,
                                            std::uint64_t seed, int bootstrap_resamples = 1000,
                                            int threads = 1);

// Standard-IRB gate estimate from a reference and an interleaved decay.
struct IrbGateEstimate {
  double p_ref = 0.0, p_ref_std_error = 0.0;
  double p_int = 0.0, p_int_std_error = 0.0;
  double p_gate = 0.0, p_gate_std_error = 0.0;
  double avg_fidelity = 0.0, avg_fidelity_std_error = 0.0;
};

IrbGateEstimate irb_gate_estimate(const ExperimentResult& reference,
                                  const ExperimentResult& interleaved);

// Full interleaved-benchmarking study: isolated single-qubit reference fits,
// the interleaved XEB run with the refined/naive estimates, the randomization
// verdict, and (optionally) a standard-IRB comparison.
struct InterleavedStudyOptions {
  int num_qubits = 2;
  std::vector<int> depths;
  std::vector<int> isolated_depths;  // empty: reuse depths
  int circuits_per_depth = 50;
  long long shots = 0;
  LocalNoiseModel noise;
  Matrix target_gate;
  std::string target_gate_name = "gate";
  std::uint64_t seed = 0;
  int m_min = 4;
  int bootstrap_resamples = 1000;
  int threads = 1;
  bool compare_irb = false;
  bool use_simultaneous_errors = false;  // e_i from a simultaneous f_single fit
  int verdict_circuits = 4000;
};

struct InterleavedStudyResult {
  IsolatedFitResult isolated;
  std::optional<ExperimentResult> simultaneous_reference;
  ExperimentResult interleaved;
  std::optional<ExperimentResult> irb_reference;
  std::optional<ExperimentResult> irb_interleaved;
  std::optional<IrbGateEstimate> irb_estimate;
  DistributionVerdict verdict;
};

InterleavedStudyResult run_interleaved_study(const InterleavedStudyOptions& options);

}  // namespace xebsim

#endif  // XEBSIM_PROTOCOL_HPP_
