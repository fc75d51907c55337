#ifndef XEBSIM_DISTRIBUTIONS_HPP_
#define XEBSIM_DISTRIBUTIONS_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "xebsim/matrix.hpp"
#include "xebsim/rng.hpp"

namespace xebsim {

// Output bitstring probabilities pooled over circuits (all 2^n bitstrings of
// every circuit).
struct ProbabilitySample {
  std::vector<double> values;
  int num_qubits = 0;
  std::string source_tag;
};

// Porter-Thomas CDF for Hilbert-space dimension d: 1 - (1 - P)^(d-1).
double porter_thomas_cdf(double p, int dim);

// CDF of the factorized single-qubit outcome distribution for n qubits:
// P sum_{k=0}^{n-1} (-ln P)^k / k!  (density (-ln P)^(n-1) / (n-1)!).
double factorized_cdf(double p, int n);

// Exact discrete distribution with integer enumeration counts.
struct StepDistribution {
  std::vector<double> values;          // ascending support
  std::vector<std::uint64_t> counts;   // occurrence counts over the enumeration
  std::uint64_t total = 0;

  double weight(std::size_t i) const { return static_cast<double>(counts[i]) / total; }
  double cdf(double p) const;
};

// Distribution of density-matrix diagonal elements over all states the full
// n-qubit Clifford group generates from |0..0>. Support is {0} u {2^-k}.
StepDistribution clifford_step_distribution(int n);

// Product distribution of n independent single-qubit Clifford step values.
StepDistribution factorized_clifford_step_distribution(int n);

// Kolmogorov-Smirnov sup distance between the empirical CDF of `sample` and a
// reference CDF.
double ks_distance(const ProbabilitySample& sample, const std::function<double(double)>& cdf);

// Total-variation distance between the sample (snapped to the discrete
// support; off-support values count as their own bin) and a step reference.
double tv_distance(const ProbabilitySample& sample, const StepDistribution& ref);

// Pooled probabilities of `num_states` random product states (per-qubit Haar).
ProbabilitySample sample_factorized_ensemble(int n, int num_states, RngStream& rng);

// Pooled probabilities of `num_states` global Haar-random states.
ProbabilitySample sample_haar_ensemble(int n, int num_states, RngStream& rng);

// Circuit-ensemble descriptor for randomization-validity checks.
enum class ReferenceKind { kClifford, kHaar };

struct EnsembleSpec {
  ReferenceKind kind = ReferenceKind::kClifford;
  bool factorized = true;  // per-qubit layers vs one n-qubit operation per layer
  int num_qubits = 2;
  std::optional<Matrix> interleaved_gate;

  std::string label() const;
};

// Pooled output probabilities of `num_circuits` noiseless circuits of the
// given depth drawn from the ensemble. Circuits derive per-index RNG streams,
// so results are identical for any thread count.
ProbabilitySample sample_circuit_ensemble(const EnsembleSpec& spec, int depth, int num_circuits,
                                          std::uint64_t seed, int threads = 1);

enum class RandomizationVerdict { kMultiqubitLike, kFactorizedLike, kIndeterminate };

const char* verdict_name(RandomizationVerdict v);

struct DistributionVerdict {
  double ks_to_porter_thomas = 0.0;
  double ks_to_factorized = 0.0;    // TV against the factorized step law for Clifford ensembles
  double ks_to_clifford_step = 0.0; // TV distance (step reference)
  RandomizationVerdict verdict = RandomizationVerdict::kIndeterminate;
  // KS comparisons use the 99th-percentile statistic 1.63/sqrt(pooled values).
  // TV comparisons use 1.63/sqrt(circuits): the 2^n pooled values of one
  // Clifford state are fully correlated, so circuits are the effective sample.
  double threshold = 0.0;
  double tv_threshold = 0.0;
  int sample_size = 0;
  int num_circuits = 0;
};

// Simulate the ideal (noiseless) ensemble at the given depth and test which
// multi-qubit reference its pooled output distribution matches.
DistributionVerdict validate_reference(const EnsembleSpec& spec, int depth, int num_circuits,
                                       std::uint64_t seed, int threads = 1);

}  // namespace xebsim

#endif  // XEBSIM_DISTRIBUTIONS_HPP_
