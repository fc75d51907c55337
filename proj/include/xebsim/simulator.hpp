#ifndef XEBSIM_SIMULATOR_HPP_
#define XEBSIM_SIMULATOR_HPP_

#include <optional>
#include <vector>

#include "xebsim/matrix.hpp"
#include "xebsim/rng.hpp"

namespace xebsim {

// Per-qubit depolarizing parameters p_i (Pauli-transfer diag(1, p_i, p_i, p_i)
// per gate block), plus an optional depolarizing parameter for an interleaved
// gate. e_i := 1 - p_i.
struct LocalNoiseModel {
  std::vector<double> per_qubit_p;
  std::optional<double> interleaved_gate_p;

  int num_qubits() const { return static_cast<int>(per_qubit_p.size()); }
  bool is_noiseless() const;
  std::vector<double> errors() const;  // e_i = 1 - p_i
  void validate() const;               // throws std::invalid_argument

  static LocalNoiseModel noiseless(int n) { return {std::vector<double>(n, 1.0), {}}; }
};

// A benchmarking circuit: reference layers (full 2^n x 2^n unitaries), an
// optional gate interleaved after every layer, and an optional recovery gate
// applied noiselessly last. depth = layers.size().
struct Circuit {
  int num_qubits = 1;
  std::vector<Matrix> layers;
  std::optional<Matrix> interleaved_gate;
  std::vector<int> gate_qubits;  // qubits carrying the interleaved gate's noise; empty = all
  std::optional<Matrix> recovery_gate;

  int depth() const { return static_cast<int>(layers.size()); }
  int dim() const { return 1 << num_qubits; }
};

Matrix initial_density(int n);  // |0..0><0..0|
Vector initial_state(int n);    // |0..0>

// Throws SimulationIntegrityError when trace/Hermiticity/positivity fail.
void check_density_invariants(const Matrix& rho, const char* where);

// U rho U^dag with dimension check.
Matrix apply_unitary(const Matrix& rho, const Matrix& u);

// Depolarizing channel on a subset of qubits:
// rho -> p rho + (1-p) (Tr_S rho) x I/2^|S|   (identity inserted on S).
Matrix apply_depolarizing(const Matrix& rho, const std::vector<int>& qubits, double p, int n);

// Single-qubit convenience wrapper, Pauli-transfer diag(1, p, p, p).
Matrix apply_local_depolarizing(const Matrix& rho, int qubit, double p, int n);

// Exact density-matrix evolution: for each layer apply the layer unitary,
// then per-qubit depolarizing; then the interleaved gate and its noise (if
// any); the recovery gate is applied noiselessly last. Validates the output
// density invariants (and every intermediate step in debug builds).
Matrix run_noisy_circuit(const Circuit& circuit, const LocalNoiseModel& noise,
                         const Matrix* initial = nullptr);

// Noiseless pure-state evolution of the same circuit.
Vector run_ideal_circuit(const Circuit& circuit, const Vector* initial = nullptr);

// Diagonal of the noiseless final state; sums to 1 within 1e-12.
std::vector<double> ideal_probabilities(const Circuit& circuit, const Vector* initial = nullptr);

std::vector<double> density_diagonal(const Matrix& rho);

// Multinomial sampling. shots == 0 is exact mode: returns `probabilities`
// unchanged as frequencies. Otherwise returns counts summing to shots.
// Negative shots throws std::invalid_argument.
std::vector<double> sample_bitstrings(const std::vector<double>& probabilities, long long shots,
                                      RngStream& rng);

// Counts (or exact probabilities) -> frequency vector summing to 1.
std::vector<double> to_frequencies(const std::vector<double>& counts_or_probs);

}  // namespace xebsim

#endif  // XEBSIM_SIMULATOR_HPP_
