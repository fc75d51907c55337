#include "xebsim/simulator.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "xebsim/errors.hpp"

namespace xebsim {

namespace {
constexpr double kHermitianTol = 1e-12;
constexpr double kTraceTol = 1e-12;
constexpr double kEigenvalueFloor = -1e-10;
}  // namespace

bool LocalNoiseModel::is_noiseless() const {
  for (double p : per_qubit_p)
    if (p != 1.0) return false;
  return !interleaved_gate_p || *interleaved_gate_p == 1.0;
}

std::vector<double> LocalNoiseModel::errors() const {
  std::vector<double> e(per_qubit_p.size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = 1.0 - per_qubit_p[i];
  return e;
}

void LocalNoiseModel::validate() const {
  if (per_qubit_p.empty()) throw std::invalid_argument("LocalNoiseModel: no qubits");
  for (double p : per_qubit_p) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument("LocalNoiseModel: p_i must lie in [0,1]");
    }
  }
  if (interleaved_gate_p && !(*interleaved_gate_p >= 0.0 && *interleaved_gate_p <= 1.0)) {
    throw std::invalid_argument("LocalNoiseModel: interleaved_gate_p must lie in [0,1]");
  }
}

Matrix initial_density(int n) {
  Matrix rho = Matrix::Zero(1 << n, 1 << n);
  rho(0, 0) = 1.0;
  return rho;
}

Vector initial_state(int n) {
  Vector v = Vector::Zero(1 << n);
  v(0) = 1.0;
  return v;
}

void check_density_invariants(const Matrix& rho, const char* where) {
  const double trace_err = std::abs(rho.trace() - Complex(1.0, 0.0));
  if (trace_err > kTraceTol) {
    throw SimulationIntegrityError(std::string(where) + ": trace deviates from 1 by " +
                                   std::to_string(trace_err));
  }
  const double herm_err = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (herm_err > kHermitianTol) {
    throw SimulationIntegrityError(std::string(where) + ": non-Hermitian by " +
                                   std::to_string(herm_err));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(rho, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < kEigenvalueFloor) {
    throw SimulationIntegrityError(std::string(where) + ": negative eigenvalue " +
                                   std::to_string(solver.eigenvalues().minCoeff()));
  }
}

Matrix apply_unitary(const Matrix& rho, const Matrix& u) {
  if (rho.rows() != u.rows() || rho.cols() != u.cols() || u.rows() != u.cols()) {
    throw std::invalid_argument("apply_unitary: dimension mismatch");
  }
  return u * rho * u.adjoint();
}

Matrix apply_depolarizing(const Matrix& rho, const std::vector<int>& qubits, double p, int n) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("apply_depolarizing: p out of [0,1]");
  const int d = 1 << n;
  if (rho.rows() != d || rho.cols() != d) {
    throw std::invalid_argument("apply_depolarizing: dimension mismatch");
  }
  int mask = 0;
  for (int q : qubits) {
    if (q < 0 || q >= n) throw std::invalid_argument("apply_depolarizing: qubit out of range");
    const int bit = 1 << (n - 1 - q);  // qubit 0 = most significant bit
    if (mask & bit) throw std::invalid_argument("apply_depolarizing: duplicate qubit");
    mask |= bit;
  }
  const int k = static_cast<int>(qubits.size());
  const double inv = 1.0 / static_cast<double>(1 << k);

  // lift(i,j) = delta on the traced bits times the partial trace over them.
  Matrix lift = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (((i ^ j) & mask) != 0) continue;
      Complex sum = 0.0;
      // Run t over the traced-subsystem basis via subset enumeration of mask.
      int t = 0;
      do {
        sum += rho((i & ~mask) | t, (j & ~mask) | t);
        t = (t - mask) & mask;
      } while (t != 0);
      lift(i, j) = sum * inv;
    }
  }
  return p * rho + (1.0 - p) * lift;
}

Matrix apply_local_depolarizing(const Matrix& rho, int qubit, double p, int n) {
  return apply_depolarizing(rho, {qubit}, p, n);
}

Matrix run_noisy_circuit(const Circuit& circuit, const LocalNoiseModel& noise,
                         const Matrix* initial) {
  noise.validate();
  const int n = circuit.num_qubits;
  const int d = circuit.dim();
  if (n < 1 || n > 4) {
    throw std::invalid_argument("run_noisy_circuit: supports 1..4 qubits");
  }
  if (noise.num_qubits() != n) {
    throw std::invalid_argument("run_noisy_circuit: noise/circuit qubit count mismatch");
  }
  Matrix rho = initial ? *initial : initial_density(n);
  if (rho.rows() != d || rho.cols() != d) {
    throw std::invalid_argument("run_noisy_circuit: initial state dimension mismatch");
  }

  std::vector<int> gate_qubits = circuit.gate_qubits;
  if (circuit.interleaved_gate && gate_qubits.empty()) {
    gate_qubits.resize(n);
    std::iota(gate_qubits.begin(), gate_qubits.end(), 0);
  }

  for (const Matrix& layer : circuit.layers) {
    rho = apply_unitary(rho, layer);
    for (int q = 0; q < n; ++q) {
      rho = apply_local_depolarizing(rho, q, noise.per_qubit_p[q], n);
    }
#ifndef NDEBUG
    check_density_invariants(rho, "run_noisy_circuit[layer]");
#endif
    if (circuit.interleaved_gate) {
      rho = apply_unitary(rho, *circuit.interleaved_gate);
      if (noise.interleaved_gate_p) {
        rho = apply_depolarizing(rho, gate_qubits, *noise.interleaved_gate_p, n);
      }
#ifndef NDEBUG
      check_density_invariants(rho, "run_noisy_circuit[interleave]");
#endif
    }
  }
  if (circuit.recovery_gate) {
    rho = apply_unitary(rho, *circuit.recovery_gate);
  }
  check_density_invariants(rho, "run_noisy_circuit[final]");
  return rho;
}

Vector run_ideal_circuit(const Circuit& circuit, const Vector* initial) {
  Vector psi = initial ? *initial : initial_state(circuit.num_qubits);
  if (psi.size() != circuit.dim()) {
    throw std::invalid_argument("run_ideal_circuit: initial state dimension mismatch");
  }
  for (const Matrix& layer : circuit.layers) {
    psi = layer * psi;
    if (circuit.interleaved_gate) psi = *circuit.interleaved_gate * psi;
  }
  if (circuit.recovery_gate) psi = *circuit.recovery_gate * psi;
  return psi;
}

std::vector<double> ideal_probabilities(const Circuit& circuit, const Vector* initial) {
  Vector psi = run_ideal_circuit(circuit, initial);
  std::vector<double> probs(psi.size());
  for (Eigen::Index i = 0; i < psi.size(); ++i) probs[i] = std::norm(psi(i));
  double total = std::accumulate(probs.begin(), probs.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-12) {
    throw SimulationIntegrityError("ideal_probabilities: probabilities sum to " +
                                   std::to_string(total));
  }
  return probs;
}

std::vector<double> density_diagonal(const Matrix& rho) {
  std::vector<double> diag(rho.rows());
  for (Eigen::Index i = 0; i < rho.rows(); ++i) diag[i] = rho(i, i).real();
  return diag;
}

std::vector<double> sample_bitstrings(const std::vector<double>& probabilities, long long shots,
                                      RngStream& rng) {
  if (shots < 0) throw std::invalid_argument("sample_bitstrings: negative shots");
  if (shots == 0) return probabilities;
  std::vector<double> cdf(probabilities.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    acc += probabilities[i];
    cdf[i] = acc;
  }
  std::vector<double> counts(probabilities.size(), 0.0);
  for (long long s = 0; s < shots; ++s) {
    double x = rng.uniform() * acc;
    auto it = std::lower_bound(cdf.begin(), cdf.end(), x);
    std::size_t idx = std::min<std::size_t>(it - cdf.begin(), counts.size() - 1);
    counts[idx] += 1.0;
  }
  return counts;
}

std::vector<double> to_frequencies(const std::vector<double>& counts_or_probs) {
  double total = std::accumulate(counts_or_probs.begin(), counts_or_probs.end(), 0.0);
  if (total <= 0.0) throw std::invalid_argument("to_frequencies: empty distribution");
  std::vector<double> freq(counts_or_probs.size());
  for (std::size_t i = 0; i < freq.size(); ++i) freq[i] = counts_or_probs[i] / total;
  return freq;
}

}  // namespace xebsim
