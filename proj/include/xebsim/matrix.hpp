#ifndef XEBSIM_MATRIX_HPP_
#define XEBSIM_MATRIX_HPP_

#include <Eigen/Dense>
#include <complex>

#include "xebsim/rng.hpp"

namespace xebsim {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Bit convention: qubit 0 is the most significant bit of a basis-state index,
// so kron(A, B) applies A to qubit 0 and B to qubit 1, and the bitstring
// "01" (qubit 0 = 0, qubit 1 = 1) is basis index 1.

Matrix kron(const Matrix& a, const Matrix& b);

// Lift a single-qubit operator to `n` qubits, acting on `qubit`.
Matrix embed_on_qubit(const Matrix& u, int qubit, int n);

bool is_unitary(const Matrix& u, double tol = 1e-12);

// Fix the global phase so the first nonzero entry in row-major order is real
// and positive. Idempotent.
void canonicalize_phase_inplace(Matrix& u, double zero_tol = 1e-10);
Matrix canonicalize_phase(const Matrix& u, double zero_tol = 1e-10);

// Haar-random unitary via QR of a Gaussian matrix with R-diagonal phase fix.
Matrix random_unitary(int dim, RngStream& rng);

// Haar-random pure state of dimension `dim` (normalized Gaussian vector).
Vector random_state(int dim, RngStream& rng);

namespace gates {
Matrix identity(int dim);
Matrix hadamard();
Matrix phase_s();
Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();
Matrix cz();
Matrix cnot();
Matrix iswap();
// Lookup by lowercase name ("cz", "cnot", "iswap"); throws std::invalid_argument.
Matrix by_name(const std::string& name);
}  // namespace gates

}  // namespace xebsim

#endif  // XEBSIM_MATRIX_HPP_
