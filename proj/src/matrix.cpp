#include "xebsim/matrix.hpp"

#include <stdexcept>
#include <string>

namespace xebsim {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix embed_on_qubit(const Matrix& u, int qubit, int n) {
  if (u.rows() != 2 || u.cols() != 2) throw std::invalid_argument("embed_on_qubit: operator must be 2x2");
  if (qubit < 0 || qubit >= n) throw std::invalid_argument("embed_on_qubit: qubit out of range");
  Matrix out = gates::identity(1);
  for (int q = 0; q < n; ++q) out = kron(out, q == qubit ? u : gates::identity(2));
  return out;
}

bool is_unitary(const Matrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  Matrix delta = u.adjoint() * u - Matrix::Identity(u.rows(), u.cols());
  return delta.cwiseAbs().maxCoeff() <= tol;
}

void canonicalize_phase_inplace(Matrix& u, double zero_tol) {
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
      Complex z = u(i, j);
      if (std::abs(z) > zero_tol) {
        u *= std::conj(z) / std::abs(z);
        return;
      }
    }
  }
}

Matrix canonicalize_phase(const Matrix& u, double zero_tol) {
  Matrix out = u;
  canonicalize_phase_inplace(out, zero_tol);
  return out;
}


Matrix random_unitary(int dim, RngStream& rng) {
  Matrix a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = Complex(rng.normal(), rng.normal());
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase convention so the distribution is exactly Haar.
  for (int j = 0; j < dim; ++j) {
    Complex d = r(j, j);
    q.col(j) *= std::abs(d) > 0 ? d / std::abs(d) : Complex(1, 0);
  }
  return q;
}

Vector random_state(int dim, RngStream& rng) {
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = Complex(rng.normal(), rng.normal());
  v /= v.norm();
  return v;
}

namespace gates {

Matrix identity(int dim) { return Matrix::Identity(dim, dim); }

Matrix hadamard() {
  Matrix h(2, 2);
  double s = 1.0 / std::sqrt(2.0);
  h << s, s, s, -s;
  return h;
}

Matrix phase_s() {
  Matrix m(2, 2);
  m << 1, 0, 0, Complex(0, 1);
  return m;
}

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Matrix cz() {
  Matrix m = Matrix::Identity(4, 4);
  m(3, 3) = -1;
  return m;
}

Matrix cnot() {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = 1;
  m(1, 1) = 1;
  m(2, 3) = 1;
  m(3, 2) = 1;
  return m;
}

Matrix iswap() {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = 1;
  m(3, 3) = 1;
  m(1, 2) = Complex(0, 1);
  m(2, 1) = Complex(0, 1);
  return m;
}

Matrix by_name(const std::string& name) {
  if (name == "cz") return cz();
  if (name == "cnot") return cnot();
  if (name == "iswap") return iswap();
  throw std::invalid_argument("unknown gate name: " + name);
}

}  // namespace gates
}  // namespace xebsim
