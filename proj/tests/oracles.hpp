// Test-only oracles, kept independent of the implementation paths they check.
#ifndef XEBSIM_TESTS_ORACLES_HPP_
#define XEBSIM_TESTS_ORACLES_HPP_

#include <cmath>
#include <functional>
#include <set>
#include <vector>

#include "xebsim/matrix.hpp"

namespace xebsim::oracles {

// Adaptive Simpson quadrature.
inline double simpson(const std::function<double(double)>& f, double a, double b, double fa,
                      double fb, double fm, double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * eps) {
    return left + right + (left + right - whole) / 15.0;
  }
  return simpson(f, a, m, fa, fm, flm, eps / 2.0, depth - 1) +
         simpson(f, m, b, fm, fb, frm, eps / 2.0, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double eps = 1e-13) {
  const double m = 0.5 * (a + b);
  return simpson(f, a, b, f(a), f(b), f(m), eps, 48);
}

// Naive power by repeated multiplication (independent of std::pow).
inline double power_loop(double base, int exp) {
  double out = 1.0;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

// Count the distinct conjugation actions of a set of unitaries on the Pauli
// group generators. A Clifford is fixed up to global phase by its action, so
// this counts group elements through a representation that is independent of
// phase canonicalization and matrix hashing.
inline std::size_t count_distinct_pauli_actions(const std::vector<Matrix>& unitaries, int n) {
  std::vector<Matrix> paulis = {gates::identity(2), gates::pauli_x(), gates::pauli_y(),
                                gates::pauli_z()};
  const int d = 1 << n;
  // n-qubit Pauli basis
  std::vector<Matrix> basis;
  const int num = 1 << (2 * n);
  for (int code = 0; code < num; ++code) {
    Matrix p = gates::identity(1);
    int c = code;
    for (int q = 0; q < n; ++q) {
      p = kron(p, paulis[c & 3]);
      c >>= 2;
    }
    basis.push_back(p);
  }
  // generators: X_q and Z_q
  std::vector<Matrix> gens;
  for (int q = 0; q < n; ++q) {
    gens.push_back(embed_on_qubit(gates::pauli_x(), q, n));
    gens.push_back(embed_on_qubit(gates::pauli_z(), q, n));
  }
  std::set<std::vector<int>> actions;
  for (const Matrix& u : unitaries) {
    std::vector<int> signature;
    for (const Matrix& g : gens) {
      Matrix image = u * g * u.adjoint();
      int found = -1;
      for (std::size_t b = 0; b < basis.size(); ++b) {
        const Complex overlap = (basis[b].adjoint() * image).trace() / static_cast<double>(d);
        if (std::abs(overlap) > 0.5) {
          found = static_cast<int>(2 * b) + (overlap.real() < 0 ? 1 : 0);
          break;
        }
      }
      signature.push_back(found);
    }
    actions.insert(signature);
  }
  return actions.size();
}

// Sample mean and standard deviation.
struct Stats {
  double mean = 0.0;
  double stddev = 0.0;
};

inline Stats stats_of(const std::vector<double>& values) {
  Stats s;
  for (double v : values) s.mean += v;
  s.mean /= values.size();
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.stddev = values.size() > 1 ? std::sqrt(ss / (values.size() - 1)) : 0.0;
  return s;
}

}  // namespace xebsim::oracles

#endif  // XEBSIM_TESTS_ORACLES_HPP_
