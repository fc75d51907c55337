#ifndef XEBSIM_XEB_HPP_
#define XEBSIM_XEB_HPP_

#include <vector>

namespace xebsim {

// Per-circuit cross-entropy statistics at a given depth:
//   m_u = sum_x p_ideal(x) p_meas(x)
//   e_u = sum_x p_ideal(x)^2
//   u_u = 2^-n
struct CircuitRecord {
  int depth = 0;
  double m_u = 0.0;
  double e_u = 0.0;
  double u_u = 0.0;
};

// One point of a fidelity decay curve.
struct FidelityPoint {
  int depth = 0;
  double fidelity = 0.0;
  double std_error = 0.0;  // bootstrap; 0 until filled
  int num_circuits = 0;
};

// Build a record from an ideal probability vector and measured frequencies.
// Both must have length 2^n and sum to 1 within 1e-9.
CircuitRecord make_circuit_record(const std::vector<double>& ideal,
                                  const std::vector<double>& measured, int depth);

// Least-squares depolarizing fidelity over records at equal depth:
//   F = sum (m_u - u_u)(e_u - u_u) / sum (e_u - u_u)^2.
// Throws IndeterminateFidelityError when all e_u = u_u.
double estimate_fidelity_value(const std::vector<CircuitRecord>& records);
FidelityPoint estimate_fidelity(const std::vector<CircuitRecord>& records);

// Probability of the all-zeros bitstring.
double survival_probability(const std::vector<double>& measured);

}  // namespace xebsim

#endif  // XEBSIM_XEB_HPP_
