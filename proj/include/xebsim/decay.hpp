#ifndef XEBSIM_DECAY_HPP_
#define XEBSIM_DECAY_HPP_

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "xebsim/xeb.hpp"

namespace xebsim {

// ---------------------------------------------------------------------------
// Closed-form decay laws and fidelity conversions.
// ---------------------------------------------------------------------------

// F(m) = p^m.
double f_exponential(double p, int m);

// Joint depolarizing parameter of an n-qubit Clifford reference under local
// noise, to leading order in the error rates:
//   p_multi = 1 - (3/4) (1 / (1 - 4^-n)) sum_i e_i.
double p_multi_leading(const std::vector<double>& errors, int n);

// Exact form of the same quantity: (prod_i (1 + 3 p_i) - 1) / (4^n - 1).
double p_multi_exact(const std::vector<double>& per_qubit_p, int n);

// Joint decay of simultaneous single-qubit reference sequences:
//   F(m) = [2^n prod(2 + p_i^m) + 3^n - prod(3 + p_i^m) - 4^n]
//          / [6^n + 3^n - 2*4^n].
double f_single(const std::vector<double>& per_qubit_p, int m);

// The additive strawman F(m) = (1 - sum e_i)^m, kept for comparison plots.
double f_additive(const std::vector<double>& errors, int m);

// Average gate fidelity from a depolarizing parameter: ((d-1) p + 1) / d.
double depolarizing_to_average_fidelity(double p, int dim);

// Refined interleaved estimator: p_int divided by the leading-order joint
// reference parameter; for n=2 exactly p_int / (1 - (4/5)(e1 + e2)).
double refined_interleaved_fidelity(double p_int, const std::vector<double>& errors);

// Uncorrected estimator p_int / (1 - sum e_i), kept for comparison reports.
double naive_interleaved_fidelity(double p_int, const std::vector<double>& errors);

// ---------------------------------------------------------------------------
// Nonlinear decay fitting.
// ---------------------------------------------------------------------------

enum class DecayModel { kExponential, kFSingle, kAdditive };

const char* decay_model_name(DecayModel model);
DecayModel decay_model_from_name(const std::string& name);

struct FitOptions {
  int m_min = 4;            // discard depths below this before fitting
  int num_qubits = 1;       // for the f_single model
  bool shared_p = false;    // f_single: one shared p instead of per-qubit p_i
  int max_iterations = 200;
};

struct DecayFit {
  DecayModel model = DecayModel::kExponential;
  // exponential: {p}; f_single: {p_1..p_n} (or {p} shared); additive: {sum_e}.
  std::vector<double> params;
  Eigen::MatrixXd covariance;
  double residual_norm = 0.0;  // sqrt(sum w r^2) at the optimum
  std::vector<int> depths_used;
  int iterations = 0;
  bool weighted = false;

  int num_params() const { return static_cast<int>(params.size()); }
  double param_std_error(int i) const;
};

// Model value and analytic derivative w.r.t. each parameter.
double decay_model_value(DecayModel model, const std::vector<double>& params, int m,
                         const FitOptions& opts);
std::vector<double> decay_model_gradient(DecayModel model, const std::vector<double>& params,
                                         int m, const FitOptions& opts);

// Weighted damped Gauss-Newton fit of `model` to the points with depth >=
// m_min. Weights are 1/std_error^2 when every point carries a positive
// std_error, uniform otherwise. Points with F <= 0 participate (truncating
// them biases p upward); only the log-linear initial guess ignores them.
// Throws FitFailureError / std::invalid_argument.
DecayFit fit_decay(const std::vector<FidelityPoint>& points, DecayModel model,
                   const FitOptions& opts);

}  // namespace xebsim

#endif  // XEBSIM_DECAY_HPP_
