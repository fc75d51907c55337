#include "xebsim/decay.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "xebsim/errors.hpp"

namespace xebsim {

namespace {

void require_unit_interval(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " must lie in [0,1]");
  }
}

double pow_int(double base, int exp) { return std::pow(base, static_cast<double>(exp)); }

}  // namespace

double f_exponential(double p, int m) {
  require_unit_interval(p, "f_exponential: p");
  if (m < 0) throw std::invalid_argument("f_exponential: m must be >= 0");
  return pow_int(p, m);
}

double p_multi_leading(const std::vector<double>& errors, int n) {
  if (n < 1 || static_cast<std::size_t>(n) != errors.size()) {
    throw std::invalid_argument("p_multi_leading: n must match error count");
  }
  double sum = 0.0;
  for (double e : errors) {
    require_unit_interval(e, "p_multi_leading: e_i");
    sum += e;
  }
  const double coeff = 0.75 / (1.0 - std::pow(4.0, -n));
  return 1.0 - coeff * sum;
}

double p_multi_exact(const std::vector<double>& per_qubit_p, int n) {
  if (n < 1 || static_cast<std::size_t>(n) != per_qubit_p.size()) {
    throw std::invalid_argument("p_multi_exact: n must match parameter count");
  }
  double prod = 1.0;
  for (double p : per_qubit_p) {
    require_unit_interval(p, "p_multi_exact: p_i");
    prod *= 1.0 + 3.0 * p;
  }
  return (prod - 1.0) / (std::pow(4.0, n) - 1.0);
}

double f_single(const std::vector<double>& per_qubit_p, int m) {
  const int n = static_cast<int>(per_qubit_p.size());
  if (n < 1 || n > 4) throw std::invalid_argument("f_single: need 1..4 qubits");
  if (m < 0) throw std::invalid_argument("f_single: m must be >= 0");
  double prod2 = 1.0, prod3 = 1.0;
  for (double p : per_qubit_p) {
    require_unit_interval(p, "f_single: p_i");
    const double pm = pow_int(p, m);
    prod2 *= 2.0 + pm;
    prod3 *= 3.0 + pm;
  }
  const double two_n = std::pow(2.0, n);
  const double three_n = std::pow(3.0, n);
  const double four_n = std::pow(4.0, n);
  const double six_n = std::pow(6.0, n);
  return (two_n * prod2 + three_n - prod3 - four_n) / (six_n + three_n - 2.0 * four_n);
}

double f_additive(const std::vector<double>& errors, int m) {
  if (m < 0) throw std::invalid_argument("f_additive: m must be >= 0");
  double sum = 0.0;
  for (double e : errors) sum += e;
  if (sum > 1.0) throw std::invalid_argument("f_additive: sum of errors exceeds 1");
  return pow_int(1.0 - sum, m);
}

double depolarizing_to_average_fidelity(double p, int dim) {
  require_unit_interval(p, "depolarizing_to_average_fidelity: p");
  if (dim < 2) throw std::invalid_argument("depolarizing_to_average_fidelity: dim must be >= 2");
  const double d = static_cast<double>(dim);
  return (d - 1.0) / d * p + 1.0 / d;
}

double refined_interleaved_fidelity(double p_int, const std::vector<double>& errors) {
  const int n = static_cast<int>(errors.size());
  const double p_ref = p_multi_leading(errors, n);
  if (p_ref <= 0.0) {
    throw std::invalid_argument("refined_interleaved_fidelity: nonpositive reference parameter");
  }
  return p_int / p_ref;
}

double naive_interleaved_fidelity(double p_int, const std::vector<double>& errors) {
  double sum = 0.0;
  for (double e : errors) sum += e;
  if (sum >= 1.0) throw std::invalid_argument("naive_interleaved_fidelity: sum of errors >= 1");
  return p_int / (1.0 - sum);
}

// ---------------------------------------------------------------------------
// Fitting
// ---------------------------------------------------------------------------

const char* decay_model_name(DecayModel model) {
  switch (model) {
    case DecayModel::kExponential: return "exponential";
    case DecayModel::kFSingle: return "f_single";
    case DecayModel::kAdditive: return "additive";
  }
  return "?";
}

DecayModel decay_model_from_name(const std::string& name) {
  if (name == "exponential") return DecayModel::kExponential;
  if (name == "f_single") return DecayModel::kFSingle;
  if (name == "additive") return DecayModel::kAdditive;
  throw std::invalid_argument("unknown decay model: " + name);
}

double DecayFit::param_std_error(int i) const {
  return std::sqrt(std::max(0.0, covariance(i, i)));
}

namespace {

std::vector<double> expand_f_single_params(const std::vector<double>& params,
                                           const FitOptions& opts) {
  if (opts.shared_p) return std::vector<double>(opts.num_qubits, params.at(0));
  return params;
}

}  // namespace

double decay_model_value(DecayModel model, const std::vector<double>& params, int m,
                         const FitOptions& opts) {
  switch (model) {
    case DecayModel::kExponential:
      return f_exponential(params.at(0), m);
    case DecayModel::kAdditive:
      return f_exponential(1.0 - params.at(0), m);
    case DecayModel::kFSingle:
      return f_single(expand_f_single_params(params, opts), m);
  }
  throw std::invalid_argument("decay_model_value: bad model");
}

std::vector<double> decay_model_gradient(DecayModel model, const std::vector<double>& params,
                                         int m, const FitOptions& opts) {
  switch (model) {
    case DecayModel::kExponential: {
      const double p = params.at(0);
      return {m == 0 ? 0.0 : m * pow_int(p, m - 1)};
    }
    case DecayModel::kAdditive: {
      const double s = params.at(0);
      return {m == 0 ? 0.0 : -m * pow_int(1.0 - s, m - 1)};
    }
    case DecayModel::kFSingle: {
      const std::vector<double> p = expand_f_single_params(params, opts);
      const int n = static_cast<int>(p.size());
      const double two_n = std::pow(2.0, n);
      const double denom = std::pow(6.0, n) + std::pow(3.0, n) - 2.0 * std::pow(4.0, n);
      std::vector<double> pm(n);
      for (int i = 0; i < n; ++i) pm[i] = pow_int(p[i], m);
      std::vector<double> grad(n, 0.0);
      for (int i = 0; i < n; ++i) {
        if (m == 0) continue;
        double prod2 = 1.0, prod3 = 1.0;
        for (int j = 0; j < n; ++j) {
          if (j == i) continue;
          prod2 *= 2.0 + pm[j];
          prod3 *= 3.0 + pm[j];
        }
        grad[i] = (two_n * prod2 - prod3) * m * pow_int(p[i], m - 1) / denom;
      }
      if (!opts.shared_p) return grad;
      double total = 0.0;
      for (double g : grad) total += g;
      return {total};
    }
  }
  throw std::invalid_argument("decay_model_gradient: bad model");
}

namespace {

struct FitData {
  std::vector<int> depths;
  std::vector<double> values;
  std::vector<double> weights;
  bool weighted = false;
};

FitData prepare_fit_data(const std::vector<FidelityPoint>& points, const FitOptions& opts) {
  FitData data;
  std::vector<FidelityPoint> kept;
  for (const FidelityPoint& pt : points) {
    if (pt.depth >= opts.m_min) kept.push_back(pt);
  }
  std::sort(kept.begin(), kept.end(),
            [](const FidelityPoint& a, const FidelityPoint& b) { return a.depth < b.depth; });
  if (kept.size() < 3) {
    throw std::invalid_argument("fit_decay: need at least 3 points with depth >= m_min");
  }
  bool all_positive_sigma = true;
  for (const FidelityPoint& pt : kept) {
    if (!(pt.std_error > 0.0) || !std::isfinite(pt.std_error)) all_positive_sigma = false;
  }
  for (const FidelityPoint& pt : kept) {
    data.depths.push_back(pt.depth);
    data.values.push_back(pt.fidelity);
    data.weights.push_back(all_positive_sigma ? 1.0 / (pt.std_error * pt.std_error) : 1.0);
  }
  data.weighted = all_positive_sigma;
  return data;
}

// Weighted log-linear slope through the origin on strictly positive values.
double initial_log_slope(const FitData& data) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < data.values.size(); ++i) {
    if (data.values[i] <= 0.0 || data.depths[i] == 0) continue;
    const double w = data.weights[i];
    num += w * data.depths[i] * std::log(data.values[i]);
    den += w * static_cast<double>(data.depths[i]) * data.depths[i];
  }
  if (den <= 0.0) {
    throw FitFailureError("fit_decay: no positive fidelity values to seed the fit");
  }
  return num / den;
}

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

struct LevenbergResult {
  std::vector<double> params;
  double chi2 = 0.0;
  int iterations = 0;
  bool converged = false;
  Eigen::MatrixXd jtj;
};

double chi_squared(DecayModel model, const std::vector<double>& params, const FitData& data,
                   const FitOptions& opts) {
  double chi2 = 0.0;
  for (std::size_t i = 0; i < data.values.size(); ++i) {
    const double r = data.values[i] - decay_model_value(model, params, data.depths[i], opts);
    chi2 += data.weights[i] * r * r;
  }
  return chi2;
}

LevenbergResult levenberg_fit(DecayModel model, std::vector<double> params, const FitData& data,
                              const FitOptions& opts) {
  const int np = static_cast<int>(params.size());
  const int nd = static_cast<int>(data.values.size());
  double lambda = 1e-3;
  double chi2 = chi_squared(model, params, data, opts);
  int iter = 0;
  bool converged = false;
  Eigen::MatrixXd jtj = Eigen::MatrixXd::Zero(np, np);

  for (; iter < opts.max_iterations && !converged; ++iter) {
    Eigen::MatrixXd j(nd, np);
    Eigen::VectorXd r(nd);
    for (int i = 0; i < nd; ++i) {
      const double sw = std::sqrt(data.weights[i]);
      r(i) = sw * (data.values[i] - decay_model_value(model, params, data.depths[i], opts));
      const std::vector<double> g = decay_model_gradient(model, params, data.depths[i], opts);
      for (int k = 0; k < np; ++k) j(i, k) = sw * g[k];
    }
    jtj = j.transpose() * j;
    Eigen::VectorXd grad = j.transpose() * r;

    // Active-set handling of the [0,1] box: freeze coordinates pinned at a
    // bound whose gradient points outward, so the solved step is not
    // distorted by a direction the clamp will cancel anyway.
    Eigen::MatrixXd jtj_free = jtj;
    Eigen::VectorXd grad_free = grad;
    for (int k = 0; k < np; ++k) {
      const bool blocked = (params[k] <= 0.0 && grad(k) < 0.0) ||
                           (params[k] >= 1.0 && grad(k) > 0.0);
      if (blocked) {
        jtj_free.row(k).setZero();
        jtj_free.col(k).setZero();
        jtj_free(k, k) = 1.0;
        grad_free(k) = 0.0;
      }
    }
    if (grad_free.norm() < 1e-14) {
      converged = true;
      break;
    }

    bool accepted = false;
    while (lambda < 1e14) {
      Eigen::MatrixXd damped = jtj_free;
      for (int k = 0; k < np; ++k) {
        damped(k, k) += lambda * std::max(jtj_free(k, k), 1e-30);
      }
      Eigen::VectorXd step = damped.ldlt().solve(grad_free);
      std::vector<double> trial(params);
      for (int k = 0; k < np; ++k) trial[k] = clamp01(params[k] + step(k));
      const double trial_chi2 = chi_squared(model, trial, data, opts);
      if (trial_chi2 <= chi2) {
        double moved = 0.0;
        for (int k = 0; k < np; ++k) moved += std::abs(trial[k] - params[k]);
        params = trial;
        const double improvement = chi2 - trial_chi2;
        chi2 = trial_chi2;
        lambda = std::max(lambda / 3.0, 1e-12);
        accepted = true;
        if (moved < 1e-10 || improvement <= 1e-12 * std::max(chi2, 1e-30)) converged = true;
        break;
      }
      lambda *= 10.0;
    }
    if (!accepted) {
      converged = true;  // damping exhausted: stationary point
      break;
    }
  }
  return {params, chi2, iter, converged, jtj};
}

std::vector<std::vector<double>> starting_points(DecayModel model, const FitData& data,
                                                 const FitOptions& opts) {
  const double slope = initial_log_slope(data);
  const double p0 = clamp01(std::exp(slope));
  switch (model) {
    case DecayModel::kExponential:
      return {{p0}};
    case DecayModel::kAdditive:
      return {{clamp01(1.0 - p0)}};
    case DecayModel::kFSingle: {
      if (opts.shared_p || opts.num_qubits == 1) return {{p0}};
      // The model is symmetric under qubit permutation; symmetric starts stay
      // on the invariant manifold, so seed a split pair of ramps.
      const int n = opts.num_qubits;
      const double delta = std::max(0.5 * (1.0 - p0), 1e-4);
      std::vector<double> up(n), down(n);
      for (int i = 0; i < n; ++i) {
        const double t = n == 1 ? 0.0 : 2.0 * i / (n - 1.0) - 1.0;  // -1 .. 1
        up[i] = clamp01(p0 + delta * t);
        down[i] = clamp01(p0 - delta * t);
      }
      return {up, down};
    }
  }
  throw std::invalid_argument("starting_points: bad model");
}

}  // namespace

DecayFit fit_decay(const std::vector<FidelityPoint>& points, DecayModel model,
                   const FitOptions& opts) {
  if (model == DecayModel::kFSingle && (opts.num_qubits < 1 || opts.num_qubits > 4)) {
    throw std::invalid_argument("fit_decay: f_single needs 1..4 qubits");
  }
  FitData data = prepare_fit_data(points, opts);

  LevenbergResult best;
  best.chi2 = std::numeric_limits<double>::infinity();
  for (const std::vector<double>& start : starting_points(model, data, opts)) {
    LevenbergResult res = levenberg_fit(model, start, data, opts);
    if (res.chi2 < best.chi2) best = res;
  }
  if (!std::isfinite(best.chi2)) {
    throw FitFailureError("fit_decay: optimization diverged (model " +
                          std::string(decay_model_name(model)) + ")");
  }
  if (!best.converged) {
    throw FitFailureError("fit_decay: no convergence after " +
                          std::to_string(opts.max_iterations) + " iterations (model " +
                          decay_model_name(model) + ", residual norm " +
                          std::to_string(std::sqrt(best.chi2)) + ")");
  }

  DecayFit fit;
  fit.model = model;
  fit.params = best.params;
  fit.residual_norm = std::sqrt(best.chi2);
  fit.depths_used = data.depths;
  fit.iterations = best.iterations;
  fit.weighted = data.weighted;

  const int np = static_cast<int>(best.params.size());
  const int nd = static_cast<int>(data.values.size());
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(np, np);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(best.jtj);
  if (lu.isInvertible()) {
    cov = lu.inverse();
    if (!data.weighted) {
      cov *= best.chi2 / std::max(nd - np, 1);
    }
    cov = ((cov + cov.transpose()) / 2.0).eval();
  } else {
    cov.setConstant(std::numeric_limits<double>::quiet_NaN());
  }
  fit.covariance = cov;
  return fit;
}

}  // namespace xebsim
