#include "xebsim/decay.hpp"

#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "xebsim/errors.hpp"
#include "xebsim/rng.hpp"

using namespace xebsim;

TEST_CASE("exponential decay law") {
  CHECK(f_exponential(1.0, 57) == 1.0);
  CHECK(f_exponential(0.3, 0) == 1.0);
  CHECK(f_exponential(0.99, 100) ==
        doctest::Approx(oracles::power_loop(0.99, 100)).epsilon(1e-13));
  CHECK(f_exponential(0.99, 100) == doctest::Approx(0.3660).epsilon(1e-4));
  CHECK_THROWS_AS(f_exponential(1.2, 3), std::invalid_argument);
  CHECK_THROWS_AS(f_exponential(0.5, -1), std::invalid_argument);
}

TEST_CASE("leading-order joint reference parameter") {
  CHECK(p_multi_leading({0.01}, 1) == doctest::Approx(0.99).epsilon(1e-14));
  CHECK(p_multi_leading({0.006, 0.004}, 2) == doctest::Approx(0.992).epsilon(1e-14));
  CHECK(p_multi_leading({0.0, 0.0}, 2) == 1.0);
}

TEST_CASE("exact joint reference parameter and its leading-order expansion") {
  // n=1 reduction: exact form returns p itself.
  for (double p : {0.0, 0.31, 0.9, 0.994, 1.0}) {
    CHECK(p_multi_exact({p}, 1) == doctest::Approx(p).epsilon(1e-14));
  }
  CHECK(p_multi_exact({1.0, 1.0}, 2) == doctest::Approx(1.0));

  const double exact = p_multi_exact({0.994, 0.996}, 2);
  const double leading = p_multi_leading({0.006, 0.004}, 2);
  CHECK(std::abs(exact - leading) < 2e-5);  // O(e^2) at this noise scale

  // gap / (sum e)^2 stays bounded on a grid.
  for (double e1 = 0.0; e1 <= 0.02; e1 += 0.004) {
    for (double e2 = 0.0; e2 <= 0.02; e2 += 0.004) {
      const double s = e1 + e2;
      if (s == 0.0) continue;
      const double gap = p_multi_exact({1 - e1, 1 - e2}, 2) - p_multi_leading({e1, e2}, 2);
      CHECK(std::abs(gap) <= 1.0 * s * s);
    }
  }
}

TEST_CASE("f_single reduces to p^m for one qubit") {
  for (double p : {0.2, 0.7, 0.99, 1.0}) {
    for (int m : {0, 1, 5, 40}) {
      CHECK(f_single({p}, m) == doctest::Approx(f_exponential(p, m)).epsilon(1e-12));
    }
  }
  CHECK(f_single({1.0, 1.0}, 123) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("f_single matches the independently expanded two-qubit form") {
  // For n=2 the law expands to [5(p1^m + p2^m) + 3(p1 p2)^m] / 13.
  const double p1 = 0.994, p2 = 0.996;
  for (int m : {1, 2, 5, 17, 50}) {
    const double expanded =
        (5.0 * (std::pow(p1, m) + std::pow(p2, m)) + 3.0 * std::pow(p1 * p2, m)) / 13.0;
    CHECK(f_single({p1, p2}, m) == doctest::Approx(expanded).epsilon(1e-13));
  }
}

TEST_CASE("f_single is monotone non-increasing in depth") {
  const std::vector<std::vector<double>> cases = {
      {0.994, 0.996}, {0.9, 0.99}, {0.95, 0.97, 0.99}, {0.99, 0.98, 0.97, 0.96}};
  for (const auto& p : cases) {
    double prev = f_single(p, 0);
    for (int m = 1; m <= 80; ++m) {
      double cur = f_single(p, m);
      CHECK(cur <= prev + 1e-14);
      prev = cur;
    }
  }
}

TEST_CASE("additive strawman") {
  CHECK(f_additive({0.0, 0.0}, 10) == 1.0);
  for (int m : {1, 3, 20}) {
    CHECK(f_additive({0.01}, m) == doctest::Approx(f_exponential(0.99, m)).epsilon(1e-13));
  }
  CHECK(f_additive({0.006, 0.004}, 100) ==
        doctest::Approx(oracles::power_loop(0.99, 100)).epsilon(1e-12));
  CHECK_THROWS_AS(f_additive({0.7, 0.5}, 2), std::invalid_argument);
}

TEST_CASE("f_single dominates the additive model at small errors") {
  for (int n : {2, 3}) {
    for (double e : {0.002, 0.01, 0.03, 0.05}) {
      std::vector<double> p(n, 1.0 - e), errors(n, e);
      for (int m = 1; m <= 200; m += 7) {
        CHECK(f_single(p, m) >= f_additive(errors, m) - 1e-12);
      }
    }
  }
  // And the deviation is visible at the paper's scale: additive undershoots.
  CHECK(f_additive({0.006, 0.004}, 100) < f_single({0.994, 0.996}, 100));
}

TEST_CASE("depolarizing parameter to average gate fidelity") {
  CHECK(depolarizing_to_average_fidelity(1.0, 4) == 1.0);
  CHECK(depolarizing_to_average_fidelity(0.0, 2) == doctest::Approx(0.5));
  CHECK(depolarizing_to_average_fidelity(0.9835, 4) == doctest::Approx(0.987625).epsilon(1e-12));
}

TEST_CASE("refined interleaved estimator") {
  CHECK(refined_interleaved_fidelity(0.97, {0.0, 0.0}) == doctest::Approx(0.97));

  // Round trip: p_int = p_G * p_multi_leading recovers p_G.
  const double p_ref = p_multi_leading({0.006, 0.004}, 2);
  CHECK(std::abs(refined_interleaved_fidelity(0.983 * p_ref, {0.006, 0.004}) - 0.983) < 1e-12);

  // The paper's numbers: a naive estimate of 0.9850 with e1+e2 = 0.0075
  // refines to 0.9835 (overestimation (e1+e2)/5 = 0.0015).
  const double sum_e = 0.0075;
  const double p_int = 0.9850 * (1.0 - sum_e);
  const double refined = refined_interleaved_fidelity(p_int, {sum_e / 2, sum_e / 2});
  CHECK(std::abs(refined - 0.9835) < 5e-5);
  CHECK(0.9850 - refined == doctest::Approx(sum_e / 5.0).epsilon(0.02));
}

TEST_CASE("naive interleaved estimator and the first-order gap") {
  CHECK(naive_interleaved_fidelity(0.77, {0.0, 0.0}) == doctest::Approx(0.77));
  CHECK(naive_interleaved_fidelity(0.9756, {0.006, 0.004}) ==
        doctest::Approx(0.9756 / 0.99).epsilon(1e-14));
  CHECK(naive_interleaved_fidelity(0.9756, {0.006, 0.004}) ==
        doctest::Approx(0.98545).epsilon(1e-5));

  // naive - refined = p_int (e1+e2)/5 + O(e^2) for n=2.
  for (double s : {0.002, 0.005, 0.01, 0.02}) {
    const double p_int = 0.97;
    const double gap = naive_interleaved_fidelity(p_int, {s / 2, s / 2}) -
                       refined_interleaved_fidelity(p_int, {s / 2, s / 2});
    CHECK(std::abs(gap - p_int * s / 5.0) < 0.5 * s * s);
  }
  CHECK_THROWS_AS(naive_interleaved_fidelity(0.9, {0.6, 0.5}), std::invalid_argument);
}

namespace {

std::vector<FidelityPoint> synthetic_points(DecayModel model, const std::vector<double>& params,
                                            const std::vector<int>& depths, int n,
                                            bool shared_p = false) {
  FitOptions opts;
  opts.num_qubits = n;
  opts.shared_p = shared_p;
  std::vector<FidelityPoint> pts;
  for (int m : depths) {
    FidelityPoint pt;
    pt.depth = m;
    pt.fidelity = decay_model_value(model, params, m, opts);
    pt.num_circuits = 1;
    pts.push_back(pt);
  }
  return pts;
}

std::vector<int> range_depths(int lo, int hi) {
  std::vector<int> out;
  for (int m = lo; m <= hi; ++m) out.push_back(m);
  return out;
}

}  // namespace

TEST_CASE("fit recovers an exact exponential") {
  auto pts = synthetic_points(DecayModel::kExponential, {0.99}, range_depths(1, 100), 1);
  FitOptions opts;
  opts.m_min = 1;
  DecayFit fit = fit_decay(pts, DecayModel::kExponential, opts);
  CHECK(std::abs(fit.params[0] - 0.99) < 1e-9);
  CHECK(fit.residual_norm < 1e-9);
  CHECK(!fit.weighted);
}

TEST_CASE("fit recovers both p_i of an exact f_single curve up to permutation") {
  FitOptions opts;
  opts.m_min = 1;
  opts.num_qubits = 2;
  auto pts = synthetic_points(DecayModel::kFSingle, {0.994, 0.996}, range_depths(1, 50), 2);
  DecayFit fit = fit_decay(pts, DecayModel::kFSingle, opts);
  std::vector<double> sorted = fit.params;
  std::sort(sorted.begin(), sorted.end());
  CHECK(std::abs(sorted[0] - 0.994) < 1e-6);
  CHECK(std::abs(sorted[1] - 0.996) < 1e-6);
}

TEST_CASE("fit recovers a shared-p f_single curve and the additive parameter") {
  FitOptions opts;
  opts.m_min = 1;
  opts.num_qubits = 3;
  opts.shared_p = true;
  auto pts = synthetic_points(DecayModel::kFSingle, {0.98}, range_depths(1, 60), 3,
                              /*shared_p=*/true);
  {
    DecayFit fit = fit_decay(pts, DecayModel::kFSingle, opts);
    CHECK(fit.params.size() == 1);
    CHECK(std::abs(fit.params[0] - 0.98) < 1e-8);
  }
  auto add_pts = synthetic_points(DecayModel::kAdditive, {0.013}, range_depths(1, 60), 1);
  FitOptions add_opts;
  add_opts.m_min = 1;
  DecayFit fit = fit_decay(add_pts, DecayModel::kAdditive, add_opts);
  CHECK(std::abs(fit.params[0] - 0.013) < 1e-8);
}

TEST_CASE("fit round-trip for every model") {
  FitOptions opts;
  opts.m_min = 1;
  opts.num_qubits = 2;
  const std::vector<std::pair<DecayModel, std::vector<double>>> cases = {
      {DecayModel::kExponential, {0.97}},
      {DecayModel::kAdditive, {0.02}},
      {DecayModel::kFSingle, {0.98, 0.993}},
  };
  for (const auto& [model, truth] : cases) {
    auto pts = synthetic_points(model, truth, range_depths(1, 64), 2);
    DecayFit fit = fit_decay(pts, model, opts);
    std::vector<double> got = fit.params, want = truth;
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - want[i]) < 1e-6);
  }
}

TEST_CASE("m_min cutoff discards shallow depths") {
  auto pts = synthetic_points(DecayModel::kExponential, {0.95}, range_depths(1, 20), 1);
  FitOptions opts;
  opts.m_min = 5;
  DecayFit fit = fit_decay(pts, DecayModel::kExponential, opts);
  CHECK(fit.depths_used.front() == 5);
  CHECK(fit.depths_used.size() == 16);
}

TEST_CASE("insufficient points are rejected") {
  auto pts = synthetic_points(DecayModel::kExponential, {0.95}, {1, 2}, 1);
  FitOptions opts;
  opts.m_min = 1;
  CHECK_THROWS_AS(fit_decay(pts, DecayModel::kExponential, opts), std::invalid_argument);
  pts = synthetic_points(DecayModel::kExponential, {0.95}, {1, 2, 3, 4}, 1);
  opts.m_min = 3;
  CHECK_THROWS_AS(fit_decay(pts, DecayModel::kExponential, opts), std::invalid_argument);
}

TEST_CASE("points at or below zero participate in the fit") {
  auto pts = synthetic_points(DecayModel::kExponential, {0.8}, range_depths(1, 30), 1);
  // Emulate a deep-circuit noise floor scattering around zero.
  pts[28].fidelity = -0.001;
  pts[29].fidelity = 0.0005;
  FitOptions opts;
  opts.m_min = 1;
  DecayFit fit = fit_decay(pts, DecayModel::kExponential, opts);
  CHECK(std::abs(fit.params[0] - 0.8) < 1e-3);
  CHECK(fit.depths_used.size() == 30);
}

TEST_CASE("weighted fits use 1/stderr^2 only when every point carries one") {
  auto pts = synthetic_points(DecayModel::kExponential, {0.9}, range_depths(1, 10), 1);
  for (auto& pt : pts) pt.std_error = 0.01;
  FitOptions opts;
  opts.m_min = 1;
  CHECK(fit_decay(pts, DecayModel::kExponential, opts).weighted);
  pts[3].std_error = 0.0;
  CHECK(!fit_decay(pts, DecayModel::kExponential, opts).weighted);
}

TEST_CASE("fit covariance is positive semidefinite") {
  RngStream rng(31, 0);
  auto pts = synthetic_points(DecayModel::kExponential, {0.95}, range_depths(1, 40), 1);
  for (auto& pt : pts) {
    pt.fidelity += 1e-3 * rng.normal();
    pt.std_error = 1e-3;
  }
  FitOptions opts;
  opts.m_min = 1;
  DecayFit fit = fit_decay(pts, DecayModel::kExponential, opts);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(fit.covariance);
  CHECK(solver.eigenvalues().minCoeff() >= -1e-18);
  CHECK(fit.param_std_error(0) > 0.0);
}

TEST_CASE("analytic model gradients match central finite differences") {
  const double h = 1e-6;
  FitOptions opts2;
  opts2.num_qubits = 2;
  FitOptions opts_shared = opts2;
  opts_shared.shared_p = true;

  struct Case {
    DecayModel model;
    std::vector<double> params;
    FitOptions opts;
  };
  std::vector<Case> cases;
  for (double p : {0.3, 0.9, 0.99}) {
    cases.push_back({DecayModel::kExponential, {p}, FitOptions{}});
    cases.push_back({DecayModel::kAdditive, {1.0 - p}, FitOptions{}});
    cases.push_back({DecayModel::kFSingle, {p, 0.5 + p / 2}, opts2});
    cases.push_back({DecayModel::kFSingle, {p}, opts_shared});
  }
  for (const Case& c : cases) {
    for (int m : {1, 2, 7, 25}) {
      const std::vector<double> grad = decay_model_gradient(c.model, c.params, m, c.opts);
      for (std::size_t j = 0; j < c.params.size(); ++j) {
        std::vector<double> up = c.params, down = c.params;
        up[j] += h;
        down[j] -= h;
        const double fd = (decay_model_value(c.model, up, m, c.opts) -
                           decay_model_value(c.model, down, m, c.opts)) /
                          (2.0 * h);
        // relative 1e-6 where the derivative is resolvable, absolute floor
        // 1e-10 where the central difference underflows
        const double scale = std::max(std::abs(fd), std::abs(grad[j]));
        CHECK(std::abs(grad[j] - fd) <= 1e-6 * scale + 1e-10);
      }
    }
  }
}

TEST_CASE("non-convergence raises a fit failure with diagnostics") {
  auto pts = synthetic_points(DecayModel::kExponential, {0.9}, range_depths(1, 20), 1);
  FitOptions opts;
  opts.m_min = 1;
  opts.max_iterations = 0;
  CHECK_THROWS_AS(fit_decay(pts, DecayModel::kExponential, opts), FitFailureError);
}
