#include "xebsim/distributions.hpp"

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"

using namespace xebsim;

TEST_CASE("Porter-Thomas CDF") {
  CHECK(porter_thomas_cdf(0.0, 4) == 0.0);
  CHECK(porter_thomas_cdf(1.0, 4) == 1.0);
  for (double p : {0.1, 0.5, 0.9}) CHECK(porter_thomas_cdf(p, 2) == doctest::Approx(p));
  CHECK(porter_thomas_cdf(0.25, 4) == doctest::Approx(0.578125).epsilon(1e-13));

  // Cross-check against numerical integration of the density (d-1)(1-P)^(d-2).
  for (int d : {2, 4, 8}) {
    for (double p : {0.05, 0.3, 0.7}) {
      const double quad = oracles::integrate(
          [d](double x) { return (d - 1) * std::pow(1.0 - x, d - 2); }, 0.0, p);
      CHECK(porter_thomas_cdf(p, d) == doctest::Approx(quad).epsilon(1e-11));
    }
  }
}

TEST_CASE("factorized CDF closed form matches quadrature of the density") {
  // density (-ln P)^(n-1) / (n-1)!; integrate the regular tail over [P, 1].
  for (int n = 1; n <= 4; ++n) {
    double fact = 1.0;
    for (int k = 2; k < n; ++k) fact *= k;
    for (double p = 0.001; p < 1.0; p += 0.0431) {
      const double tail = oracles::integrate(
          [n, fact](double x) { return std::pow(-std::log(x), n - 1) / fact; }, p, 1.0);
      CHECK(std::abs(factorized_cdf(p, n) - (1.0 - tail)) < 1e-10);
    }
  }
}

TEST_CASE("factorized CDF special values") {
  for (double p : {0.0, 0.2, 0.77, 1.0}) {
    CHECK(factorized_cdf(p, 1) == doctest::Approx(p).epsilon(1e-15));
    // n=1 coincides with Porter-Thomas at d=2.
    CHECK(std::abs(factorized_cdf(p, 1) - porter_thomas_cdf(p, 2)) < 1e-14);
  }
  const double e_inv = std::exp(-1.0);
  CHECK(factorized_cdf(e_inv, 2) == doctest::Approx(2.0 * e_inv).epsilon(1e-13));
  CHECK(factorized_cdf(e_inv, 2) == doctest::Approx(0.7357588823).epsilon(1e-9));
}

TEST_CASE("CDFs are monotone with unit range") {
  for (int n = 1; n <= 4; ++n) {
    double prev_f = 0.0, prev_pt = 0.0;
    for (int i = 0; i <= 500; ++i) {
      const double p = i / 500.0;
      const double f = factorized_cdf(p, n);
      const double pt = porter_thomas_cdf(p, 1 << n);
      CHECK(f >= prev_f - 1e-15);
      CHECK(pt >= prev_pt - 1e-15);
      prev_f = f;
      prev_pt = pt;
    }
    CHECK(factorized_cdf(1.0, n) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("single-qubit Clifford step distribution") {
  StepDistribution dist = clifford_step_distribution(1);
  REQUIRE(dist.values.size() == 3);
  CHECK(dist.values[0] == 0.0);
  CHECK(dist.values[1] == doctest::Approx(0.5));
  CHECK(dist.values[2] == doctest::Approx(1.0));
  CHECK(dist.weight(0) == doctest::Approx(1.0 / 6.0));
  CHECK(dist.weight(1) == doctest::Approx(2.0 / 3.0));
  CHECK(dist.weight(2) == doctest::Approx(1.0 / 6.0));
  // Exact rational weights: integer counts sum to the enumeration total.
  std::uint64_t total = 0;
  for (std::uint64_t c : dist.counts) total += c;
  CHECK(total == dist.total);
  CHECK(dist.total == 48);  // 24 elements x 2 bitstrings
}

TEST_CASE("two-qubit Clifford step distribution has support {0, 1/4, 1/2, 1}") {
  StepDistribution dist = clifford_step_distribution(2);
  REQUIRE(dist.values.size() == 4);
  CHECK(dist.values[0] == 0.0);
  CHECK(dist.values[1] == doctest::Approx(0.25));
  CHECK(dist.values[2] == doctest::Approx(0.5));
  CHECK(dist.values[3] == doctest::Approx(1.0));
  std::uint64_t total = 0;
  for (std::uint64_t c : dist.counts) total += c;
  CHECK(total == dist.total);
  CHECK(dist.total == 46080);  // 11520 elements x 4 bitstrings
}

TEST_CASE("factorized Clifford product law") {
  StepDistribution dist = factorized_clifford_step_distribution(2);
  // Per qubit {0: 1/6, 1/2: 2/3, 1: 1/6}; products give
  // {0: 11/36, 1/4: 4/9, 1/2: 2/9, 1: 1/36}.
  REQUIRE(dist.values.size() == 4);
  CHECK(dist.weight(0) == doctest::Approx(11.0 / 36.0));
  CHECK(dist.weight(1) == doctest::Approx(4.0 / 9.0));
  CHECK(dist.weight(2) == doctest::Approx(2.0 / 9.0));
  CHECK(dist.weight(3) == doctest::Approx(1.0 / 36.0));
}

TEST_CASE("KS distance basics") {
  ProbabilitySample sample;
  sample.num_qubits = 1;
  sample.values.assign(1000, 0.3);
  // A point mass against a continuous CDF is at least 1 - cdf(value).
  const double d = ks_distance(sample, [](double p) { return p; });
  CHECK(d >= 1.0 - 0.3 - 1e-12);

  RngStream rng(3, 9);
  sample.values.clear();
  for (int i = 0; i < 40000; ++i) sample.values.push_back(rng.uniform());
  CHECK(ks_distance(sample, [](double p) { return p; }) < 1.63 / std::sqrt(40000.0));
}

TEST_CASE("ensemble samples match their own laws and differ across laws") {
  RngStream rng(12, 0);
  const double threshold = 1.63 / std::sqrt(40000.0);

  ProbabilitySample fact1 = sample_factorized_ensemble(1, 20000, rng);
  CHECK(fact1.values.size() == 40000);
  CHECK(ks_distance(fact1, [](double p) { return factorized_cdf(p, 1); }) < threshold);

  ProbabilitySample haar2 = sample_haar_ensemble(2, 10000, rng);
  CHECK(haar2.values.size() == 40000);
  CHECK(ks_distance(haar2, [](double p) { return porter_thomas_cdf(p, 4); }) < threshold);

  ProbabilitySample fact2 = sample_factorized_ensemble(2, 10000, rng);
  CHECK(ks_distance(fact2, [](double p) { return factorized_cdf(p, 2); }) < threshold);
  CHECK(ks_distance(fact2, [](double p) { return porter_thomas_cdf(p, 4); }) > threshold);
}

TEST_CASE("multiplying independent single-qubit values reproduces the factorized law") {
  // Appendix-style recursive product construction.
  RngStream rng(19, 0);
  ProbabilitySample product;
  product.num_qubits = 3;
  for (int i = 0; i < 30000; ++i) {
    double v = 1.0;
    for (int q = 0; q < 3; ++q) v *= rng.uniform();  // single-qubit P_0 is uniform
    product.values.push_back(v);
  }
  CHECK(ks_distance(product, [](double p) { return factorized_cdf(p, 3); }) <
        1.63 / std::sqrt(30000.0));
}

TEST_CASE("TV distance to step references") {
  StepDistribution ref = clifford_step_distribution(1);
  ProbabilitySample sample;
  sample.num_qubits = 1;
  // Perfectly matching proportions: 1/6, 2/3, 1/6 over 600 values.
  for (int i = 0; i < 100; ++i) sample.values.push_back(0.0);
  for (int i = 0; i < 400; ++i) sample.values.push_back(0.5);
  for (int i = 0; i < 100; ++i) sample.values.push_back(1.0);
  CHECK(tv_distance(sample, ref) == doctest::Approx(0.0).epsilon(1e-12));

  // Off-support mass counts fully.
  sample.values.assign(100, 0.37);
  CHECK(tv_distance(sample, ref) == doctest::Approx(1.0));
}

TEST_CASE("validate_reference: plain simultaneous single-qubit Cliffords look factorized") {
  EnsembleSpec spec;
  spec.kind = ReferenceKind::kClifford;
  spec.factorized = true;
  spec.num_qubits = 2;
  for (int depth : {1, 5}) {
    DistributionVerdict v = validate_reference(spec, depth, 6000, 77);
    CHECK(v.verdict == RandomizationVerdict::kFactorizedLike);
    CHECK(v.ks_to_factorized < v.tv_threshold);
    CHECK(v.ks_to_clifford_step > v.tv_threshold);
  }
}

TEST_CASE("validate_reference: the two-qubit Clifford ensemble matches its own step law") {
  EnsembleSpec spec;
  spec.kind = ReferenceKind::kClifford;
  spec.factorized = false;
  spec.num_qubits = 2;
  DistributionVerdict v = validate_reference(spec, 1, 6000, 78);
  CHECK(v.verdict == RandomizationVerdict::kMultiqubitLike);
  CHECK(v.ks_to_clifford_step < v.tv_threshold);
}

TEST_CASE("validate_reference: interleaving a CZ randomizes single-qubit references") {
  EnsembleSpec spec;
  spec.kind = ReferenceKind::kClifford;
  spec.factorized = true;
  spec.num_qubits = 2;
  spec.interleaved_gate = gates::cz();
  DistributionVerdict v = validate_reference(spec, 4, 6000, 79);
  CHECK(v.verdict == RandomizationVerdict::kMultiqubitLike);
  CHECK(v.ks_to_clifford_step < v.tv_threshold);
  CHECK(v.ks_to_factorized > v.tv_threshold);

  // Haar references converge to Porter-Thomas instead.
  EnsembleSpec haar = spec;
  haar.kind = ReferenceKind::kHaar;
  DistributionVerdict vh = validate_reference(haar, 4, 6000, 80);
  CHECK(vh.verdict == RandomizationVerdict::kMultiqubitLike);
  CHECK(vh.ks_to_porter_thomas < vh.threshold);
}

TEST_CASE("ensemble sampling is deterministic for a fixed seed") {
  EnsembleSpec spec;
  spec.kind = ReferenceKind::kHaar;
  spec.factorized = true;
  spec.num_qubits = 2;
  ProbabilitySample a = sample_circuit_ensemble(spec, 3, 50, 123);
  ProbabilitySample b = sample_circuit_ensemble(spec, 3, 50, 123);
  REQUIRE(a.values.size() == b.values.size());
  for (std::size_t i = 0; i < a.values.size(); ++i) CHECK(a.values[i] == b.values[i]);
}

TEST_CASE("parallel ensemble sampling is thread-count independent") {
  EnsembleSpec spec;
  spec.kind = ReferenceKind::kClifford;
  spec.factorized = true;
  spec.num_qubits = 2;
  spec.interleaved_gate = gates::cz();
  ProbabilitySample serial = sample_circuit_ensemble(spec, 4, 300, 55, 1);
  ProbabilitySample parallel = sample_circuit_ensemble(spec, 4, 300, 55, 4);
  REQUIRE(serial.values.size() == parallel.values.size());
  for (std::size_t i = 0; i < serial.values.size(); ++i) {
    CHECK(serial.values[i] == parallel.values[i]);
  }
}
