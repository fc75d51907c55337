#include "xebsim/clifford.hpp"

#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "xebsim/errors.hpp"

using namespace xebsim;

TEST_CASE("single-qubit group has 24 elements with the expected Pauli actions") {
  const CliffordGroup& g = CliffordGroup::instance(1);
  CHECK(g.order() == 24);
  std::vector<Matrix> mats;
  for (std::size_t i = 0; i < g.order(); ++i) mats.push_back(g.element(i).matrix);
  // Independent count through the conjugation representation.
  CHECK(oracles::count_distinct_pauli_actions(mats, 1) == 24);
}

TEST_CASE("two-qubit group has 11520 elements") {
  const CliffordGroup& g = CliffordGroup::instance(2);
  CHECK(g.order() == 11520);
  std::vector<Matrix> mats;
  for (std::size_t i = 0; i < g.order(); ++i) mats.push_back(g.element(i).matrix);
  CHECK(oracles::count_distinct_pauli_actions(mats, 2) == 11520);
}

TEST_CASE("group elements are unitary with canonical phase") {
  const CliffordGroup& g = CliffordGroup::instance(1);
  for (std::size_t i = 0; i < g.order(); ++i) {
    const Matrix& u = g.element(i).matrix;
    CHECK(is_unitary(u, 1e-12));
    // First nonzero entry real positive.
    bool checked = false;
    for (Eigen::Index r = 0; r < u.rows() && !checked; ++r) {
      for (Eigen::Index c = 0; c < u.cols() && !checked; ++c) {
        if (std::abs(u(r, c)) > 1e-10) {
          CHECK(std::abs(u(r, c).imag()) < 1e-12);
          CHECK(u(r, c).real() > 0.0);
          checked = true;
        }
      }
    }
  }
}

TEST_CASE("enumeration rejects unsupported qubit counts") {
  CHECK_THROWS_AS(CliffordGroup(3), std::invalid_argument);
  CHECK_THROWS_AS(CliffordGroup(0), std::invalid_argument);
}

TEST_CASE("closure: every pairwise product lands in the n=1 table") {
  const CliffordGroup& g = CliffordGroup::instance(1);
  for (std::size_t a = 0; a < g.order(); ++a) {
    for (std::size_t b = 0; b < g.order(); ++b) {
      CHECK_NOTHROW(g.compose(g.element(a), g.element(b)));
    }
  }
}

TEST_CASE("identity and inverse laws") {
  const CliffordGroup& g = CliffordGroup::instance(1);
  for (std::size_t i = 0; i < g.order(); ++i) {
    const CliffordElement& e = g.element(i);
    CHECK(g.compose(e, g.identity()).index == e.index);
    CHECK(g.compose(g.identity(), e).index == e.index);
    CHECK(g.compose(e, g.invert(e)).index == g.identity().index);
  }
}

TEST_CASE("H is an involution and S has order 4") {
  const CliffordGroup& g = CliffordGroup::instance(1);
  const CliffordElement& h = g.locate(gates::hadamard());
  CHECK(g.compose(h, h).index == g.identity().index);

  const CliffordElement& s = g.locate(gates::phase_s());
  // invert(S) = S*S*S up to phase
  const CliffordElement& s3 = g.compose(g.compose(s, s), s);
  CHECK(g.invert(s).index == s3.index);
}

TEST_CASE("invert is an involution on indices for Hermitian elements") {
  const CliffordGroup& g = CliffordGroup::instance(1);
  int hermitian_count = 0;
  for (std::size_t i = 0; i < g.order(); ++i) {
    const Matrix& u = g.element(i).matrix;
    const Matrix herm_diff = u - u.adjoint();
    if (herm_diff.cwiseAbs().maxCoeff() < 1e-10) {
      ++hermitian_count;
      CHECK(g.invert(g.element(i)).index == i);
    }
    CHECK(g.invert(g.invert(g.element(i))).index == i);
  }
  CHECK(hermitian_count > 1);  // identity, H, Paulis at least
}

TEST_CASE("canonical phase is idempotent") {
  const CliffordGroup& g = CliffordGroup::instance(1);
  for (std::size_t i = 0; i < g.order(); ++i) {
    Matrix once = canonicalize_phase(g.element(i).matrix);
    Matrix twice = canonicalize_phase(once);
    CHECK((once - twice).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("locate rejects a non-member") {
  const CliffordGroup& g = CliffordGroup::instance(1);
  Matrix t(2, 2);  // pi/8 gate is not a Clifford
  t << 1, 0, 0, std::polar(1.0, M_PI / 4.0);
  CHECK_THROWS_AS(g.locate(t), CanonicalizationError);
}

TEST_CASE("unitary-2-design spot check: group average of |<0|g|0>|^4 is 1/3") {
  const CliffordGroup& g = CliffordGroup::instance(1);
  double avg = 0.0;
  for (std::size_t i = 0; i < g.order(); ++i) {
    const double amp = std::norm(g.element(i).matrix(0, 0));
    avg += amp * amp;
  }
  avg /= static_cast<double>(g.order());
  CHECK(std::abs(avg - 1.0 / 3.0) < 1e-10);
}

TEST_CASE("sampling is uniform and reproducible") {
  const CliffordGroup& g = CliffordGroup::instance(1);
  const int draws = 24000;
  std::vector<int> counts(24, 0);
  {
    RngStream rng(7, 1);
    for (int i = 0; i < draws; ++i) ++counts[g.sample_uniform(rng).index];
  }
  // Each frequency within 5 sigma of draws/24.
  const double expected = draws / 24.0;
  const double sigma = std::sqrt(expected * (1.0 - 1.0 / 24.0));
  for (int c : counts) CHECK(std::abs(c - expected) < 5.0 * sigma);

  RngStream rng_a(7, 1), rng_b(7, 1);
  for (int i = 0; i < 100; ++i) {
    CHECK(g.sample_uniform(rng_a).index == g.sample_uniform(rng_b).index);
  }
}

TEST_CASE("sampled trace average converges to the exact group average (n=2)") {
  const CliffordGroup& g = CliffordGroup::instance(2);
  double exact = 0.0;
  std::vector<double> traces(g.order());
  for (std::size_t i = 0; i < g.order(); ++i) {
    traces[i] = std::abs(g.element(i).matrix.trace());
    exact += traces[i];
  }
  exact /= static_cast<double>(g.order());
  double pop_var = 0.0;
  for (double t : traces) pop_var += (t - exact) * (t - exact);
  pop_var /= static_cast<double>(g.order());

  const int draws = 100000;
  RngStream rng(11, 2);
  double mean = 0.0;
  for (int i = 0; i < draws; ++i) mean += std::abs(g.sample_uniform(rng).matrix.trace());
  mean /= draws;
  CHECK(std::abs(mean - exact) < 5.0 * std::sqrt(pop_var / draws));
}

TEST_CASE("factorized layers expand to the kron of their factors") {
  const CliffordGroup& g1 = CliffordGroup::instance(1);
  CliffordLayer layer;
  layer.num_qubits = 2;
  layer.elements = {g1.locate(gates::hadamard()), g1.locate(gates::phase_s())};
  CHECK(layer.is_factorized());
  Matrix expected = kron(gates::hadamard(), gates::phase_s());
  CHECK((layer.full_matrix() - expected).cwiseAbs().maxCoeff() < 1e-14);

  CliffordLayer global;
  global.num_qubits = 2;
  global.elements = {CliffordGroup::instance(2).locate(gates::cz())};
  CHECK(!global.is_factorized());
  CHECK((global.full_matrix() - canonicalize_phase(gates::cz())).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("compose rejects dimension mismatch") {
  const CliffordGroup& g1 = CliffordGroup::instance(1);
  const CliffordGroup& g2 = CliffordGroup::instance(2);
  CHECK_THROWS_AS(g2.compose(g1.identity(), g2.identity()), std::invalid_argument);
}
