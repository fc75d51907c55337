#include "xebsim/xeb.hpp"

#include <cmath>

#include "doctest.h"
#include "xebsim/errors.hpp"

using namespace xebsim;

TEST_CASE("circuit records from ideal/measured pairs") {
  CircuitRecord r = make_circuit_record({1.0, 0.0}, {1.0, 0.0}, 3);
  CHECK(r.m_u == doctest::Approx(1.0));
  CHECK(r.e_u == doctest::Approx(1.0));
  CHECK(r.u_u == doctest::Approx(0.5));
  CHECK(r.depth == 3);

  r = make_circuit_record({0.3, 0.7}, {0.5, 0.5}, 1);
  CHECK(r.m_u == doctest::Approx(0.5));  // uniform measured: m_u = u_u

  r = make_circuit_record({1.0, 0.0}, {0.75, 0.25}, 1);
  CHECK(r.m_u == doctest::Approx(0.75));
  CHECK(r.e_u == doctest::Approx(1.0));
  CHECK(r.u_u == doctest::Approx(0.5));

  CHECK_THROWS_AS(make_circuit_record({1.0, 0.0}, {1.0, 0.0, 0.0, 0.0}, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_circuit_record({0.9, 0.0}, {1.0, 0.0}, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_circuit_record({0.5, 0.5, 0.0}, {0.5, 0.5, 0.0}, 1),
                  std::invalid_argument);
}

TEST_CASE("e_u >= u_u for any normalized ideal distribution") {
  // Cauchy-Schwarz; spot-check a spread of distributions.
  const std::vector<std::vector<double>> ideals = {
      {0.25, 0.25, 0.25, 0.25}, {1.0, 0.0, 0.0, 0.0}, {0.5, 0.3, 0.1, 0.1}, {0.7, 0.3, 0.0, 0.0}};
  for (const auto& ideal : ideals) {
    CircuitRecord r = make_circuit_record(ideal, ideal, 1);
    CHECK(r.e_u >= r.u_u - 1e-15);
    CHECK(r.m_u >= 0.0);
    CHECK(r.m_u <= 1.0);
  }
}

TEST_CASE("estimator endpoints") {
  std::vector<CircuitRecord> records;
  records.push_back(make_circuit_record({1.0, 0.0}, {1.0, 0.0}, 1));
  records.push_back(make_circuit_record({0.0, 1.0}, {0.0, 1.0}, 1));
  CHECK(estimate_fidelity_value(records) == doctest::Approx(1.0));

  records.clear();
  records.push_back(make_circuit_record({1.0, 0.0}, {0.5, 0.5}, 1));
  records.push_back(make_circuit_record({0.0, 1.0}, {0.5, 0.5}, 1));
  CHECK(estimate_fidelity_value(records) == doctest::Approx(0.0));

  records.clear();
  records.push_back({1, 0.75, 1.0, 0.5});
  CHECK(estimate_fidelity_value(records) == doctest::Approx(0.5));
}

TEST_CASE("estimator is exactly linear in the depolarizing mixture") {
  // measured = F * ideal + (1-F) * uniform must return F exactly.
  const std::vector<double> ideal = {0.5, 0.25, 0.25, 0.0};
  for (double f : {0.0, 0.1, 0.37, 0.5, 0.9, 1.0}) {
    std::vector<double> measured(4);
    for (int i = 0; i < 4; ++i) measured[i] = f * ideal[i] + (1.0 - f) * 0.25;
    std::vector<CircuitRecord> records = {make_circuit_record(ideal, measured, 2)};
    CHECK(std::abs(estimate_fidelity_value(records) - f) < 1e-12);
  }
}

TEST_CASE("estimator is invariant under record duplication") {
  std::vector<CircuitRecord> records = {{1, 0.8, 0.9, 0.5}, {1, 0.55, 0.6, 0.5}};
  const double once = estimate_fidelity_value(records);
  std::vector<CircuitRecord> doubled = records;
  doubled.insert(doubled.end(), records.begin(), records.end());
  CHECK(estimate_fidelity_value(doubled) == doctest::Approx(once).epsilon(1e-14));
}

TEST_CASE("degenerate reference sets are rejected") {
  std::vector<CircuitRecord> records = {{1, 0.5, 0.5, 0.5}, {1, 0.5, 0.5, 0.5}};
  CHECK_THROWS_AS(estimate_fidelity_value(records), IndeterminateFidelityError);
  CHECK_THROWS_AS(estimate_fidelity_value({}), std::invalid_argument);
}

TEST_CASE("estimate_fidelity groups strictly by depth") {
  std::vector<CircuitRecord> records = {{1, 0.8, 0.9, 0.5}, {2, 0.7, 0.9, 0.5}};
  CHECK_THROWS_AS(estimate_fidelity(records), std::invalid_argument);

  records = {{3, 0.8, 0.9, 0.5}, {3, 0.7, 0.9, 0.5}};
  FidelityPoint pt = estimate_fidelity(records);
  CHECK(pt.depth == 3);
  CHECK(pt.num_circuits == 2);
  CHECK(pt.std_error == 0.0);
}

TEST_CASE("survival probability") {
  CHECK(survival_probability({1.0, 0.0, 0.0, 0.0}) == doctest::Approx(1.0));
  CHECK(survival_probability({0.25, 0.25, 0.25, 0.25}) == doctest::Approx(0.25));
  CHECK_THROWS_AS(survival_probability({}), std::invalid_argument);
  CHECK_THROWS_AS(survival_probability({0.5, 0.1}), std::invalid_argument);
}
