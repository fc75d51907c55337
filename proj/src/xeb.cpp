#include "xebsim/xeb.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "xebsim/errors.hpp"

namespace xebsim {

namespace {
constexpr double kNormalizationTol = 1e-9;
constexpr double kDegenerateTol = 1e-15;

bool is_power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }
}  // namespace

CircuitRecord make_circuit_record(const std::vector<double>& ideal,
                                  const std::vector<double>& measured, int depth) {
  if (ideal.size() != measured.size()) {
    throw std::invalid_argument("make_circuit_record: vector length mismatch");
  }
  if (!is_power_of_two(ideal.size())) {
    throw std::invalid_argument("make_circuit_record: length must be a power of two");
  }
  for (double p : ideal)
    if (p < -1e-15) throw std::invalid_argument("make_circuit_record: negative ideal probability");
  for (double p : measured)
    if (p < -1e-15) throw std::invalid_argument("make_circuit_record: negative frequency");
  double si = std::accumulate(ideal.begin(), ideal.end(), 0.0);
  double sm = std::accumulate(measured.begin(), measured.end(), 0.0);
  if (std::abs(si - 1.0) > kNormalizationTol || std::abs(sm - 1.0) > kNormalizationTol) {
    throw std::invalid_argument("make_circuit_record: vectors must sum to 1 (got " +
                                std::to_string(si) + ", " + std::to_string(sm) + ")");
  }
  CircuitRecord rec;
  rec.depth = depth;
  rec.u_u = 1.0 / static_cast<double>(ideal.size());
  for (std::size_t x = 0; x < ideal.size(); ++x) {
    rec.m_u += ideal[x] * measured[x];
    rec.e_u += ideal[x] * ideal[x];
  }
  return rec;
}

double estimate_fidelity_value(const std::vector<CircuitRecord>& records) {
  if (records.empty()) throw std::invalid_argument("estimate_fidelity: no records");
  double num = 0.0, den = 0.0;
  for (const CircuitRecord& r : records) {
    num += (r.m_u - r.u_u) * (r.e_u - r.u_u);
    den += (r.e_u - r.u_u) * (r.e_u - r.u_u);
  }
  if (den < kDegenerateTol) {
    throw IndeterminateFidelityError(
        "estimate_fidelity: every ideal distribution is uniform; the reference "
        "set cannot resolve fidelity");
  }
  return num / den;
}

FidelityPoint estimate_fidelity(const std::vector<CircuitRecord>& records) {
  const int depth = records.empty() ? 0 : records.front().depth;
  for (const CircuitRecord& r : records) {
    if (r.depth != depth) {
      throw std::invalid_argument("estimate_fidelity: records must share one depth");
    }
  }
  FidelityPoint point;
  point.depth = depth;
  point.fidelity = estimate_fidelity_value(records);
  point.std_error = 0.0;
  point.num_circuits = static_cast<int>(records.size());
  return point;
}

double survival_probability(const std::vector<double>& measured) {
  if (measured.empty()) throw std::invalid_argument("survival_probability: empty vector");
  double total = std::accumulate(measured.begin(), measured.end(), 0.0);
  if (std::abs(total - 1.0) > kNormalizationTol) {
    throw std::invalid_argument("survival_probability: vector must sum to 1");
  }
  return measured.front();
}

}  // namespace xebsim
