#include "xebsim/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "xebsim/clifford.hpp"
#include "xebsim/simulator.hpp"
#include "xebsim/threading.hpp"

namespace xebsim {

namespace {
constexpr double kSupportSnapTol = 1e-9;
constexpr double kKsCritical99 = 1.63;  // sqrt(-ln(0.005)/2), 99th percentile
}  // namespace

double porter_thomas_cdf(double p, int dim) {
  if (dim < 2) throw std::invalid_argument("porter_thomas_cdf: dim must be >= 2");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("porter_thomas_cdf: P out of [0,1]");
  return 1.0 - std::pow(1.0 - p, dim - 1);
}

double factorized_cdf(double p, int n) {
  if (n < 1) throw std::invalid_argument("factorized_cdf: n must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("factorized_cdf: P out of [0,1]");
  if (p == 0.0) return 0.0;  // limit
  const double l = -std::log(p);
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < n; ++k) {
    term *= l / k;
    sum += term;
  }
  return p * sum;
}

double StepDistribution::cdf(double p) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] <= p + kSupportSnapTol) acc += weight(i);
  }
  return acc;
}

namespace {

StepDistribution from_value_counts(const std::map<std::int64_t, std::uint64_t>& counts,
                                   double resolution) {
  StepDistribution dist;
  for (const auto& [key, count] : counts) {
    dist.values.push_back(key * resolution);
    dist.counts.push_back(count);
    dist.total += count;
  }
  return dist;
}

}  // namespace

StepDistribution clifford_step_distribution(int n) {
  const CliffordGroup& group = CliffordGroup::instance(n);
  const int d = group.dim();
  const Vector zero = initial_state(n);
  // Diagonal values of Clifford states are multiples of 2^-n; count on that grid.
  const double resolution = 1.0 / d;
  std::map<std::int64_t, std::uint64_t> counts;
  for (std::size_t i = 0; i < group.order(); ++i) {
    Vector psi = group.element(i).matrix * zero;
    for (int x = 0; x < d; ++x) {
      const double v = std::norm(psi(x));
      const std::int64_t key = std::llround(v / resolution);
      if (std::abs(v - key * resolution) > kSupportSnapTol) {
        throw std::logic_error("clifford_step_distribution: off-grid diagonal value");
      }
      counts[key] += 1;
    }
  }
  return from_value_counts(counts, resolution);
}

StepDistribution factorized_clifford_step_distribution(int n) {
  StepDistribution one = clifford_step_distribution(1);
  // Convolve n independent single-qubit step laws under multiplication.
  // All values are powers of two (or zero), so track on a 2^-n grid.
  const double resolution = std::pow(2.0, -n);
  std::map<std::int64_t, std::uint64_t> counts;
  counts[std::llround(1.0 / resolution)] = 1;  // start from the empty product = 1
  for (int q = 0; q < n; ++q) {
    std::map<std::int64_t, std::uint64_t> next;
    for (const auto& [key, count] : counts) {
      for (std::size_t i = 0; i < one.values.size(); ++i) {
        const double v = key * resolution * one.values[i];
        next[std::llround(v / resolution)] += count * one.counts[i];
      }
    }
    counts = std::move(next);
  }
  return from_value_counts(counts, resolution);
}

double ks_distance(const ProbabilitySample& sample, const std::function<double(double)>& cdf) {
  if (sample.values.empty()) throw std::invalid_argument("ks_distance: empty sample");
  std::vector<double> sorted = sample.values;
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    sup = std::max(sup, std::max(f - i / n, (i + 1) / n - f));
  }
  return sup;
}

double tv_distance(const ProbabilitySample& sample, const StepDistribution& ref) {
  if (sample.values.empty()) throw std::invalid_argument("tv_distance: empty sample");
  std::vector<double> freq(ref.values.size(), 0.0);
  double off_support = 0.0;
  const double inc = 1.0 / sample.values.size();
  for (double v : sample.values) {
    auto it = std::lower_bound(ref.values.begin(), ref.values.end(), v - kSupportSnapTol);
    if (it != ref.values.end() && std::abs(*it - v) <= kSupportSnapTol) {
      freq[it - ref.values.begin()] += inc;
    } else {
      off_support += inc;
    }
  }
  double tv = off_support;  // off-support bins have zero reference weight
  for (std::size_t i = 0; i < freq.size(); ++i) tv += std::abs(freq[i] - ref.weight(i));
  return tv / 2.0;
}

ProbabilitySample sample_factorized_ensemble(int n, int num_states, RngStream& rng) {
  ProbabilitySample sample;
  sample.num_qubits = n;
  sample.source_tag = "factorized-haar";
  sample.values.reserve(static_cast<std::size_t>(num_states) << n);
  for (int s = 0; s < num_states; ++s) {
    std::vector<std::vector<double>> marginals(n);
    for (int q = 0; q < n; ++q) {
      Vector v = random_state(2, rng);
      marginals[q] = {std::norm(v(0)), std::norm(v(1))};
    }
    const int d = 1 << n;
    for (int x = 0; x < d; ++x) {
      double prob = 1.0;
      for (int q = 0; q < n; ++q) prob *= marginals[q][(x >> (n - 1 - q)) & 1];
      sample.values.push_back(prob);
    }
  }
  return sample;
}

ProbabilitySample sample_haar_ensemble(int n, int num_states, RngStream& rng) {
  ProbabilitySample sample;
  sample.num_qubits = n;
  sample.source_tag = "global-haar";
  const int d = 1 << n;
  sample.values.reserve(static_cast<std::size_t>(num_states) * d);
  for (int s = 0; s < num_states; ++s) {
    Vector v = random_state(d, rng);
    for (int x = 0; x < d; ++x) sample.values.push_back(std::norm(v(x)));
  }
  return sample;
}

std::string EnsembleSpec::label() const {
  std::string out = factorized ? "factorized-" : "global-";
  out += kind == ReferenceKind::kClifford ? "clifford" : "haar";
  if (interleaved_gate) out += "-interleaved";
  return out;
}

ProbabilitySample sample_circuit_ensemble(const EnsembleSpec& spec, int depth, int num_circuits,
                                          std::uint64_t seed, int threads) {
  const int n = spec.num_qubits;
  const int d = 1 << n;
  ProbabilitySample sample;
  sample.num_qubits = n;
  sample.source_tag = spec.label();
  sample.values.assign(static_cast<std::size_t>(num_circuits) * d, 0.0);

  const CliffordGroup* g1 = nullptr;
  const CliffordGroup* gn = nullptr;
  if (spec.kind == ReferenceKind::kClifford) {
    if (spec.factorized) {
      g1 = &CliffordGroup::instance(1);
    } else {
      gn = &CliffordGroup::instance(n);
    }
  }

  parallel_for(num_circuits, threads, [&](std::size_t c) {
    RngStream rng(seed, rng_salt::kEnsemble, static_cast<std::uint64_t>(c));
    Vector psi = initial_state(n);
    for (int layer = 0; layer < depth; ++layer) {
      Matrix u;
      if (spec.factorized) {
        u = gates::identity(1);
        for (int q = 0; q < n; ++q) {
          Matrix uq = g1 ? g1->sample_uniform(rng).matrix : random_unitary(2, rng);
          u = kron(u, uq);
        }
      } else {
        u = gn ? gn->sample_uniform(rng).matrix : random_unitary(d, rng);
      }
      psi = u * psi;
      if (spec.interleaved_gate) psi = *spec.interleaved_gate * psi;
    }
    for (int x = 0; x < d; ++x) sample.values[c * d + x] = std::norm(psi(x));
  });
  return sample;
}

const char* verdict_name(RandomizationVerdict v) {
  switch (v) {
    case RandomizationVerdict::kMultiqubitLike: return "multiqubit-like";
    case RandomizationVerdict::kFactorizedLike: return "factorized-like";
    case RandomizationVerdict::kIndeterminate: return "indeterminate";
  }
  return "?";
}

DistributionVerdict validate_reference(const EnsembleSpec& spec, int depth, int num_circuits,
                                       std::uint64_t seed, int threads) {
  const int n = spec.num_qubits;
  const int d = 1 << n;
  ProbabilitySample sample = sample_circuit_ensemble(spec, depth, num_circuits, seed, threads);

  DistributionVerdict out;
  out.sample_size = static_cast<int>(sample.values.size());
  out.num_circuits = num_circuits;
  out.threshold = kKsCritical99 / std::sqrt(static_cast<double>(out.sample_size));
  out.tv_threshold = kKsCritical99 / std::sqrt(static_cast<double>(num_circuits));
  out.ks_to_porter_thomas = ks_distance(sample, [d](double p) { return porter_thomas_cdf(p, d); });
  out.ks_to_clifford_step = tv_distance(sample, clifford_step_distribution(n));

  // The factorized reference matching the ensemble's gate set: the continuous
  // law for Haar-type references, the discrete product law for Clifford-type.
  // Clifford-type comparisons are TV on the discrete support and judged at
  // tv_threshold; continuous comparisons are KS at `threshold`.
  double dist_multi, thr_multi, thr_fact;
  if (spec.kind == ReferenceKind::kClifford) {
    out.ks_to_factorized = tv_distance(sample, factorized_clifford_step_distribution(n));
    dist_multi = out.ks_to_clifford_step;
    thr_multi = out.tv_threshold;
    thr_fact = out.tv_threshold;
  } else {
    out.ks_to_factorized = ks_distance(sample, [n](double p) { return factorized_cdf(p, n); });
    dist_multi = out.ks_to_porter_thomas;
    thr_multi = out.threshold;
    thr_fact = out.threshold;
  }

  const bool multi_ok = dist_multi < thr_multi;
  const bool fact_far = out.ks_to_factorized > thr_fact;
  if (multi_ok && fact_far) {
    out.verdict = RandomizationVerdict::kMultiqubitLike;
  } else if (!multi_ok && !fact_far) {
    out.verdict = RandomizationVerdict::kFactorizedLike;
  } else {
    out.verdict = RandomizationVerdict::kIndeterminate;
  }
  return out;
}

}  // namespace xebsim
