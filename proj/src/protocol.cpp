#include "xebsim/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "xebsim/clifford.hpp"
#include "xebsim/errors.hpp"
#include "xebsim/threading.hpp"

namespace xebsim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double sample_std(const std::vector<double>& values) {
  if (values.size() < 2) return kNaN;
  double mean = std::accumulate(values.begin(), values.end(), 0.0) / values.size();
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / (values.size() - 1));
}

}  // namespace

const char* protocol_name(Protocol p) {
  switch (p) {
    case Protocol::kXebSingle: return "xeb-single";
    case Protocol::kXebMulti: return "xeb-multi";
    case Protocol::kIrbClifford: return "irb-clifford";
    case Protocol::kXebInterleaved: return "xeb-interleaved";
  }
  return "?";
}

Protocol protocol_from_name(const std::string& name) {
  if (name == "xeb-single") return Protocol::kXebSingle;
  if (name == "xeb-multi") return Protocol::kXebMulti;
  if (name == "irb-clifford") return Protocol::kIrbClifford;
  if (name == "xeb-interleaved") return Protocol::kXebInterleaved;
  throw std::invalid_argument("unknown protocol: " + name);
}

void ExperimentPlan::validate() const {
  if (num_qubits < 1 || num_qubits > 4) {
    throw std::invalid_argument("ExperimentPlan: num_qubits must be 1..4");
  }
  if (depths.empty()) throw std::invalid_argument("ExperimentPlan: empty depth list");
  for (std::size_t i = 0; i < depths.size(); ++i) {
    if (depths[i] < 1) throw std::invalid_argument("ExperimentPlan: depths must be >= 1");
    if (i > 0 && depths[i] <= depths[i - 1]) {
      throw std::invalid_argument("ExperimentPlan: depths must be strictly increasing");
    }
  }
  if (circuits_per_depth < 1) throw std::invalid_argument("ExperimentPlan: need >= 1 circuit");
  if (shots < 0) throw std::invalid_argument("ExperimentPlan: negative shots");
  noise.validate();
  if (noise.num_qubits() != num_qubits) {
    throw std::invalid_argument("ExperimentPlan: noise qubit count mismatch");
  }
  if ((protocol == Protocol::kXebMulti || protocol == Protocol::kIrbClifford) && num_qubits > 2) {
    throw std::invalid_argument(
        "ExperimentPlan: monolithic Clifford protocols support at most 2 qubits");
  }
  if (protocol == Protocol::kXebInterleaved && !target_gate) {
    throw std::invalid_argument("ExperimentPlan: interleaved protocol requires a target gate");
  }
  if (target_gate) {
    const int d = 1 << num_qubits;
    if (target_gate->rows() != d || target_gate->cols() != d) {
      throw std::invalid_argument("ExperimentPlan: target gate dimension mismatch");
    }
    if (!is_unitary(*target_gate, 1e-10)) {
      throw std::invalid_argument("ExperimentPlan: target gate is not unitary");
    }
  }
}

const DecayFit& ExperimentResult::primary_fit() const {
  for (const DecayFit& f : fits) {
    if (f.model == primary_model) return f;
  }
  throw std::logic_error("ExperimentResult: primary fit missing");
}

namespace {

struct CircuitOutcome {
  CircuitRecord record;
  double survival = 0.0;
};

// Build and simulate one circuit of the plan at depth m.
CircuitOutcome simulate_one(const ExperimentPlan& plan, int depth_index, int circuit_index) {
  const int n = plan.num_qubits;
  const int d = 1 << n;
  const int m = plan.depths[depth_index];
  RngStream rng(plan.seed, rng_salt::kCircuit, static_cast<std::uint64_t>(depth_index),
                static_cast<std::uint64_t>(circuit_index));

  const bool factorized_layers =
      plan.protocol == Protocol::kXebSingle || plan.protocol == Protocol::kXebInterleaved;
  const CliffordGroup& g1 = CliffordGroup::instance(1);

  Circuit circuit;
  circuit.num_qubits = n;
  circuit.layers.reserve(m);

  if (factorized_layers) {
    for (int layer = 0; layer < m; ++layer) {
      Matrix u = gates::identity(1);
      for (int q = 0; q < n; ++q) u = kron(u, g1.sample_uniform(rng).matrix);
      circuit.layers.push_back(std::move(u));
    }
    if (plan.protocol == Protocol::kXebInterleaved) circuit.interleaved_gate = plan.target_gate;
  } else {
    const CliffordGroup& group = CliffordGroup::instance(n);
    std::vector<const CliffordElement*> layer_elements;
    layer_elements.reserve(m);
    for (int layer = 0; layer < m; ++layer) {
      const CliffordElement& e = group.sample_uniform(rng);
      layer_elements.push_back(&e);
      circuit.layers.push_back(e.matrix);
    }
    if (plan.protocol == Protocol::kIrbClifford) {
      const CliffordElement* target = nullptr;
      if (plan.target_gate) {
        try {
          target = &group.locate(*plan.target_gate);
        } catch (const CanonicalizationError&) {
          throw std::invalid_argument("irb-clifford: target gate must be a Clifford element");
        }
        circuit.interleaved_gate = plan.target_gate;
      }
      // Exact recovery gate from the group table.
      const CliffordElement* total = &group.identity();
      for (const CliffordElement* e : layer_elements) {
        total = &group.compose(*total, *e);
        if (target) total = &group.compose(*total, *target);
      }
      circuit.recovery_gate = group.invert(*total).matrix;
    }
  }

  Matrix rho = run_noisy_circuit(circuit, plan.noise);
  std::vector<double> measured = density_diagonal(rho);
  if (plan.shots > 0) {
    measured = to_frequencies(sample_bitstrings(measured, plan.shots, rng));
  }

  CircuitOutcome out;
  if (plan.protocol == Protocol::kIrbClifford) {
    const double s = survival_probability(measured);
    out.survival = (s - 1.0 / d) / (1.0 - 1.0 / d);
  } else {
    const std::vector<double> ideal = ideal_probabilities(circuit);
    out.record = make_circuit_record(ideal, measured, m);
  }
  return out;
}

std::vector<DecayModel> models_to_fit(const ExperimentPlan& plan) {
  if (plan.protocol == Protocol::kIrbClifford) return {DecayModel::kExponential};
  if (plan.num_qubits == 1) return {DecayModel::kExponential, DecayModel::kAdditive};
  return {DecayModel::kFSingle, DecayModel::kExponential, DecayModel::kAdditive};
}

FitOptions fit_options_for(const ExperimentPlan& plan) {
  FitOptions opts;
  opts.m_min = plan.m_min;
  opts.num_qubits = plan.num_qubits;
  opts.shared_p = false;
  return opts;
}

template <typename Estimator>
BootstrapResult bootstrap_generic(std::size_t num_depths, const Estimator& estimate,
                                  const std::vector<int>& depths, DecayModel model,
                                  const FitOptions& opts, int num_resamples, std::uint64_t seed,
                                  const std::function<std::size_t(std::size_t)>& circuits_at) {
  if (num_resamples < 100) {
    throw std::invalid_argument("bootstrap: need at least 100 resamples");
  }
  BootstrapResult out;
  std::vector<std::vector<double>> resampled(num_resamples,
                                             std::vector<double>(num_depths, kNaN));
  std::vector<bool> row_valid(num_resamples, true);
  for (int b = 0; b < num_resamples; ++b) {
    RngStream rng(seed, rng_salt::kBootstrap, static_cast<std::uint64_t>(b));
    for (std::size_t di = 0; di < num_depths; ++di) {
      const std::size_t k = circuits_at(di);
      if (k < 2) continue;  // stderr undefined at this depth
      std::vector<std::size_t> pick(k);
      for (std::size_t i = 0; i < k; ++i) pick[i] = rng.uniform_index(k);
      try {
        resampled[b][di] = estimate(di, pick);
      } catch (const IndeterminateFidelityError&) {
        row_valid[b] = false;
      }
    }
  }

  out.per_depth_std_error.assign(num_depths, kNaN);
  for (std::size_t di = 0; di < num_depths; ++di) {
    std::vector<double> col;
    col.reserve(num_resamples);
    for (int b = 0; b < num_resamples; ++b) {
      if (row_valid[b] && std::isfinite(resampled[b][di])) col.push_back(resampled[b][di]);
    }
    if (col.size() >= 2) out.per_depth_std_error[di] = sample_std(col);
  }

  // Refit each resampled curve, weighting by the per-depth std errors above.
  std::vector<std::vector<double>> params;
  for (int b = 0; b < num_resamples; ++b) {
    if (!row_valid[b]) continue;
    std::vector<FidelityPoint> pts;
    for (std::size_t di = 0; di < num_depths; ++di) {
      if (!std::isfinite(resampled[b][di])) continue;
      FidelityPoint pt;
      pt.depth = depths[di];
      pt.fidelity = resampled[b][di];
      pt.std_error = std::isfinite(out.per_depth_std_error[di]) ? out.per_depth_std_error[di] : 0.0;
      pt.num_circuits = static_cast<int>(circuits_at(di));
      pts.push_back(pt);
    }
    try {
      DecayFit fit = fit_decay(pts, model, opts);
      params.push_back(fit.params);
    } catch (const std::exception&) {
      // skip resamples whose refit fails
    }
  }
  out.resamples_used = static_cast<int>(params.size());
  if (!params.empty()) {
    const std::size_t np = params.front().size();
    out.param_std_error.assign(np, kNaN);
    for (std::size_t j = 0; j < np; ++j) {
      std::vector<double> col;
      col.reserve(params.size());
      for (const std::vector<double>& row : params) col.push_back(row[j]);
      out.param_std_error[j] = sample_std(col);
    }
  }
  return out;
}

}  // namespace

BootstrapResult bootstrap_xeb(const std::vector<std::vector<CircuitRecord>>& records_by_depth,
                              const std::vector<int>& depths, DecayModel model,
                              const FitOptions& opts, int num_resamples, std::uint64_t seed) {
  auto estimate = [&](std::size_t di, const std::vector<std::size_t>& pick) {
    std::vector<CircuitRecord> resampled;
    resampled.reserve(pick.size());
    for (std::size_t i : pick) resampled.push_back(records_by_depth[di][i]);
    return estimate_fidelity_value(resampled);
  };
  return bootstrap_generic(
      records_by_depth.size(), estimate, depths, model, opts, num_resamples, seed,
      [&](std::size_t di) { return records_by_depth[di].size(); });
}

BootstrapResult bootstrap_survival(const std::vector<std::vector<double>>& survivals_by_depth,
                                   const std::vector<int>& depths, DecayModel model,
                                   const FitOptions& opts, int num_resamples, std::uint64_t seed) {
  auto estimate = [&](std::size_t di, const std::vector<std::size_t>& pick) {
    double sum = 0.0;
    for (std::size_t i : pick) sum += survivals_by_depth[di][i];
    return sum / pick.size();
  };
  return bootstrap_generic(
      survivals_by_depth.size(), estimate, depths, model, opts, num_resamples, seed,
      [&](std::size_t di) { return survivals_by_depth[di].size(); });
}

ExperimentResult run_experiment(const ExperimentPlan& plan) {
  plan.validate();
  // Force group construction up front so worker threads only read.
  CliffordGroup::instance(1);
  if (plan.protocol == Protocol::kXebMulti || plan.protocol == Protocol::kIrbClifford) {
    CliffordGroup::instance(plan.num_qubits);
  }

  const std::size_t num_depths = plan.depths.size();
  const std::size_t k = plan.circuits_per_depth;
  const bool irb = plan.protocol == Protocol::kIrbClifford;

  ExperimentResult result;
  result.plan = plan;
  if (irb) {
    result.survivals.assign(num_depths, std::vector<double>(k, 0.0));
  } else {
    result.records.assign(num_depths, std::vector<CircuitRecord>(k));
  }

  parallel_for(num_depths * k, plan.threads, [&](std::size_t flat) {
    const int di = static_cast<int>(flat / k);
    const int ci = static_cast<int>(flat % k);
    CircuitOutcome outcome = simulate_one(plan, di, ci);
    if (irb) {
      result.survivals[di][ci] = outcome.survival;
    } else {
      result.records[di][ci] = outcome.record;
    }
  });

  result.curve.resize(num_depths);
  for (std::size_t di = 0; di < num_depths; ++di) {
    FidelityPoint pt;
    if (irb) {
      const std::vector<double>& s = result.survivals[di];
      pt.depth = plan.depths[di];
      pt.fidelity = std::accumulate(s.begin(), s.end(), 0.0) / s.size();
      pt.num_circuits = static_cast<int>(s.size());
    } else {
      pt = estimate_fidelity(result.records[di]);
    }
    result.curve[di] = pt;
  }

  const FitOptions opts = fit_options_for(plan);
  result.primary_model =
      (plan.protocol == Protocol::kXebSingle && plan.num_qubits > 1) ? DecayModel::kFSingle
                                                                     : DecayModel::kExponential;

  BootstrapResult boot =
      irb ? bootstrap_survival(result.survivals, plan.depths, result.primary_model, opts,
                               plan.bootstrap_resamples, plan.seed)
          : bootstrap_xeb(result.records, plan.depths, result.primary_model, opts,
                          plan.bootstrap_resamples, plan.seed);
  for (std::size_t di = 0; di < num_depths; ++di) {
    result.curve[di].std_error =
        std::isfinite(boot.per_depth_std_error[di]) ? boot.per_depth_std_error[di] : kNaN;
  }
  result.primary_param_std_error = boot.param_std_error;
  result.bootstrap_resamples_used = boot.resamples_used;

  // The curve carries NaN std errors when undefined; fits expect 0 for "no weight".
  std::vector<FidelityPoint> fit_points = result.curve;
  for (FidelityPoint& pt : fit_points) {
    if (!std::isfinite(pt.std_error)) pt.std_error = 0.0;
  }
  for (DecayModel model : models_to_fit(plan)) {
    try {
      DecayFit fit = fit_decay(fit_points, model, opts);
      if (model == result.primary_model) {
        result.fits.insert(result.fits.begin(), std::move(fit));
      } else {
        result.fits.push_back(std::move(fit));
      }
    } catch (const std::exception&) {
      if (model == result.primary_model) throw;
    }
  }
  return result;
}

GateFidelityEstimate interleaved_gate_estimate(double p_int, double p_int_std_error,
                                               const std::vector<double>& errors,
                                               const std::vector<double>& errors_std_error,
                                               int gate_dim, const std::string& errors_source) {
  if (!errors_std_error.empty() && errors_std_error.size() != errors.size()) {
    throw std::invalid_argument("interleaved_gate_estimate: error stderr length mismatch");
  }
  const int n = static_cast<int>(errors.size());
  GateFidelityEstimate est;
  est.p_int = p_int;
  est.p_int_std_error = p_int_std_error;
  est.gate_dim = gate_dim;
  est.errors_used = errors;
  est.errors_std_error = errors_std_error;
  est.errors_source = errors_source;

  const double coeff = 0.75 / (1.0 - std::pow(4.0, -n));
  double sum_e = 0.0, var_sum = 0.0;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    sum_e += errors[i];
    if (!errors_std_error.empty() && std::isfinite(errors_std_error[i])) {
      var_sum += errors_std_error[i] * errors_std_error[i];
    }
  }
  const double p_ref = 1.0 - coeff * sum_e;
  const double p_add = 1.0 - sum_e;
  if (p_ref <= 0.0 || p_add <= 0.0) {
    throw std::invalid_argument("interleaved_gate_estimate: nonpositive reference parameter");
  }
  const double sigma_sum = std::sqrt(var_sum);

  est.refined_p = p_int / p_ref;
  est.naive_p = p_int / p_add;
  const double rel_int = p_int != 0.0 ? p_int_std_error / std::abs(p_int) : 0.0;
  est.refined_std_error =
      std::abs(est.refined_p) *
      std::sqrt(rel_int * rel_int + std::pow(coeff * sigma_sum / p_ref, 2));
  est.naive_std_error =
      std::abs(est.naive_p) * std::sqrt(rel_int * rel_int + std::pow(sigma_sum / p_add, 2));

  const double scale = (gate_dim - 1.0) / gate_dim;
  est.refined_avg_fidelity = depolarizing_to_average_fidelity(std::min(1.0, est.refined_p), gate_dim);
  est.naive_avg_fidelity = depolarizing_to_average_fidelity(std::min(1.0, est.naive_p), gate_dim);
  est.refined_avg_std_error = scale * est.refined_std_error;
  est.naive_avg_std_error = scale * est.naive_std_error;
  return est;
}

IsolatedFitResult isolated_single_qubit_fit(const LocalNoiseModel& noise,
                                            const std::vector<int>& depths,
                                            int circuits_per_depth, long long shots,
                                            std::uint64_t seed, int bootstrap_resamples,
                                            int threads) {
  noise.validate();
  IsolatedFitResult out;
  for (int q = 0; q < noise.num_qubits(); ++q) {
    ExperimentPlan plan;
    plan.protocol = Protocol::kXebSingle;
    plan.num_qubits = 1;
    plan.depths = depths;
    plan.circuits_per_depth = circuits_per_depth;
    plan.shots = shots;
    plan.noise = LocalNoiseModel{{noise.per_qubit_p[q]}, {}};
    plan.seed = RngStream(seed, rng_salt::kIsolated, static_cast<std::uint64_t>(q)).next_u64();
    plan.m_min = 1;
    plan.bootstrap_resamples = bootstrap_resamples;
    plan.threads = threads;
    ExperimentResult res = run_experiment(plan);
    out.p.push_back(res.primary_fit().params.at(0));
    double sigma = res.primary_param_std_error.empty() ? kNaN : res.primary_param_std_error[0];
    out.std_error.push_back(sigma);
  }
  return out;
}

IrbGateEstimate irb_gate_estimate(const ExperimentResult& reference,
                                  const ExperimentResult& interleaved) {
  IrbGateEstimate est;
  est.p_ref = reference.primary_fit().params.at(0);
  est.p_ref_std_error =
      reference.primary_param_std_error.empty() ? kNaN : reference.primary_param_std_error[0];
  est.p_int = interleaved.primary_fit().params.at(0);
  est.p_int_std_error =
      interleaved.primary_param_std_error.empty() ? kNaN : interleaved.primary_param_std_error[0];
  if (est.p_ref <= 0.0) throw std::invalid_argument("irb_gate_estimate: nonpositive reference");
  est.p_gate = est.p_int / est.p_ref;
  const double rel_int = est.p_int != 0.0 ? est.p_int_std_error / std::abs(est.p_int) : 0.0;
  const double rel_ref = est.p_ref_std_error / est.p_ref;
  est.p_gate_std_error = std::abs(est.p_gate) * std::sqrt(rel_int * rel_int + rel_ref * rel_ref);
  const int d = 1 << reference.plan.num_qubits;
  est.avg_fidelity = depolarizing_to_average_fidelity(std::min(1.0, est.p_gate), d);
  est.avg_fidelity_std_error = (d - 1.0) / d * est.p_gate_std_error;
  return est;
}

InterleavedStudyResult run_interleaved_study(const InterleavedStudyOptions& options) {
  InterleavedStudyResult out;
  const std::vector<int>& iso_depths =
      options.isolated_depths.empty() ? options.depths : options.isolated_depths;

  out.isolated = isolated_single_qubit_fit(options.noise, iso_depths, options.circuits_per_depth,
                                           options.shots, options.seed,
                                           options.bootstrap_resamples, options.threads);

  std::vector<double> errors, errors_sigma;
  std::string source = "isolated-fit";
  if (options.use_simultaneous_errors) {
    ExperimentPlan ref_plan;
    ref_plan.protocol = Protocol::kXebSingle;
    ref_plan.num_qubits = options.num_qubits;
    ref_plan.depths = options.depths;
    ref_plan.circuits_per_depth = options.circuits_per_depth;
    ref_plan.shots = options.shots;
    ref_plan.noise = LocalNoiseModel{options.noise.per_qubit_p, {}};
    ref_plan.seed = RngStream(options.seed, rng_salt::kIsolated, 0xFF).next_u64();
    ref_plan.m_min = 1;
    ref_plan.bootstrap_resamples = options.bootstrap_resamples;
    ref_plan.threads = options.threads;
    ExperimentResult ref = run_experiment(ref_plan);
    // Only the error sum enters the leading-order reference parameter, so
    // the f_single fit's qubit-permutation ambiguity is harmless here.
    std::vector<double> p = ref.primary_fit().params;
    for (std::size_t i = 0; i < p.size(); ++i) {
      errors.push_back(1.0 - p[i]);
      errors_sigma.push_back(i < ref.primary_param_std_error.size()
                                 ? ref.primary_param_std_error[i]
                                 : kNaN);
    }
    source = "simultaneous-fit";
    out.simultaneous_reference = std::move(ref);
  } else {
    for (std::size_t i = 0; i < out.isolated.p.size(); ++i) {
      errors.push_back(1.0 - out.isolated.p[i]);
      errors_sigma.push_back(out.isolated.std_error[i]);
    }
  }

  ExperimentPlan int_plan;
  int_plan.protocol = Protocol::kXebInterleaved;
  int_plan.num_qubits = options.num_qubits;
  int_plan.depths = options.depths;
  int_plan.circuits_per_depth = options.circuits_per_depth;
  int_plan.shots = options.shots;
  int_plan.noise = options.noise;
  int_plan.target_gate = options.target_gate;
  int_plan.seed = options.seed;
  int_plan.m_min = options.m_min;
  int_plan.bootstrap_resamples = options.bootstrap_resamples;
  int_plan.threads = options.threads;
  out.interleaved = run_experiment(int_plan);

  const double p_int = out.interleaved.primary_fit().params.at(0);
  const double p_int_sigma = out.interleaved.primary_param_std_error.empty()
                                 ? 0.0
                                 : out.interleaved.primary_param_std_error[0];
  out.interleaved.gate_estimate = interleaved_gate_estimate(
      p_int, p_int_sigma, errors, errors_sigma, 1 << options.num_qubits, source);

  if (options.compare_irb) {
    ExperimentPlan irb_ref = int_plan;
    irb_ref.protocol = Protocol::kIrbClifford;
    irb_ref.target_gate.reset();
    irb_ref.seed = RngStream(options.seed, rng_salt::kIsolated, 0xA0).next_u64();
    ExperimentPlan irb_int = int_plan;
    irb_int.protocol = Protocol::kIrbClifford;
    irb_int.seed = RngStream(options.seed, rng_salt::kIsolated, 0xA1).next_u64();
    out.irb_reference = run_experiment(irb_ref);
    out.irb_interleaved = run_experiment(irb_int);
    out.irb_estimate = irb_gate_estimate(*out.irb_reference, *out.irb_interleaved);
  }

  EnsembleSpec spec;
  spec.kind = ReferenceKind::kClifford;
  spec.factorized = true;
  spec.num_qubits = options.num_qubits;
  spec.interleaved_gate = options.target_gate;
  out.verdict = validate_reference(spec, options.m_min, options.verdict_circuits,
                                   RngStream(options.seed, rng_salt::kEnsemble, 1).next_u64(),
                                   options.threads);
  out.interleaved.verdict = out.verdict;
  return out;
}

}  // namespace xebsim
