#include "xebsim/report.hpp"

#include <algorithm>
#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "xebsim/errors.hpp"

namespace xebsim {

namespace {

Json number_or_null(double v) {
  if (std::isfinite(v)) return Json(v);
  return Json(nullptr);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    // trim spaces and a trailing \r
    std::size_t a = field.find_first_not_of(" \t\r");
    std::size_t b = field.find_last_not_of(" \t\r");
    out.push_back(a == std::string::npos ? "" : field.substr(a, b - a + 1));
  }
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

}  // namespace

std::string format_double(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Json decay_fit_json(const DecayFit& fit, const std::vector<double>& param_std_error) {
  Json j;
  j["model"] = decay_model_name(fit.model);
  j["params"] = fit.params;
  if (!param_std_error.empty()) {
    Json sigma = Json::array();
    for (double s : param_std_error) sigma.push_back(number_or_null(s));
    j["param_stderr"] = sigma;
    j["uncertainty_method"] = "bootstrap";
  } else {
    Json sigma = Json::array();
    for (int i = 0; i < fit.num_params(); ++i) sigma.push_back(number_or_null(fit.param_std_error(i)));
    j["param_stderr"] = sigma;
    j["uncertainty_method"] = "fit-covariance";
  }
  Json cov = Json::array();
  for (int i = 0; i < fit.covariance.rows(); ++i) {
    Json row = Json::array();
    for (int k = 0; k < fit.covariance.cols(); ++k) row.push_back(number_or_null(fit.covariance(i, k)));
    cov.push_back(row);
  }
  j["covariance"] = cov;
  j["residual_norm"] = fit.residual_norm;
  j["weighted"] = fit.weighted;
  j["depths_used"] = fit.depths_used;
  j["iterations"] = fit.iterations;
  return j;
}

Json fidelity_curve_json(const std::vector<FidelityPoint>& curve) {
  Json arr = Json::array();
  for (const FidelityPoint& pt : curve) {
    Json j;
    j["depth"] = pt.depth;
    j["fidelity"] = pt.fidelity;
    j["stderr"] = number_or_null(pt.std_error);
    j["num_circuits"] = pt.num_circuits;
    arr.push_back(j);
  }
  return arr;
}

Json gate_estimate_json(const GateFidelityEstimate& est) {
  Json j;
  j["p_int"] = est.p_int;
  j["p_int_stderr"] = number_or_null(est.p_int_std_error);
  j["refined_p"] = est.refined_p;
  j["refined_p_stderr"] = number_or_null(est.refined_std_error);
  j["naive_p"] = est.naive_p;
  j["naive_p_stderr"] = number_or_null(est.naive_std_error);
  j["refined_avg_fidelity"] = est.refined_avg_fidelity;
  j["refined_avg_fidelity_stderr"] = number_or_null(est.refined_avg_std_error);
  j["naive_avg_fidelity"] = est.naive_avg_fidelity;
  j["naive_avg_fidelity_stderr"] = number_or_null(est.naive_avg_std_error);
  j["gate_dim"] = est.gate_dim;
  j["reference_errors"] = est.errors_used;
  Json sig = Json::array();
  for (double s : est.errors_std_error) sig.push_back(number_or_null(s));
  j["reference_errors_stderr"] = sig;
  j["reference_errors_source"] = est.errors_source;
  j["uncertainty_method"] = "bootstrap quadrature";
  j["refined_estimator"] = version::kRefinedEstimator;
  j["naive_estimator"] = version::kNaiveEstimator;
  return j;
}

Json irb_estimate_json(const IrbGateEstimate& est) {
  Json j;
  j["p_ref"] = est.p_ref;
  j["p_ref_stderr"] = number_or_null(est.p_ref_std_error);
  j["p_int"] = est.p_int;
  j["p_int_stderr"] = number_or_null(est.p_int_std_error);
  j["p_gate"] = est.p_gate;
  j["p_gate_stderr"] = number_or_null(est.p_gate_std_error);
  j["avg_fidelity"] = est.avg_fidelity;
  j["avg_fidelity_stderr"] = number_or_null(est.avg_fidelity_std_error);
  j["uncertainty_method"] = "bootstrap quadrature";
  return j;
}

Json verdict_json(const DistributionVerdict& verdict) {
  Json j;
  j["ks_to_porter_thomas"] = verdict.ks_to_porter_thomas;
  j["ks_to_factorized"] = verdict.ks_to_factorized;
  j["ks_to_clifford_step"] = verdict.ks_to_clifford_step;
  j["verdict"] = verdict_name(verdict.verdict);
  j["ks_threshold"] = verdict.threshold;
  j["tv_threshold"] = verdict.tv_threshold;
  j["threshold_rule"] =
      "99th-percentile 1.63/sqrt(n): n = pooled values for KS against continuous "
      "references, n = circuits for TV against discrete supports (pooled values of "
      "one Clifford state are fully correlated)";
  j["sample_size"] = verdict.sample_size;
  j["num_circuits"] = verdict.num_circuits;
  return j;
}

Json experiment_result_json(const ExperimentResult& result) {
  Json j;
  j["protocol"] = protocol_name(result.plan.protocol);
  j["num_qubits"] = result.plan.num_qubits;
  j["depths"] = result.plan.depths;
  j["circuits_per_depth"] = result.plan.circuits_per_depth;
  j["shots"] = result.plan.shots;
  j["seed"] = result.plan.seed;
  j["m_min"] = result.plan.m_min;
  j["noise"] = Json{{"per_qubit_p", result.plan.noise.per_qubit_p}};
  if (result.plan.noise.interleaved_gate_p) {
    j["noise"]["interleaved_gate_p"] = *result.plan.noise.interleaved_gate_p;
  }
  j["curve"] = fidelity_curve_json(result.curve);
  j["curve_uncertainty_method"] =
      std::string("bootstrap (") + std::to_string(result.plan.bootstrap_resamples) + " resamples)";
  Json fits = Json::array();
  for (const DecayFit& fit : result.fits) {
    fits.push_back(decay_fit_json(
        fit, fit.model == result.primary_model ? result.primary_param_std_error
                                               : std::vector<double>{}));
  }
  j["fits"] = fits;
  j["fit_weighting"] =
      "weighted least squares, weights 1/stderr^2 when all depths carry bootstrap "
      "stderr, uniform otherwise";
  if (result.gate_estimate) j["gate_estimate"] = gate_estimate_json(*result.gate_estimate);
  if (result.verdict) j["randomization_verdict"] = verdict_json(*result.verdict);
  return j;
}

Json make_report_header(const std::string& command, std::uint64_t seed,
                        std::uint64_t config_hash) {
  Json j;
  j["tool"] = version::kTool;
  j["command"] = command;
  j["seed"] = seed;
  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016" PRIx64, config_hash);
  j["config_hash"] = hash;
  const auto now = std::chrono::system_clock::now();
  j["timestamp_unix"] = std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
  j["estimators"] = Json{{"xeb", version::kXebEstimator},
                         {"refined", version::kRefinedEstimator},
                         {"naive", version::kNaiveEstimator},
                         {"fit", version::kFitEngine},
                         {"bootstrap", version::kBootstrap}};
  return j;
}

namespace {

std::optional<double> model_prediction(const ExperimentResult& result, DecayModel model,
                                       int depth) {
  for (const DecayFit& fit : result.fits) {
    if (fit.model != model) continue;
    FitOptions opts;
    opts.num_qubits = result.plan.num_qubits;
    opts.shared_p = false;
    return decay_model_value(model, fit.params, depth, opts);
  }
  return std::nullopt;
}

}  // namespace

std::string curve_table_csv(const ExperimentResult& result) {
  std::ostringstream out;
  out << "depth,fidelity,stderr,model_prediction_f_single,model_prediction_exponential,"
         "model_prediction_additive\n";
  for (const FidelityPoint& pt : result.curve) {
    out << pt.depth << ',' << format_double(pt.fidelity) << ','
        << (std::isfinite(pt.std_error) ? format_double(pt.std_error) : "") << ',';
    auto fs = model_prediction(result, DecayModel::kFSingle, pt.depth);
    auto fe = model_prediction(result, DecayModel::kExponential, pt.depth);
    auto fa = model_prediction(result, DecayModel::kAdditive, pt.depth);
    out << (fs ? format_double(*fs) : "") << ',' << (fe ? format_double(*fe) : "") << ','
        << (fa ? format_double(*fa) : "") << '\n';
  }
  return out.str();
}

Json curve_table_json(const ExperimentResult& result) {
  Json rows = Json::array();
  for (const FidelityPoint& pt : result.curve) {
    Json row;
    row["depth"] = pt.depth;
    row["fidelity"] = pt.fidelity;
    row["stderr"] = number_or_null(pt.std_error);
    auto fs = model_prediction(result, DecayModel::kFSingle, pt.depth);
    auto fe = model_prediction(result, DecayModel::kExponential, pt.depth);
    auto fa = model_prediction(result, DecayModel::kAdditive, pt.depth);
    row["model_prediction_f_single"] = fs ? Json(*fs) : Json(nullptr);
    row["model_prediction_exponential"] = fe ? Json(*fe) : Json(nullptr);
    row["model_prediction_additive"] = fa ? Json(*fa) : Json(nullptr);
    rows.push_back(row);
  }
  return rows;
}

std::string cdf_table_csv(const std::vector<std::pair<double, double>>& rows) {
  std::ostringstream out;
  out << "P_x,cdf\n";
  for (const auto& [p, c] : rows) out << format_double(p) << ',' << format_double(c) << '\n';
  return out.str();
}

std::vector<std::pair<double, double>> empirical_cdf(const ProbabilitySample& sample) {
  std::vector<double> sorted = sample.values;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::pair<double, double>> rows;
  rows.reserve(sorted.size());
  const double n = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    rows.emplace_back(sorted[i], (i + 1) / n);
  }
  return rows;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
  if (!out.good()) throw std::runtime_error("write failed: " + path);
}

std::vector<FidelityPoint> read_fidelity_points_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open data file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(path, 1, "empty file");
  std::vector<std::string> header = split_csv_line(line);
  int col_depth = -1, col_f = -1, col_sigma = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "depth") col_depth = static_cast<int>(i);
    if (header[i] == "fidelity") col_f = static_cast<int>(i);
    if (header[i] == "stderr") col_sigma = static_cast<int>(i);
  }
  if (col_depth < 0 || col_f < 0) {
    throw ConfigError(path, 1, "header must contain 'depth' and 'fidelity'");
  }
  std::vector<FidelityPoint> points;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    std::vector<std::string> fields = split_csv_line(line);
    if (static_cast<int>(fields.size()) <= std::max(col_depth, col_f)) {
      throw ConfigError(path, lineno, "too few columns");
    }
    FidelityPoint pt;
    try {
      pt.depth = std::stoi(fields[col_depth]);
      pt.fidelity = std::stod(fields[col_f]);
      if (col_sigma >= 0 && col_sigma < static_cast<int>(fields.size()) &&
          !fields[col_sigma].empty()) {
        pt.std_error = std::stod(fields[col_sigma]);
      }
    } catch (const std::exception&) {
      throw ConfigError(path, lineno, "malformed row");
    }
    pt.num_circuits = 1;
    points.push_back(pt);
  }
  if (points.empty()) throw ConfigError(path, lineno, "no data rows");
  return points;
}

bool looks_like_counts_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) return false;
  std::string line;
  if (!std::getline(in, line)) return false;
  std::vector<std::string> header = split_csv_line(line);
  return std::find(header.begin(), header.end(), "bitstring") != header.end();
}

namespace {

struct RawCounts {
  // (depth, circuit) -> bitstring index -> value
  std::map<std::pair<int, int>, std::map<std::string, double>> table;
  int bit_width = -1;
};

RawCounts read_bitstring_table(const std::string& path, const std::string& value_column) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open data file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(path, 1, "empty file");
  std::vector<std::string> header = split_csv_line(line);
  int col_depth = -1, col_circuit = -1, col_bits = -1, col_value = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "depth") col_depth = static_cast<int>(i);
    if (header[i] == "circuit") col_circuit = static_cast<int>(i);
    if (header[i] == "bitstring") col_bits = static_cast<int>(i);
    if (header[i] == value_column) col_value = static_cast<int>(i);
  }
  if (col_depth < 0 || col_circuit < 0 || col_bits < 0 || col_value < 0) {
    throw ConfigError(path, 1,
                      "header must contain depth,circuit,bitstring," + value_column);
  }
  RawCounts raw;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    std::vector<std::string> fields = split_csv_line(line);
    int need = std::max(std::max(col_depth, col_circuit), std::max(col_bits, col_value));
    if (static_cast<int>(fields.size()) <= need) throw ConfigError(path, lineno, "too few columns");
    const std::string& bits = fields[col_bits];
    for (char c : bits) {
      if (c != '0' && c != '1') throw ConfigError(path, lineno, "bitstring must be binary");
    }
    if (raw.bit_width < 0) raw.bit_width = static_cast<int>(bits.size());
    if (static_cast<int>(bits.size()) != raw.bit_width) {
      throw ConfigError(path, lineno, "mixed bitstring widths (mixed qubit counts)");
    }
    try {
      int depth = std::stoi(fields[col_depth]);
      int circuit = std::stoi(fields[col_circuit]);
      double value = std::stod(fields[col_value]);
      auto& row = raw.table[{depth, circuit}];
      if (row.count(bits)) throw ConfigError(path, lineno, "duplicate bitstring entry");
      row[bits] = value;
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError(path, lineno, "malformed row");
    }
  }
  if (raw.table.empty()) throw ConfigError(path, lineno, "no data rows");
  return raw;
}

std::vector<double> to_dense(const std::map<std::string, double>& sparse, int n) {
  std::vector<double> dense(1 << n, 0.0);
  for (const auto& [bits, value] : sparse) {
    int idx = 0;
    for (char c : bits) idx = (idx << 1) | (c == '1');
    dense[idx] = value;
  }
  return dense;
}

}  // namespace

CountsData read_counts_csv(const std::string& counts_path, const std::string& ideal_path) {
  RawCounts counts = read_bitstring_table(counts_path, "count");
  RawCounts ideal = read_bitstring_table(ideal_path, "ideal_prob");
  if (counts.bit_width != ideal.bit_width) {
    throw ConfigError(counts_path + ": qubit count differs from " + ideal_path);
  }
  const int n = counts.bit_width;
  CountsData out;
  out.num_qubits = n;
  std::map<int, std::vector<CircuitRecord>> grouped;
  for (const auto& [key, sparse_counts] : counts.table) {
    auto it = ideal.table.find(key);
    if (it == ideal.table.end()) {
      throw ConfigError(ideal_path + ": missing ideal probabilities for depth " +
                        std::to_string(key.first) + " circuit " + std::to_string(key.second));
    }
    std::vector<double> measured = to_frequencies(to_dense(sparse_counts, n));
    std::vector<double> ideal_probs = to_dense(it->second, n);
    grouped[key.first].push_back(make_circuit_record(ideal_probs, measured, key.first));
  }
  for (auto& [depth, records] : grouped) {
    out.depths.push_back(depth);
    out.records_by_depth.push_back(std::move(records));
  }
  return out;
}

}  // namespace xebsim
