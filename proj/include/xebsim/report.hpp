#ifndef XEBSIM_REPORT_HPP_
#define XEBSIM_REPORT_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "xebsim/protocol.hpp"

namespace xebsim {

using Json = nlohmann::ordered_json;

// Formula/version identifiers recorded in every report.
namespace version {
inline constexpr char kTool[] = "xebsim 0.1.0";
inline constexpr char kXebEstimator[] = "xeb-least-squares/1";
inline constexpr char kRefinedEstimator[] = "refined-interleaved-leading-order/1";
inline constexpr char kNaiveEstimator[] = "naive-interleaved-additive/1";
inline constexpr char kFitEngine[] = "damped-gauss-newton/1";
inline constexpr char kBootstrap[] = "circuit-resample/1";
}  // namespace version

std::string format_double(double v);  // round-trip-exact formatting

Json decay_fit_json(const DecayFit& fit, const std::vector<double>& param_std_error = {});
Json fidelity_curve_json(const std::vector<FidelityPoint>& curve);
Json gate_estimate_json(const GateFidelityEstimate& est);
Json irb_estimate_json(const IrbGateEstimate& est);
Json verdict_json(const DistributionVerdict& verdict);
Json experiment_result_json(const ExperimentResult& result);

// Report skeleton with run metadata (seed, config hash, versions, timestamp).
Json make_report_header(const std::string& command, std::uint64_t seed,
                        std::uint64_t config_hash);

// Curve table with per-depth model predictions. Columns:
// depth,fidelity,stderr,model_prediction_f_single,model_prediction_exponential,
// model_prediction_additive. Missing predictions are empty fields.
std::string curve_table_csv(const ExperimentResult& result);
Json curve_table_json(const ExperimentResult& result);

// (P_x, cdf) tables.
std::string cdf_table_csv(const std::vector<std::pair<double, double>>& rows);
std::vector<std::pair<double, double>> empirical_cdf(const ProbabilitySample& sample);

void write_text_file(const std::string& path, const std::string& content);

// --- external data ingestion (cmd_fit) -------------------------------------

// Schema (a): fidelity points. Header depth,fidelity[,stderr]; extra columns
// (e.g. model predictions from our own curve files) are ignored.
std::vector<FidelityPoint> read_fidelity_points_csv(const std::string& path);

// Schema (b): per-circuit bitstring counts (depth,circuit,bitstring,count)
// plus a sibling ideal-probability file (depth,circuit,bitstring,ideal_prob).
// Returns records grouped by depth, depths ascending.
struct CountsData {
  std::vector<int> depths;
  std::vector<std::vector<CircuitRecord>> records_by_depth;
  int num_qubits = 0;
};
CountsData read_counts_csv(const std::string& counts_path, const std::string& ideal_path);

// True when the file's header matches the counts schema.
bool looks_like_counts_file(const std::string& path);

}  // namespace xebsim

#endif  // XEBSIM_REPORT_HPP_
