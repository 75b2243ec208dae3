#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "contagion/generators.hpp"
#include "contagion/io.hpp"
#include "contagion/limit_model.hpp"
#include "contagion/measures.hpp"

namespace contagion {

inline constexpr const char* kLibraryVersion = "0.1.0";

struct Column {
  std::string name;
  std::string unit;
};

/// CSV table with a header row; cells are preformatted strings.
struct Table {
  std::vector<Column> columns;
  std::vector<std::vector<std::string>> rows;

  std::string to_csv() const;
};

/// Sidecar document: experiment name, config echo, master seed, library
/// version, column units, summary, and a generation timestamp (the only
/// field that changes between identical runs).
Json provenance(const std::string& experiment, const Json& config, std::uint64_t seed, const Table& table,
                const Json& summary);

/// Writes <dir>/<stem>.csv and <dir>/<stem>.provenance.json.
void write_experiment(const std::filesystem::path& dir, const std::string& stem, const std::string& experiment,
                      const Json& config, std::uint64_t seed, const Table& table, const Json& summary);

Json to_json(const ParetoSpec& spec);
Json to_json(const BlanchardSpec& spec);
Json to_json(const ExposureSpec& spec);
Json to_json(const ClassScenario& scenario);
/// Each reader starts from `base` and overrides the keys present; unknown
/// keys raise `Error("invalid_config")`.
ParetoSpec pareto_from_json(const Json& doc, ParetoSpec base = {});
BlanchardSpec blanchard_from_json(const Json& doc, BlanchardSpec base = {});
ExposureSpec exposure_from_json(const Json& doc, ExposureSpec base = {});
ClassScenario scenario_from_json(const Json& doc, ClassScenario base = {});

/// Named equal-weight scenarios with gamma = 0.4 (so p(j,k,1) = 1 exactly for
/// j <= 2): "connectivity_1" {(1,3),(2,3),(4,3),(5,3)} uniform,
/// "connectivity_2" {(1,2): 2/3, (4,2): 1/3}, "connectivity_3" {(4,4)},
/// "two_regular" {(2,2)}. Throws `Error("invalid_argument")` for other names.
ClassScenario preset_scenario(const std::string& name);

/// Limit model of an equal-weight scenario: per class, the deterministic
/// threshold of capital gamma j against unit losses, with the seed fraction
/// moved to theta = 0.
LimitModel scenario_limit_model(const ClassScenario& scenario);

/// Capital ratio where the resilience of `network` (with every ratio set to
/// it) crosses zero, by bisection in log gamma on [1e-4, 0.999]; nullopt
/// without a sign change.
std::optional<double> resilience_zero(const FinancialNetwork& network);

/// `points` log-spaced ratios from zero/4 to max(0.99, 4 zero); [0.01, 0.99]
/// when there is no zero.
std::vector<double> default_gamma_grid(const FinancialNetwork& network, std::size_t points);

struct SweepPoint {
  double gamma = 0.0;
  FirstOrderMeasures theory;
  std::size_t seeds = 0;
  std::vector<std::size_t> defaults;
  /// mean(defaults) / seeds; NaN without seeds.
  double mean_ratio = 0.0;
  double ratio_se = 0.0;
};

/// For each ratio: set every gamma to it, draw `trials` uniform seed sets of
/// size seed_count(n, epsilon) (trial t from derive_seed(seed, kTrial, t), the
/// same sets for every grid point) and run the cascade.
std::vector<SweepPoint> amplification_sweep(const FinancialNetwork& network, std::span<const double> grid,
                                            double epsilon, std::size_t trials, std::uint64_t seed);

struct AmplificationConfig {
  BlanchardSpec graph;
  ExposureSpec exposure;
  /// Load this network instead of generating one.
  std::string network_file;
  double epsilon = 0.001;
  std::size_t trials = 20;
  std::vector<double> gamma_grid;
  std::size_t grid_points = 40;
  std::uint64_t seed = 1;

  Json to_json() const;
  static AmplificationConfig from_json(const Json& doc);
};

struct AmplificationResult {
  std::optional<double> resilience_zero;
  std::vector<SweepPoint> points;
  Table table;
  Json summary;
};

/// Generated network: graph from derive_seed(seed, kGenerator, 0), weights
/// from derive_seed(seed, kExposures, 0).
FinancialNetwork experiment_network(const BlanchardSpec& graph, const ExposureSpec& exposure,
                                    const std::string& network_file, std::uint64_t seed);

AmplificationResult run_amplification_sweep(const AmplificationConfig& config);

struct IndegreeConfig {
  BlanchardSpec graph;
  ExposureSpec exposure{ParetoSpec{2.61, 1.0, false}, false, 0.3, 0.0, true};
  std::string network_file;
  /// Explicit node list; when empty, the `top_nodes` largest in-degrees plus
  /// `random_nodes` uniform picks.
  std::vector<NodeId> nodes;
  std::size_t top_nodes = 10;
  std::size_t random_nodes = 10;
  std::uint64_t seed = 1;

  Json to_json() const;
  static IndegreeConfig from_json(const Json& doc);
};

/// Expected number of defaults after a single node of in-degree d_minus
/// defaults: 1 + (d_minus / lambda) S / (1 - S); +inf when S >= 1.
double single_default_prediction(const FirstOrderMeasures& measures, std::uint32_t d_minus);

struct IndegreeResult {
  Table table;
  Json summary;
};

/// Throws `Error("invalid_argument")` for node ids out of range.
IndegreeResult run_indegree_impact(const IndegreeConfig& config);

struct TopologyConfig {
  BlanchardSpec graph;
  ExposureSpec exposure;
  /// 0: matched to the scale-free edge count.
  double er_edge_prob = 0.0;
  double epsilon = 0.001;
  std::size_t trials = 20;
  std::vector<double> gamma_grid;
  std::size_t grid_points = 40;
  std::uint64_t seed = 1;

  Json to_json() const;
  static TopologyConfig from_json(const Json& doc);
};

struct TopologyCurve {
  std::string name;
  double mean_degree = 0.0;
  std::vector<SweepPoint> points;
};

struct TopologyResult {
  std::vector<double> grid;
  std::vector<TopologyCurve> curves;
  Table table;
  Json summary;
};

/// Curves for "scale_free" (Pareto weights), "scale_free_equal" (same graph,
/// unit weights) and "erdos_renyi" (unit weights). Throws
/// `Error("mean_degree_mismatch")` when a mean degree is off by more than 5%.
TopologyResult run_topology_compare(const TopologyConfig& config);

struct ConvergenceConfig {
  ClassScenario scenario{{{3, 3, 1.0}}, 0.5, 0.0, 0.01};
  std::vector<std::size_t> sizes{1000, 4000, 16000};
  std::size_t trials = 20;
  std::uint64_t seed = 1;

  Json to_json() const;
  static ConvergenceConfig from_json(const Json& doc);
};

struct ConvergenceLevel {
  std::size_t n = 0;
  std::vector<double> alpha;
  std::vector<double> sup_dev;
  double g = 0.0;
  double mean_alpha = 0.0;
  double alpha_se = 0.0;
  /// |mean alpha - g|
  double deviation = 0.0;
  double median_sup_dev = 0.0;
};

struct ConvergenceResult {
  std::vector<ConvergenceLevel> levels;
  Table table;
  Json summary;
};

/// Trial t at size n realizes the scenario from derive_seed(derive_seed(seed,
/// kTrial, n), kTrial, t); the Markov trajectory uses the same seed and the
/// thresholds of that realization.
ConvergenceResult run_convergence_study(const ConvergenceConfig& config);

}  // namespace contagion
