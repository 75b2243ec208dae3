#include "contagion/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <initializer_list>
#include <limits>
#include <set>
#include <sstream>

#include "contagion/asymptotics.hpp"
#include "contagion/cascade.hpp"
#include "contagion/configmodel.hpp"
#include "contagion/error.hpp"
#include "contagion/rng.hpp"
#include "contagion/stats.hpp"

namespace contagion {

namespace fs = std::filesystem;

std::string Table::to_csv() const {
  std::ostringstream out;
  for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c].name;
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
    out << '\n';
  }
  return out.str();
}

namespace {

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string num(double v) { return format_double(v); }
std::string num(std::size_t v) { return std::to_string(v); }

void check_keys(const Json& doc, std::initializer_list<const char*> keys, const char* what) {
  if (!doc.is_object()) throw Error("invalid_config", std::string(what) + " must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; })) {
      throw Error("invalid_config", std::string("unknown key '") + key + "' in " + what);
    }
  }
}

template <typename T>
void read(const Json& doc, const char* key, T& target) {
  if (!doc.contains(key)) return;
  try {
    target = doc.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error("invalid_config", std::string("bad value for '") + key + "': " + e.what());
  }
}

double mean_of(const std::vector<std::size_t>& v) {
  double s = 0.0;
  for (auto x : v) s += static_cast<double>(x);
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

FinancialNetwork with_uniform_gamma(const FinancialNetwork& network, double gamma) {
  return network.with_gammas(std::vector<double>(network.size(), gamma));
}

std::vector<std::vector<NodeId>> trial_seed_sets(std::size_t n, double epsilon, std::size_t trials,
                                                 std::uint64_t seed) {
  std::vector<std::vector<NodeId>> sets;
  sets.reserve(trials);
  for (std::size_t t = 0; t < trials; ++t) sets.push_back(choose_seeds(n, epsilon, derive_seed(seed, StreamTag::kTrial, t)));
  return sets;
}

std::vector<Column> sweep_columns(bool with_topology) {
  std::vector<Column> cols;
  if (with_topology) cols.push_back({"topology", "label"});
  for (Column c : {Column{"kind", "label"}, Column{"gamma_min", "ratio"}, Column{"trial", "index"},
                   Column{"seeds", "nodes"}, Column{"defaults", "nodes"}, Column{"sim_ratio", "defaults per seed"},
                   Column{"sim_se", "defaults per seed"}, Column{"resilience", "dimensionless"},
                   Column{"theory_ratio", "defaults per seed"}}) {
    cols.push_back(c);
  }
  return cols;
}

void append_sweep_rows(Table& table, const std::vector<SweepPoint>& points, const std::string& topology) {
  auto prefix = [&](std::vector<std::string> row) {
    if (!topology.empty()) row.insert(row.begin(), topology);
    table.rows.push_back(std::move(row));
  };
  for (const auto& p : points) {
    for (std::size_t t = 0; t < p.defaults.size(); ++t) {
      prefix({"trial", num(p.gamma), num(t), num(p.seeds), num(p.defaults[t]),
              num(static_cast<double>(p.defaults[t]) / static_cast<double>(p.seeds)), "", num(p.theory.resilience()),
              num(p.theory.amplification_ratio())});
    }
    prefix({"summary", num(p.gamma), "", num(p.seeds), num(mean_of(p.defaults)), num(p.mean_ratio), num(p.ratio_se),
            num(p.theory.resilience()), num(p.theory.amplification_ratio())});
  }
}

}  // namespace

Json provenance(const std::string& experiment, const Json& config, std::uint64_t seed, const Table& table,
                const Json& summary) {
  Json cols = Json::array();
  for (const auto& c : table.columns) cols.push_back(Json{{"name", c.name}, {"unit", c.unit}});
  return Json{{"experiment", experiment},   {"config", config},     {"seed", seed},
              {"library_version", kLibraryVersion}, {"columns", cols}, {"summary", summary},
              {"generated_at", utc_timestamp()}};
}

void write_experiment(const fs::path& dir, const std::string& stem, const std::string& experiment,
                      const Json& config, std::uint64_t seed, const Table& table, const Json& summary) {
  write_text_file(dir / (stem + ".csv"), table.to_csv());
  write_text_file(dir / (stem + ".provenance.json"), provenance(experiment, config, seed, table, summary).dump(2) + "\n");
}

Json to_json(const ParetoSpec& spec) {
  return Json{{"tail_exponent", spec.tail_exponent}, {"x_min", spec.x_min}, {"discrete", spec.discrete}};
}

Json to_json(const BlanchardSpec& spec) {
  return Json{{"n", spec.n}, {"out_degree", to_json(spec.out_degree)}, {"alpha", spec.alpha}};
}

Json to_json(const ExposureSpec& spec) {
  return Json{{"weight", to_json(spec.weight)},
              {"equal_weights", spec.equal_weights},
              {"gamma_min", spec.gamma_min},
              {"recovery", spec.recovery},
              {"collapse_parallel", spec.collapse_parallel}};
}

Json to_json(const ClassScenario& scenario) {
  Json classes = Json::array();
  for (const auto& c : scenario.classes) classes.push_back(Json::array({c.out_degree, c.in_degree, c.share}));
  return Json{{"classes", classes},
              {"gamma", scenario.gamma},
              {"recovery", scenario.recovery},
              {"seed_fraction", scenario.seed_fraction}};
}

ParetoSpec pareto_from_json(const Json& doc, ParetoSpec base) {
  check_keys(doc, {"tail_exponent", "x_min", "discrete"}, "pareto spec");
  read(doc, "tail_exponent", base.tail_exponent);
  read(doc, "x_min", base.x_min);
  read(doc, "discrete", base.discrete);
  return base;
}

BlanchardSpec blanchard_from_json(const Json& doc, BlanchardSpec base) {
  check_keys(doc, {"n", "out_degree", "alpha"}, "graph spec");
  read(doc, "n", base.n);
  read(doc, "alpha", base.alpha);
  if (doc.contains("out_degree")) base.out_degree = pareto_from_json(doc["out_degree"], base.out_degree);
  return base;
}

ExposureSpec exposure_from_json(const Json& doc, ExposureSpec base) {
  check_keys(doc, {"weight", "equal_weights", "gamma_min", "recovery", "collapse_parallel"}, "exposure spec");
  if (doc.contains("weight")) base.weight = pareto_from_json(doc["weight"], base.weight);
  read(doc, "equal_weights", base.equal_weights);
  read(doc, "gamma_min", base.gamma_min);
  read(doc, "recovery", base.recovery);
  read(doc, "collapse_parallel", base.collapse_parallel);
  return base;
}

ClassScenario scenario_from_json(const Json& doc, ClassScenario base) {
  check_keys(doc, {"classes", "gamma", "recovery", "seed_fraction"}, "scenario");
  if (doc.contains("classes")) {
    base.classes.clear();
    for (const auto& row : doc["classes"]) {
      if (!row.is_array() || row.size() != 3) throw Error("invalid_config", "scenario classes are [j, k, share]");
      base.classes.push_back({row[0].get<std::uint32_t>(), row[1].get<std::uint32_t>(), row[2].get<double>()});
    }
  }
  read(doc, "gamma", base.gamma);
  read(doc, "recovery", base.recovery);
  read(doc, "seed_fraction", base.seed_fraction);
  return base;
}

ClassScenario preset_scenario(const std::string& name) {
  ClassScenario s;
  s.gamma = 0.4;
  if (name == "connectivity_1") {
    s.classes = {{1, 3, 0.25}, {2, 3, 0.25}, {4, 3, 0.25}, {5, 3, 0.25}};
  } else if (name == "connectivity_2") {
    s.classes = {{1, 2, 2.0 / 3.0}, {4, 2, 1.0 / 3.0}};
  } else if (name == "connectivity_3") {
    s.classes = {{4, 4, 1.0}};
  } else if (name == "two_regular") {
    s.classes = {{2, 2, 1.0}};
  } else {
    throw Error("invalid_argument", "unknown scenario preset '" + name + "'");
  }
  return s;
}

LimitModel scenario_limit_model(const ClassScenario& scenario) {
  if (!(scenario.seed_fraction >= 0.0 && scenario.seed_fraction <= 1.0)) {
    throw Error("invalid_argument", "seed fraction must lie in [0,1]");
  }
  std::vector<ClassDistribution> classes;
  for (const auto& c : scenario.classes) {
    ClassDistribution d{c.out_degree, c.in_degree, c.share, std::vector<double>(c.out_degree + 1, 0.0)};
    const std::uint32_t theta =
        scenario.gamma == 0.0
            ? 0
            : first_overflow(scenario.gamma * c.out_degree, 1.0 - scenario.recovery, c.out_degree,
                             [](std::size_t) { return 1.0; });
    d.threshold[0] += scenario.seed_fraction;
    if (theta <= c.out_degree) d.threshold[theta] += 1.0 - scenario.seed_fraction;
    classes.push_back(std::move(d));
  }
  std::sort(classes.begin(), classes.end(), [](const auto& a, const auto& b) {
    return std::pair(a.out_degree, a.in_degree) < std::pair(b.out_degree, b.in_degree);
  });
  return LimitModel(std::move(classes));
}

std::optional<double> resilience_zero(const FinancialNetwork& network) {
  auto res = [&](double g) { return first_order_measures(with_uniform_gamma(network, g)).resilience(); };
  double lo = 1e-4, hi = 0.999;
  if (res(lo) >= 0.0 || res(hi) < 0.0) return std::nullopt;
  for (int it = 0; it < 60; ++it) {
    const double mid = std::sqrt(lo * hi);
    (res(mid) < 0.0 ? lo : hi) = mid;
  }
  return std::sqrt(lo * hi);
}

std::vector<double> default_gamma_grid(const FinancialNetwork& network, std::size_t points) {
  const auto zero = resilience_zero(network);
  if (!zero) return log_grid(0.01, 0.99, points);
  return log_grid(*zero / 4.0, std::max(0.99, 4.0 * *zero), points);
}

std::vector<SweepPoint> amplification_sweep(const FinancialNetwork& network, std::span<const double> grid,
                                            double epsilon, std::size_t trials, std::uint64_t seed) {
  if (trials == 0) throw Error("invalid_argument", "trials must be >= 1");
  if (grid.empty()) throw Error("invalid_argument", "empty capital-ratio grid");
  const auto sets = trial_seed_sets(network.size(), epsilon, trials, seed);
  std::vector<SweepPoint> out;
  for (double gamma : grid) {
    if (!(gamma > 0.0)) throw Error("invalid_argument", "grid ratios must be positive");
    const auto net = with_uniform_gamma(network, gamma);
    SweepPoint p;
    p.gamma = gamma;
    p.theory = first_order_measures(net);
    p.seeds = sets.front().size();
    p.defaults = cascade_sizes(net, sets);
    if (p.seeds == 0) {
      p.mean_ratio = p.ratio_se = std::numeric_limits<double>::quiet_NaN();
    } else {
      std::vector<double> d(p.defaults.begin(), p.defaults.end());
      const auto s = summarize(d);
      p.mean_ratio = s.mean / static_cast<double>(p.seeds);
      p.ratio_se = s.std_error / static_cast<double>(p.seeds);
    }
    out.push_back(std::move(p));
  }
  return out;
}

FinancialNetwork experiment_network(const BlanchardSpec& graph, const ExposureSpec& exposure,
                                    const std::string& network_file, std::uint64_t seed) {
  if (!network_file.empty()) return load_network(network_file, exposure.recovery);
  const auto edges = blanchard_graph(graph, derive_seed(seed, StreamTag::kGenerator, 0));
  return attach_exposures_and_capital(edges, exposure, derive_seed(seed, StreamTag::kExposures, 0));
}

Json AmplificationConfig::to_json() const {
  return Json{{"graph", contagion::to_json(graph)}, {"exposure", contagion::to_json(exposure)},
              {"network_file", network_file},       {"epsilon", epsilon},
              {"trials", trials},                   {"gamma_grid", gamma_grid},
              {"grid_points", grid_points},         {"seed", seed}};
}

AmplificationConfig AmplificationConfig::from_json(const Json& doc) {
  check_keys(doc, {"graph", "exposure", "network_file", "epsilon", "trials", "gamma_grid", "grid_points", "seed"},
             "amplification config");
  AmplificationConfig c;
  if (doc.contains("graph")) c.graph = blanchard_from_json(doc["graph"], c.graph);
  if (doc.contains("exposure")) c.exposure = exposure_from_json(doc["exposure"], c.exposure);
  read(doc, "network_file", c.network_file);
  read(doc, "epsilon", c.epsilon);
  read(doc, "trials", c.trials);
  read(doc, "gamma_grid", c.gamma_grid);
  read(doc, "grid_points", c.grid_points);
  read(doc, "seed", c.seed);
  return c;
}

AmplificationResult run_amplification_sweep(const AmplificationConfig& config) {
  AmplificationResult result;
  result.table.columns = sweep_columns(false);
  const auto network = experiment_network(config.graph, config.exposure, config.network_file, config.seed);
  if (seed_count(network.size(), config.epsilon) == 0) {
    result.table.rows.push_back({"error", "", "", "0", "", "", "", "", ""});
    result.summary = Json{{"error", "epsilon = 0 leaves no seeds; the amplification ratio is undefined"}};
    return result;
  }
  result.resilience_zero = resilience_zero(network);
  const auto grid = config.gamma_grid.empty() ? default_gamma_grid(network, config.grid_points) : config.gamma_grid;
  result.points = amplification_sweep(network, grid, config.epsilon, config.trials, config.seed);
  append_sweep_rows(result.table, result.points, "");
  result.summary = Json{{"n", network.size()},
                        {"edges", network.edge_count()},
                        {"resilience_zero", result.resilience_zero ? Json(*result.resilience_zero) : Json(nullptr)}};
  return result;
}

Json IndegreeConfig::to_json() const {
  return Json{{"graph", contagion::to_json(graph)}, {"exposure", contagion::to_json(exposure)},
              {"network_file", network_file},       {"nodes", nodes},
              {"top_nodes", top_nodes},             {"random_nodes", random_nodes},
              {"seed", seed}};
}

IndegreeConfig IndegreeConfig::from_json(const Json& doc) {
  check_keys(doc, {"graph", "exposure", "network_file", "nodes", "top_nodes", "random_nodes", "seed"},
             "indegree config");
  IndegreeConfig c;
  if (doc.contains("graph")) c.graph = blanchard_from_json(doc["graph"], c.graph);
  if (doc.contains("exposure")) c.exposure = exposure_from_json(doc["exposure"], c.exposure);
  read(doc, "network_file", c.network_file);
  read(doc, "nodes", c.nodes);
  read(doc, "top_nodes", c.top_nodes);
  read(doc, "random_nodes", c.random_nodes);
  read(doc, "seed", c.seed);
  return c;
}

double single_default_prediction(const FirstOrderMeasures& measures, std::uint32_t d_minus) {
  if (measures.susceptibility >= 1.0) return std::numeric_limits<double>::infinity();
  const double s = measures.susceptibility;
  return 1.0 + static_cast<double>(d_minus) / measures.lambda * s / (1.0 - s);
}

IndegreeResult run_indegree_impact(const IndegreeConfig& config) {
  const auto network = experiment_network(config.graph, config.exposure, config.network_file, config.seed);
  const auto n = network.size();
  std::vector<NodeId> nodes = config.nodes;
  if (nodes.empty()) {
    std::vector<NodeId> order(n);
    for (NodeId i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](NodeId a, NodeId b) { return network.in_degree(a) > network.in_degree(b); });
    std::set<NodeId> chosen(order.begin(), order.begin() + std::min(config.top_nodes, order.size()));
    Stream rng(config.seed, StreamTag::kSample);
    const auto want = std::min(n, chosen.size() + config.random_nodes);
    while (chosen.size() < want) chosen.insert(static_cast<NodeId>(rng.below(n)));
    nodes.assign(chosen.begin(), chosen.end());
  }
  for (NodeId i : nodes) {
    if (i >= n) throw Error("invalid_argument", "node id " + std::to_string(i) + " out of range");
  }
  std::vector<std::vector<NodeId>> sets;
  for (NodeId i : nodes) sets.push_back({i});
  const auto sizes = cascade_sizes(network, sets);
  const auto fo = first_order_measures(network);

  IndegreeResult result;
  result.table.columns = {{"node", "id"}, {"d_plus", "links"}, {"d_minus", "links"}, {"defaults", "nodes"},
                          {"prediction", "nodes"}};
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    const NodeId i = nodes[a];
    result.table.rows.push_back({num(std::size_t{i}), num(std::size_t{network.out_degree(i)}),
                                 num(std::size_t{network.in_degree(i)}), num(sizes[a]),
                                 num(single_default_prediction(fo, network.in_degree(i)))});
  }
  result.summary = Json{{"n", n}, {"resilience", fo.resilience()}, {"lambda", fo.lambda}};
  return result;
}

Json TopologyConfig::to_json() const {
  return Json{{"graph", contagion::to_json(graph)}, {"exposure", contagion::to_json(exposure)},
              {"er_edge_prob", er_edge_prob},       {"epsilon", epsilon},
              {"trials", trials},                   {"gamma_grid", gamma_grid},
              {"grid_points", grid_points},         {"seed", seed}};
}

TopologyConfig TopologyConfig::from_json(const Json& doc) {
  check_keys(doc, {"graph", "exposure", "er_edge_prob", "epsilon", "trials", "gamma_grid", "grid_points", "seed"},
             "topology config");
  TopologyConfig c;
  if (doc.contains("graph")) c.graph = blanchard_from_json(doc["graph"], c.graph);
  if (doc.contains("exposure")) c.exposure = exposure_from_json(doc["exposure"], c.exposure);
  read(doc, "er_edge_prob", c.er_edge_prob);
  read(doc, "epsilon", c.epsilon);
  read(doc, "trials", c.trials);
  read(doc, "gamma_grid", c.gamma_grid);
  read(doc, "grid_points", c.grid_points);
  read(doc, "seed", c.seed);
  return c;
}

TopologyResult run_topology_compare(const TopologyConfig& config) {
  const auto sf_edges = blanchard_graph(config.graph, derive_seed(config.seed, StreamTag::kGenerator, 0));
  const auto weight_seed = derive_seed(config.seed, StreamTag::kExposures, 0);
  auto pareto = config.exposure;
  pareto.equal_weights = false;
  auto equal = config.exposure;
  equal.equal_weights = true;
  const auto sf = attach_exposures_and_capital(sf_edges, pareto, weight_seed);
  const auto sf_equal = attach_exposures_and_capital(sf_edges, equal, weight_seed);
  const auto n = sf.size();
  const double p = config.er_edge_prob > 0.0
                       ? config.er_edge_prob
                       : static_cast<double>(sf.edge_count()) / (static_cast<double>(n) * static_cast<double>(n - 1));
  const auto er_edges = erdos_renyi_directed(n, p, derive_seed(config.seed, StreamTag::kGenerator, 1));
  const auto er = attach_exposures_and_capital(er_edges, equal, weight_seed);

  TopologyResult result;
  const double reference = static_cast<double>(sf.edge_count()) / static_cast<double>(n);
  const std::vector<std::pair<std::string, const FinancialNetwork*>> nets{
      {"scale_free", &sf}, {"scale_free_equal", &sf_equal}, {"erdos_renyi", &er}};
  for (const auto& [name, net] : nets) {
    const double mean = static_cast<double>(net->edge_count()) / static_cast<double>(n);
    if (std::abs(mean / reference - 1.0) > 0.05) {
      throw Error("mean_degree_mismatch", name + " mean degree " + format_double(mean) + " vs " +
                                              format_double(reference) + " (more than 5% apart)");
    }
  }
  if (seed_count(n, config.epsilon) == 0) throw Error("invalid_argument", "epsilon leaves no seeds");
  result.grid = config.gamma_grid.empty() ? default_gamma_grid(sf, config.grid_points) : config.gamma_grid;
  result.table.columns = sweep_columns(true);
  Json degrees = Json::object();
  for (const auto& [name, net] : nets) {
    TopologyCurve curve;
    curve.name = name;
    curve.mean_degree = static_cast<double>(net->edge_count()) / static_cast<double>(n);
    curve.points = amplification_sweep(*net, result.grid, config.epsilon, config.trials, config.seed);
    append_sweep_rows(result.table, curve.points, name);
    degrees[name] = curve.mean_degree;
    result.curves.push_back(std::move(curve));
  }
  result.summary = Json{{"n", n}, {"er_edge_prob", p}, {"mean_degree", degrees}};
  return result;
}

Json ConvergenceConfig::to_json() const {
  return Json{{"scenario", contagion::to_json(scenario)}, {"sizes", sizes}, {"trials", trials}, {"seed", seed}};
}

ConvergenceConfig ConvergenceConfig::from_json(const Json& doc) {
  check_keys(doc, {"scenario", "sizes", "trials", "seed"}, "convergence config");
  ConvergenceConfig c;
  if (doc.contains("scenario")) c.scenario = scenario_from_json(doc["scenario"], c.scenario);
  read(doc, "sizes", c.sizes);
  read(doc, "trials", c.trials);
  read(doc, "seed", c.seed);
  return c;
}

ConvergenceResult run_convergence_study(const ConvergenceConfig& config) {
  if (config.trials == 0) throw Error("invalid_argument", "trials must be >= 1");
  if (config.sizes.empty()) throw Error("invalid_argument", "empty size grid");
  const auto model = scenario_limit_model(config.scenario);
  const double g = asymptotic_fraction(model).fraction;
  ConvergenceResult result;
  result.table.columns = {{"n", "nodes"}, {"trial", "index"}, {"alpha", "fraction"}, {"g", "fraction"},
                          {"sup_dev", "fraction"}};
  Json levels = Json::array();
  for (std::size_t n : config.sizes) {
    ConvergenceLevel level;
    level.n = n;
    level.g = g;
    level.alpha.resize(config.trials);
    level.sup_dev.resize(config.trials);
    const auto size_seed = derive_seed(config.seed, StreamTag::kTrial, n);
    const auto count = static_cast<std::ptrdiff_t>(config.trials);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t t = 0; t < count; ++t) {
      const auto s = derive_seed(size_seed, StreamTag::kTrial, static_cast<std::uint64_t>(t));
      const auto net = realize_scenario(config.scenario, n, s);
      level.alpha[t] = run_cascade(net).fraction;
      const auto thresholds = assign_thresholds(net, s);
      const auto traj = markov_trajectory(net.degrees(), thresholds, s);
      level.sup_dev[t] = sup_deviation(traj, model);
    }
    const auto s = summarize(level.alpha);
    level.mean_alpha = s.mean;
    level.alpha_se = s.std_error;
    level.deviation = std::abs(s.mean - g);
    level.median_sup_dev = median(level.sup_dev);
    for (std::size_t t = 0; t < config.trials; ++t) {
      result.table.rows.push_back({num(n), num(t), num(level.alpha[t]), num(g), num(level.sup_dev[t])});
    }
    levels.push_back(Json{{"n", n},
                          {"mean_alpha", level.mean_alpha},
                          {"alpha_se", level.alpha_se},
                          {"deviation", level.deviation},
                          {"median_sup_dev", level.median_sup_dev}});
    result.levels.push_back(std::move(level));
  }
  result.summary = Json{{"g", g}, {"levels", levels}};
  return result;
}

}  // namespace contagion
