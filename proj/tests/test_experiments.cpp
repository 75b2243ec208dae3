#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "contagion/error.hpp"
#include "contagion/experiments.hpp"
#include "contagion/rng.hpp"
#include "contagion/stats.hpp"

using namespace contagion;
namespace fs = std::filesystem;

namespace {

BlanchardSpec small_graph() {
  BlanchardSpec g;
  g.n = 600;
  return g;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("summary statistics") {
  const std::vector<double> v{1, 2, 3, 4};
  const auto s = summarize(v);
  CHECK(s.mean == 2.5);
  CHECK(s.count == 4);
  CHECK(s.std_error == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
  CHECK(median({3, 1, 2}) == 2.0);
  CHECK(median({4, 1, 2, 3}) == 2.5);
  const auto g = log_grid(0.01, 1.0, 3);
  CHECK(g[1] == doctest::Approx(0.1));
  CHECK(g.back() == 1.0);
  CHECK_THROWS_AS(hill_estimator(std::vector<double>{1, 2, 3}), Error);
}

TEST_CASE("two-sample KS") {
  std::vector<double> a, b, c;
  Stream rng(1, StreamTag::kSample, 0);
  for (int i = 0; i < 400; ++i) {
    a.push_back(rng.uniform());
    b.push_back(rng.uniform());
    c.push_back(0.3 + rng.uniform());
  }
  CHECK(ks_two_sample(a, b).p_value > 0.01);
  CHECK(ks_two_sample(a, c).p_value < 1e-6);
  CHECK(ks_two_sample(a, a).statistic == 0.0);
}

TEST_CASE("config readers") {
  const auto spec = blanchard_from_json(Json::parse(R"({"n": 50, "alpha": 1.2})"));
  CHECK(spec.n == 50);
  CHECK(spec.alpha == 1.2);
  CHECK(spec.out_degree.x_min == 4.0);
  CHECK_THROWS_AS(blanchard_from_json(Json::parse(R"({"nn": 50})")), Error);
  const auto ex = exposure_from_json(to_json(ExposureSpec{{3.0, 2.0, false}, true, 0.2, 0.1, false}));
  CHECK(ex.weight.tail_exponent == 3.0);
  CHECK(ex.equal_weights);
  CHECK(ex.gamma_min == 0.2);
  CHECK(ex.recovery == 0.1);
  CHECK_FALSE(ex.collapse_parallel);
  const auto sc = scenario_from_json(to_json(preset_scenario("connectivity_2")));
  CHECK(sc.classes.size() == 2);
  AmplificationConfig cfg;
  cfg.trials = 3;
  cfg.gamma_grid = {0.1, 0.2};
  const auto back = AmplificationConfig::from_json(cfg.to_json());
  CHECK(back.trials == 3);
  CHECK(back.gamma_grid == cfg.gamma_grid);
}

TEST_CASE("resilience zero and default grid") {
  ExposureSpec ex;
  const auto net = experiment_network(small_graph(), ex, "", 2);
  const auto zero = resilience_zero(net);
  REQUIRE(zero.has_value());
  const auto at = first_order_measures(net.with_gammas(std::vector<double>(net.size(), *zero)));
  CHECK(std::abs(at.resilience()) < 0.02);
  const auto grid = default_gamma_grid(net, 10);
  CHECK(grid.size() == 10);
  CHECK(grid.front() == doctest::Approx(*zero / 4));
  CHECK(std::is_sorted(grid.begin(), grid.end()));
}

TEST_CASE("amplification sweep") {
  AmplificationConfig cfg;
  cfg.graph = small_graph();
  cfg.trials = 4;
  cfg.gamma_grid = {0.3, 0.6};
  cfg.epsilon = 0.01;
  const auto a = run_amplification_sweep(cfg);
  const auto b = run_amplification_sweep(cfg);
  CHECK(a.table.to_csv() == b.table.to_csv());
  REQUIRE(a.points.size() == 2);
  for (const auto& p : a.points) {
    CHECK(p.seeds == 6);
    CHECK(p.defaults.size() == 4);
    for (auto d : p.defaults) CHECK(d >= p.seeds);
  }
  // Higher capital, fewer defaults on the same seed sets.
  for (std::size_t t = 0; t < 4; ++t) CHECK(a.points[1].defaults[t] <= a.points[0].defaults[t]);

  cfg.epsilon = 0.0;
  const auto none = run_amplification_sweep(cfg);
  CHECK(none.table.to_csv().find("error") != std::string::npos);

  const auto dir = fs::temp_directory_path() / "contagion_exp_tests";
  write_experiment(dir, "sweep", "amplification-sweep", cfg.to_json(), cfg.seed, a.table, a.summary);
  CHECK(slurp(dir / "sweep.csv") == a.table.to_csv());
  const auto prov = read_json_file(dir / "sweep.provenance.json");
  CHECK(prov["experiment"] == "amplification-sweep");
  CHECK(prov["library_version"] == kLibraryVersion);
  CHECK(prov.contains("generated_at"));
  CHECK(prov["columns"].size() == a.table.columns.size());
}

TEST_CASE("single default prediction") {
  FirstOrderMeasures fo;
  fo.lambda = 4.0;
  fo.susceptibility = 0.5;
  CHECK(single_default_prediction(fo, 0) == 1.0);
  CHECK(single_default_prediction(fo, 8) == doctest::Approx(3.0));
  fo.susceptibility = 1.0;
  CHECK(std::isinf(single_default_prediction(fo, 8)));

  IndegreeConfig cfg;
  cfg.graph = small_graph();
  cfg.nodes = {0, 1, 2};
  const auto r = run_indegree_impact(cfg);
  CHECK(r.table.rows.size() == 3);
  cfg.nodes = {100000};
  CHECK_THROWS_AS(run_indegree_impact(cfg), Error);
}

TEST_CASE("topology comparison matches mean degrees") {
  TopologyConfig cfg;
  cfg.graph = small_graph();
  cfg.trials = 2;
  cfg.gamma_grid = {0.2, 0.5};
  const auto r = run_topology_compare(cfg);
  REQUIRE(r.curves.size() == 3);
  for (const auto& c : r.curves) {
    CHECK(c.mean_degree == doctest::Approx(r.curves[0].mean_degree).epsilon(0.05));
  }
  cfg.er_edge_prob = 0.5;
  try {
    run_topology_compare(cfg);
    FAIL("expected mismatch");
  } catch (const Error& e) {
    CHECK(e.code() == "mean_degree_mismatch");
  }
}

TEST_CASE("convergence study") {
  ConvergenceConfig cfg;
  cfg.sizes = {500, 1000};
  cfg.trials = 3;
  const auto r = run_convergence_study(cfg);
  REQUIRE(r.levels.size() == 2);
  for (const auto& l : r.levels) {
    CHECK(l.alpha.size() == 3);
    CHECK(l.g == doctest::Approx(0.010314).epsilon(1e-3));
    CHECK(l.deviation == doctest::Approx(std::abs(l.mean_alpha - l.g)));
  }
  CHECK(run_convergence_study(cfg).table.to_csv() == r.table.to_csv());

  cfg.scenario.seed_fraction = 0.0;
  const auto quiet = run_convergence_study(cfg);
  for (const auto& l : quiet.levels) {
    CHECK(l.g == 0.0);
    for (double a : l.alpha) CHECK(a == 0.0);
  }
}
