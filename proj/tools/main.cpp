// Command-line front end: generators, single-network analyses and the
// reproducible experiment runners.
#include <omp.h>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "contagion/asymptotics.hpp"
#include "contagion/cascade.hpp"
#include "contagion/error.hpp"
#include "contagion/experiments.hpp"
#include "contagion/generators.hpp"
#include "contagion/io.hpp"
#include "contagion/percolation.hpp"
#include "contagion/rng.hpp"

namespace fs = std::filesystem;
using namespace contagion;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  int threads = 0;
  std::string config;
  std::string out;
};

Json config_doc(const Globals& g) { return g.config.empty() ? Json::object() : read_json_file(g.config); }

/// Writes to `path`, or stdout when empty.
void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
  } else {
    write_text_file(path, text);
  }
}

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

fs::path out_dir(const Globals& g) { return g.out.empty() ? fs::path(".") : fs::path(g.out); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Default contagion on weighted directed networks"};
  app.fallthrough();
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "master seed");
  app.add_option("--threads", g.threads, "OpenMP threads (0: runtime default)");
  app.add_option("--config", g.config, "JSON config file");
  app.add_option("--out", g.out, "output file or directory");

  // generate
  auto* gen = app.add_subcommand("generate", "generate a network");
  std::string model = "blanchard";
  std::size_t n = 10000;
  double gamma_plus = 2.19, alpha = 2.19 / 1.98, d_min = 4.0, exposure_tail = 2.61, gamma_min = 0.1;
  double recovery = 0.0, edge_prob = -1.0, seed_fraction = 0.0;
  bool equal_weights = false, keep_parallel = false;
  gen->add_option("--model", model, "blanchard | er")->check(CLI::IsMember({"blanchard", "er"}));
  gen->add_option("--n", n, "number of nodes");
  gen->add_option("--gamma-plus", gamma_plus, "out-degree tail exponent");
  gen->add_option("--alpha", alpha, "attachment exponent");
  gen->add_option("--d-min", d_min, "minimum out-degree");
  gen->add_option("--exposure-tail", exposure_tail, "exposure tail exponent");
  gen->add_option("--gamma-min", gamma_min, "capital ratio of every node");
  gen->add_option("--recovery", recovery, "recovery rate R");
  gen->add_option("--edge-prob", edge_prob, "Erdos-Renyi edge probability (default: mean degree 5)");
  gen->add_option("--seed-fraction", seed_fraction, "fraction of nodes turned into fundamental defaults");
  gen->add_flag("--equal-weights", equal_weights, "unit exposures");
  gen->add_flag("--keep-parallel", keep_parallel, "do not merge parallel edges");

  // cascade
  auto* cas = app.add_subcommand("cascade", "run the default cascade on a network");
  std::string network_file;
  std::vector<NodeId> extra_seeds;
  double csv_recovery = 0.0;
  cas->add_option("--network", network_file, "network JSON or CSV directory")->required();
  cas->add_option("--seeds", extra_seeds, "additional fundamental defaults");
  cas->add_option("--csv-recovery", csv_recovery, "recovery rate for CSV input");

  // fixed-point / resilience / ode
  auto* fp = app.add_subcommand("fixed-point", "solve the limit fixed point of a model");
  std::string model_file;
  fp->add_option("--model", model_file, "LimitModel JSON")->required();
  auto* res = app.add_subcommand("resilience", "resilience of a model or a network");
  res->add_option("--model", model_file, "LimitModel JSON");
  res->add_option("--network", network_file, "network JSON or CSV directory");
  auto* ode = app.add_subcommand("ode", "closed-form solution of the counter ODE");
  std::size_t tau_grid = 100;
  ode->add_option("--model", model_file, "LimitModel JSON")->required();
  ode->add_option("--tau-grid", tau_grid, "number of tau points in [0, lambda)");

  // skeleton-scc
  auto* scc = app.add_subcommand("skeleton-scc", "largest SCC of the contagious-link skeleton");
  std::string preset;
  std::size_t scc_n = 10000, trials = 20;
  scc->add_option("--network", network_file, "network JSON or CSV directory");
  scc->add_option("--preset", preset, "scenario preset for the experiment variant");
  scc->add_option("--n", scc_n, "network size for the experiment variant");
  scc->add_option("--trials", trials, "trials for the experiment variant");

  // experiments
  auto* amp = app.add_subcommand("amplification-sweep", "amplification ratio across capital ratios");
  auto* ind = app.add_subcommand("indegree-impact", "single-node default impact");
  auto* top = app.add_subcommand("topology-compare", "scale-free vs equal weights vs Erdos-Renyi");
  auto* conv = app.add_subcommand("convergence-study", "finite-n convergence of the default fraction");
  std::optional<std::size_t> trials_override;
  std::optional<double> epsilon_override;
  for (auto* sub : {amp, top, conv}) sub->add_option("--trials", trials_override, "trials per grid point");
  for (auto* sub : {amp, top}) sub->add_option("--epsilon", epsilon_override, "seed fraction");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << Json{{"error", "usage"}, {"message", e.what()}}.dump() << '\n';
    return 1;
  }

  try {
    if (g.threads > 0) omp_set_num_threads(g.threads);

    if (gen->parsed()) {
      EdgeList edges;
      Json spec{{"model", model}, {"n", n}, {"seed", g.seed}};
      if (model == "blanchard") {
        BlanchardSpec b{n, ParetoSpec{gamma_plus, d_min, true}, alpha};
        edges = blanchard_graph(b, derive_seed(g.seed, StreamTag::kGenerator, 0));
        spec["graph"] = to_json(b);
      } else {
        const double p = edge_prob >= 0.0 ? edge_prob : (n > 1 ? 5.0 / static_cast<double>(n - 1) : 0.0);
        edges = erdos_renyi_directed(n, p, derive_seed(g.seed, StreamTag::kGenerator, 0));
        spec["edge_prob"] = p;
      }
      ExposureSpec x{ParetoSpec{exposure_tail, 1.0, false}, equal_weights, gamma_min, recovery, !keep_parallel};
      auto net = attach_exposures_and_capital(edges, x, derive_seed(g.seed, StreamTag::kExposures, 0));
      if (seed_fraction > 0.0) net = seed_defaults(net, seed_fraction, g.seed);
      spec["exposure"] = to_json(x);
      spec["seed_fraction"] = seed_fraction;
      spec["library_version"] = kLibraryVersion;
      auto doc = network_to_json(net);
      doc["provenance"] = spec;
      emit(g.out, doc.dump() + "\n");
    } else if (cas->parsed()) {
      const auto net = load_network(network_file, csv_recovery);
      emit(g.out, cascade_to_json(run_cascade(net, extra_seeds)).dump() + "\n");
    } else if (fp->parsed()) {
      const auto lm = load_model(model_file);
      const auto af = asymptotic_fraction(lm);
      const double s = susceptibility(lm);
      Json doc{{"pi_star", af.fixed_point.pi_star},
               {"stable", af.fixed_point.stable},
               {"regime", to_string(af.regime)},
               {"fraction", af.fraction},
               {"derivative", af.fixed_point.derivative},
               {"converged", af.fixed_point.converged},
               {"iterations", af.fixed_point.iterations},
               {"resilience", 1.0 - s},
               {"amplification_ratio", s < 1.0 ? Json(amplification(lm, 1.0).ratio) : Json(nullptr)}};
      emit(g.out, doc.dump(2) + "\n");
    } else if (res->parsed()) {
      Json doc;
      if (!model_file.empty()) {
        const auto lm = load_model(model_file);
        doc = Json{{"resilience", resilience(lm)}, {"susceptibility", susceptibility(lm)}};
      } else if (!network_file.empty()) {
        const auto fo = first_order_measures(load_network(network_file));
        doc = Json{{"resilience", fo.resilience()},
                   {"susceptibility", fo.susceptibility},
                   {"amplification_ratio", number_or_null(fo.amplification_ratio())}};
      } else {
        throw Error("usage", "resilience needs --model or --network");
      }
      emit(g.out, doc.dump(2) + "\n");
    } else if (ode->parsed()) {
      if (tau_grid < 1) throw Error("invalid_argument", "--tau-grid must be >= 1");
      const auto lm = load_model(model_file);
      std::ostringstream csv;
      csv << "tau";
      for (const auto& c : lm.classes()) {
        for (std::uint32_t th = 1; th <= c.out_degree; ++th) {
          for (std::uint32_t l = 0; l < th; ++l) csv << ",s_" << c.out_degree << '_' << c.in_degree << '_' << th << '_' << l;
        }
      }
      for (const auto& c : lm.classes()) {
        for (std::uint32_t th = 0; th <= c.out_degree; ++th) csv << ",delta_" << c.out_degree << '_' << c.in_degree << '_' << th;
      }
      csv << ",delta_minus,delta\n";
      for (std::size_t i = 0; i < tau_grid; ++i) {
        const double tau = lm.lambda() * static_cast<double>(i) / static_cast<double>(tau_grid);
        csv << format_double(tau);
        for (const auto& c : lm.classes()) {
          for (std::uint32_t th = 1; th <= c.out_degree; ++th) {
            for (std::uint32_t l = 0; l < th; ++l) {
              csv << ',' << format_double(ode_solution(lm, c.out_degree, c.in_degree, th, l, tau));
            }
          }
        }
        const auto d = delta_functions(lm, tau);
        for (const auto& e : d.per_class) csv << ',' << format_double(e.value);
        csv << ',' << format_double(d.delta_minus) << ',' << format_double(d.delta) << '\n';
      }
      emit(g.out, csv.str());
    } else if (scc->parsed()) {
      if (!network_file.empty()) {
        const auto net = load_network(network_file);
        const auto r = largest_scc(contagious_skeleton(net));
        Json doc{{"scc_size", r.nodes.size()},
                 {"fraction", r.fraction},
                 {"condition_value", first_order_measures(net).susceptibility}};
        emit(g.out, doc.dump(2) + "\n");
      } else {
        auto scenario = preset.empty() ? ClassScenario{} : preset_scenario(preset);
        if (!g.config.empty()) scenario = scenario_from_json(config_doc(g), scenario);
        const auto rows = skeleton_scc_experiment(scenario, scc_n, trials, g.seed);
        Table t;
        t.columns = {{"trial", "index"}, {"fraction", "fraction"}, {"condition", "dimensionless"},
                     {"rewired_fraction", "fraction"}};
        for (std::size_t i = 0; i < rows.size(); ++i) {
          t.rows.push_back({std::to_string(i), format_double(rows[i].direct), format_double(rows[i].condition),
                            format_double(rows[i].rewired)});
        }
        const Json cfg{{"scenario", to_json(scenario)}, {"n", scc_n}, {"trials", trials}};
        const Json summary{{"limit_condition", giant_scc_condition(scenario_limit_model(scenario))}};
        write_experiment(out_dir(g), "skeleton_scc", "skeleton-scc", cfg, g.seed, t, summary);
      }
    } else if (amp->parsed()) {
      auto c = AmplificationConfig::from_json(config_doc(g));
      if (app.count("--seed")) c.seed = g.seed;
      if (trials_override) c.trials = *trials_override;
      if (epsilon_override) c.epsilon = *epsilon_override;
      const auto r = run_amplification_sweep(c);
      write_experiment(out_dir(g), "amplification_sweep", "amplification-sweep", c.to_json(), c.seed, r.table,
                       r.summary);
    } else if (ind->parsed()) {
      auto c = IndegreeConfig::from_json(config_doc(g));
      if (app.count("--seed")) c.seed = g.seed;
      const auto r = run_indegree_impact(c);
      write_experiment(out_dir(g), "indegree_impact", "indegree-impact", c.to_json(), c.seed, r.table, r.summary);
    } else if (top->parsed()) {
      auto c = TopologyConfig::from_json(config_doc(g));
      if (app.count("--seed")) c.seed = g.seed;
      if (trials_override) c.trials = *trials_override;
      if (epsilon_override) c.epsilon = *epsilon_override;
      const auto r = run_topology_compare(c);
      write_experiment(out_dir(g), "topology_compare", "topology-compare", c.to_json(), c.seed, r.table, r.summary);
    } else if (conv->parsed()) {
      auto c = ConvergenceConfig::from_json(config_doc(g));
      if (app.count("--seed")) c.seed = g.seed;
      if (trials_override) c.trials = *trials_override;
      const auto r = run_convergence_study(c);
      write_experiment(out_dir(g), "convergence_study", "convergence-study", c.to_json(), c.seed, r.table,
                       r.summary);
    }
  } catch (const Error& e) {
    std::cerr << Json{{"error", e.code()}, {"message", e.what()}}.dump() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << Json{{"error", "internal"}, {"message", e.what()}}.dump() << '\n';
    return 3;
  }
  return 0;
}
