#include "contagion/generators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "contagion/configmodel.hpp"
#include "contagion/error.hpp"
#include "contagion/rng.hpp"

namespace contagion {

void ParetoSpec::validate() const {
  if (!(tail_exponent > 0.0) || !std::isfinite(tail_exponent)) {
    throw Error("invalid_argument", "tail exponent must be finite and positive");
  }
  if (!(x_min > 0.0) || !std::isfinite(x_min)) throw Error("invalid_argument", "x_min must be positive");
  if (discrete && x_min != std::floor(x_min)) {
    throw Error("invalid_argument", "discrete Pareto needs an integral x_min");
  }
}

std::vector<double> sample_pareto(const ParetoSpec& spec, std::size_t count, std::uint64_t seed) {
  spec.validate();
  Stream rng(seed, StreamTag::kSample);
  std::vector<double> out(count);
  const double inv = -1.0 / spec.tail_exponent;
  for (auto& x : out) {
    x = spec.x_min * std::pow(rng.uniform_open(), inv);
    if (spec.discrete) x = std::floor(x);
  }
  return out;
}

void BlanchardSpec::validate() const {
  out_degree.validate();
  if (!out_degree.discrete) throw Error("invalid_argument", "Blanchard out-degrees must be discrete");
  if (n < 2) throw Error("invalid_argument", "Blanchard graph needs n >= 2");
  if (!(alpha >= 1.0 && alpha < out_degree.tail_exponent)) {
    throw Error("invalid_argument", "alpha must satisfy 1 <= alpha < out-degree tail exponent");
  }
}

DegreeSequence EdgeList::degrees() const {
  DegreeSequence d{std::vector<std::uint32_t>(n, 0), std::vector<std::uint32_t>(n, 0)};
  for (const auto& [u, v] : edges) {
    ++d.out[u];
    ++d.in[v];
  }
  return d;
}

EdgeList blanchard_graph(const BlanchardSpec& spec, std::uint64_t seed) {
  spec.validate();
  const auto draws = sample_pareto(spec.out_degree, spec.n, derive_seed(seed, StreamTag::kDegrees, 0));
  std::vector<std::uint32_t> out(spec.n);
  std::size_t m = 0;
  for (std::size_t i = 0; i < spec.n; ++i) {
    // clamp far tail draws; a degree beyond n^2 is meaningless here
    out[i] = static_cast<std::uint32_t>(std::min(draws[i], 4.0e9));
    m += out[i];
  }
  if (m == 0) throw Error("invalid_argument", "all out-degrees are zero");

  std::vector<double> cumulative(spec.n);
  double total = 0.0;
  std::size_t receivers = 0;
  for (std::size_t i = 0; i < spec.n; ++i) {
    const double w = out[i] == 0 ? 0.0 : std::pow(static_cast<double>(out[i]), spec.alpha);
    if (w > 0.0) ++receivers;
    total += w;
    cumulative[i] = total;
  }
  if (receivers < 2) throw Error("invalid_argument", "only one node can receive links; self-loops unavoidable");

  EdgeList g;
  g.n = spec.n;
  g.edges.reserve(m);
  Stream rng(seed, StreamTag::kEndpoints);
  for (NodeId i = 0; i < spec.n; ++i) {
    for (std::uint32_t e = 0; e < out[i]; ++e) {
      NodeId v;
      do {
        const double u = rng.uniform() * total;
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        if (it == cumulative.end()) --it;
        v = static_cast<NodeId>(it - cumulative.begin());
      } while (v == i);
      g.edges.emplace_back(i, v);
    }
  }
  return g;
}

EdgeList erdos_renyi_directed(std::size_t n, double edge_prob, std::uint64_t seed) {
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) throw Error("invalid_argument", "edge probability must lie in [0,1]");
  EdgeList g;
  g.n = n;
  if (n < 2 || edge_prob == 0.0) return g;
  const std::uint64_t slots = static_cast<std::uint64_t>(n) * (n - 1);
  auto emit = [&](std::uint64_t idx) {
    const auto i = static_cast<NodeId>(idx / (n - 1));
    auto j = static_cast<NodeId>(idx % (n - 1));
    if (j >= i) ++j;
    g.edges.emplace_back(i, j);
  };
  if (edge_prob == 1.0) {
    for (std::uint64_t idx = 0; idx < slots; ++idx) emit(idx);
    return g;
  }
  // geometric skipping over the n(n-1) ordered pairs
  Stream rng(seed, StreamTag::kGenerator);
  const double log_q = std::log1p(-edge_prob);
  std::uint64_t idx = 0;
  while (true) {
    const double skip = std::floor(std::log(rng.uniform_open()) / log_q);
    if (skip >= static_cast<double>(slots - idx)) break;
    idx += static_cast<std::uint64_t>(skip);
    emit(idx);
    if (++idx >= slots) break;
  }
  return g;
}

FinancialNetwork attach_exposures_and_capital(const EdgeList& graph, const ExposureSpec& spec,
                                              std::uint64_t seed) {
  if (!(spec.gamma_min >= 0.0)) throw Error("invalid_argument", "gamma_min must be >= 0");
  std::vector<double> weights;
  if (spec.equal_weights) {
    weights.assign(graph.edges.size(), 1.0);
  } else {
    weights = sample_pareto(spec.weight, graph.edges.size(), derive_seed(seed, StreamTag::kExposures, 0));
  }
  std::vector<EdgeSpec> edges;
  edges.reserve(graph.edges.size());
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    edges.push_back({graph.edges[e].first, graph.edges[e].second, weights[e]});
  }
  bool multigraph = false;
  if (spec.collapse_parallel) {
    // keep the first occurrence's position, add later duplicates onto it
    std::map<std::pair<NodeId, NodeId>, std::size_t> first;
    std::vector<EdgeSpec> merged;
    merged.reserve(edges.size());
    for (const auto& e : edges) {
      auto [it, fresh] = first.try_emplace({e.source, e.target}, merged.size());
      if (fresh) {
        merged.push_back(e);
      } else {
        merged[it->second].weight += e.weight;
      }
    }
    edges = std::move(merged);
    if (spec.equal_weights) {
      for (auto& e : edges) e.weight = 1.0;
    }
  } else {
    multigraph = true;
  }
  return FinancialNetwork::build(edges, std::vector<double>(graph.n, spec.gamma_min), spec.recovery, multigraph);
}

std::size_t seed_count(std::size_t n, double fraction) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw Error("invalid_argument", "seed fraction must lie in [0,1]");
  if (fraction == 0.0 || n == 0) return 0;
  const auto c = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  return std::clamp<std::size_t>(c, 1, n);
}

std::vector<NodeId> choose_seeds(std::size_t n, double fraction, std::uint64_t seed) {
  const auto count = seed_count(n, fraction);
  std::vector<NodeId> ids(n);
  for (NodeId i = 0; i < n; ++i) ids[i] = i;
  Stream rng(seed, StreamTag::kSeeds);
  for (std::size_t a = 0; a < count; ++a) {
    const auto b = a + static_cast<std::size_t>(rng.below(n - a));
    std::swap(ids[a], ids[b]);
  }
  ids.resize(count);
  std::sort(ids.begin(), ids.end());
  return ids;
}

FinancialNetwork seed_defaults(const FinancialNetwork& network, double fraction, std::uint64_t seed) {
  const auto ids = choose_seeds(network.size(), fraction, seed);
  return seed_defaults(network, ids);
}

FinancialNetwork seed_defaults(const FinancialNetwork& network, std::span<const NodeId> ids) {
  std::vector<double> gammas(network.gammas().begin(), network.gammas().end());
  for (NodeId i : ids) {
    if (i >= gammas.size()) throw Error("invalid_argument", "seed id " + std::to_string(i) + " out of range");
    gammas[i] = 0.0;
  }
  return network.with_gammas(std::move(gammas));
}

DegreeSequence scenario_degrees(const ClassScenario& scenario, std::size_t n) {
  if (scenario.classes.empty()) throw Error("invalid_argument", "scenario has no classes");
  double total = 0.0;
  for (const auto& c : scenario.classes) {
    if (!(c.share >= 0.0)) throw Error("invalid_argument", "class shares must be >= 0");
    total += c.share;
  }
  if (std::abs(total - 1.0) > 1e-9) throw Error("invalid_argument", "class shares must sum to 1");
  std::vector<std::size_t> counts(scenario.classes.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < counts.size(); ++c) {
    const double exact = scenario.classes[c].share * static_cast<double>(n);
    counts[c] = static_cast<std::size_t>(std::floor(exact));
    assigned += counts[c];
    remainders.emplace_back(-(exact - std::floor(exact)), c);
  }
  std::sort(remainders.begin(), remainders.end());
  for (std::size_t r = 0; assigned < n; ++r, ++assigned) ++counts[remainders[r % remainders.size()].second];
  DegreeSequence d;
  for (std::size_t c = 0; c < counts.size(); ++c) {
    d.out.insert(d.out.end(), counts[c], scenario.classes[c].out_degree);
    d.in.insert(d.in.end(), counts[c], scenario.classes[c].in_degree);
  }
  d.validate();
  return d;
}

FinancialNetwork realize_scenario(const ClassScenario& scenario, std::size_t n, std::uint64_t seed) {
  const auto degrees = scenario_degrees(scenario, n);
  const auto graph = configuration_match(degrees, seed);
  WeightLists weights(n);
  for (NodeId i = 0; i < n; ++i) weights[i].assign(degrees.out[i], 1.0);
  std::vector<double> gammas(n, scenario.gamma);
  for (NodeId i : choose_seeds(n, scenario.seed_fraction, seed)) gammas[i] = 0.0;
  return weighted_overlay(graph, weights, std::move(gammas), scenario.recovery);
}

}  // namespace contagion
