#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "contagion/network.hpp"

namespace contagion {

/// Pareto law with P(X > x) = (x / x_min)^(-tail_exponent). The discrete
/// variant takes the integer part of a continuous draw, so on integers
/// P(D >= x) = (x / x_min)^(-tail_exponent) for x >= x_min (x_min integral).
struct ParetoSpec {
  double tail_exponent = 2.0;
  double x_min = 1.0;
  bool discrete = false;

  /// Throws `Error("invalid_argument")`.
  void validate() const;
};

std::vector<double> sample_pareto(const ParetoSpec& spec, std::size_t count, std::uint64_t seed);

/// Static scale-free graph: out-degrees drawn from a discrete Pareto law, each
/// out-edge attached to node v with probability d+(v)^alpha / sum_u d+(u)^alpha
/// (with replacement, self-loops redrawn). Default parameters give in-degree
/// tail 2.19 / alpha = 1.98.
struct BlanchardSpec {
  std::size_t n = 10'000;
  ParetoSpec out_degree{2.19, 4.0, true};
  double alpha = 2.19 / 1.98;

  void validate() const;
};

/// Unweighted directed edge list; may contain parallel edges.
struct EdgeList {
  std::size_t n = 0;
  std::vector<std::pair<NodeId, NodeId>> edges;

  DegreeSequence degrees() const;
  double mean_degree() const noexcept {
    return n == 0 ? 0.0 : static_cast<double>(edges.size()) / static_cast<double>(n);
  }
};

/// Throws `Error("invalid_argument")` if every out-degree is zero or if only
/// one node can receive links.
EdgeList blanchard_graph(const BlanchardSpec& spec, std::uint64_t seed);

/// Every ordered pair (i, j), i != j, present independently with `edge_prob`.
EdgeList erdos_renyi_directed(std::size_t n, double edge_prob, std::uint64_t seed);

struct ExposureSpec {
  ParetoSpec weight{2.61, 1.0, false};
  /// Every weight 1 instead of Pareto draws.
  bool equal_weights = false;
  double gamma_min = 0.0;
  double recovery = 0.0;
  /// Merge parallel edges into one exposure carrying the summed weight (weight
  /// 1 in equal-weight mode).
  bool collapse_parallel = true;
};

/// i.i.d. weights in edge order from Stream(seed, kExposures), capital ratio
/// gamma_min everywhere.
FinancialNetwork attach_exposures_and_capital(const EdgeList& graph, const ExposureSpec& spec,
                                              std::uint64_t seed);

/// Number of seeds for a fraction: round(fraction n), at least 1 when fraction > 0.
std::size_t seed_count(std::size_t n, double fraction);

/// Uniform random subset of size seed_count(n, fraction), sorted.
std::vector<NodeId> choose_seeds(std::size_t n, double fraction, std::uint64_t seed);

/// Copy of `network` with gamma = 0 on the chosen nodes.
FinancialNetwork seed_defaults(const FinancialNetwork& network, double fraction, std::uint64_t seed);
FinancialNetwork seed_defaults(const FinancialNetwork& network, std::span<const NodeId> ids);

/// Degree class (j, k) holding a share of the nodes.
struct ClassShare {
  std::uint32_t out_degree;
  std::uint32_t in_degree;
  double share;
};

/// Equal-weight configuration-model network with prescribed class shares and
/// a common capital ratio; handy for realizing a LimitModel exactly.
struct ClassScenario {
  std::vector<ClassShare> classes;
  double gamma = 0.4;
  double recovery = 0.0;
  /// Fraction of nodes turned into fundamental defaults.
  double seed_fraction = 0.0;
};

/// Class sizes by largest remainder; node ids grouped by class in the order
/// given. Throws `Error("unbalanced_degrees")` if the rounded counts do not
/// balance.
DegreeSequence scenario_degrees(const ClassScenario& scenario, std::size_t n);

/// Matching from Stream(seed, kMatching); seeds from Stream(seed, kSeeds).
FinancialNetwork realize_scenario(const ClassScenario& scenario, std::size_t n, std::uint64_t seed);

}  // namespace contagion
