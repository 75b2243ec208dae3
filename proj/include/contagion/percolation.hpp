#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "contagion/generators.hpp"
#include "contagion/limit_model.hpp"
#include "contagion/network.hpp"

namespace contagion {

/// Unweighted directed graph; parallel edges and self-loops are allowed.
struct Digraph {
  std::size_t n = 0;
  std::vector<std::vector<NodeId>> adjacency;

  explicit Digraph(std::size_t size = 0) : n(size), adjacency(size) {}
  void add_edge(NodeId u, NodeId v) { adjacency[u].push_back(v); }
  std::size_t edge_count() const noexcept;
  bool has_parallel_edges() const;
};

/// Edge i -> j for every contagious link (orientation of the exposure: i is
/// exposed to j). The out-degree of i is c+(i).
Digraph contagious_skeleton(const FinancialNetwork& network, bool include_seed_links = false);

/// Component label per node from Tarjan's algorithm (iterative).
std::vector<std::uint32_t> scc_labels(const Digraph& graph);

struct SccResult {
  /// Sorted members of the largest component; ties go to the component
  /// with the smallest minimum id.
  std::vector<NodeId> nodes;
  double fraction = 0.0;
  std::size_t component_count = 0;
};

SccResult largest_scc(const Digraph& graph);

/// sum (j k / lambda) mu p(j,k,1); > 1 exactly when the resilience is negative.
double giant_scc_condition(const LimitModel& model);

/// Degree sequence of size n' = n + m - sum c+(i): node i keeps (c+(i), d-(i)),
/// and every non-contagious link becomes a separate stub node of degree (1, 0).
DegreeSequence rewired_sequence(const FinancialNetwork& network, bool include_seed_links = false);

struct SkeletonTrial {
  /// Largest SCC fraction of the realized contagious skeleton.
  double direct = 0.0;
  /// Same on a configuration graph from the rewired sequence, stub nodes dropped.
  double rewired = 0.0;
  /// giant_scc_condition of the realized empirical measures.
  double condition = 0.0;
};

/// Realizes `trials` networks of size n from the scenario. Trial t uses
/// derive_seed(seed, kTrial, t); trials run in parallel, output is ordered.
std::vector<SkeletonTrial> skeleton_scc_experiment(const ClassScenario& scenario, std::size_t n,
                                                   std::size_t trials, std::uint64_t seed);

/// Skeleton SCC measurements of a single network; the rewired graph is drawn
/// from Stream(seed, kMatching).
SkeletonTrial skeleton_scc_trial(const FinancialNetwork& network, std::uint64_t seed);

}  // namespace contagion
