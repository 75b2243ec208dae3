#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "contagion/network.hpp"

namespace contagion {

/// Outcome of the round-based default cascade.
struct CascadeResult {
  /// Round in which each node defaulted; -1 for survivors. Fundamental
  /// defaults have round 0.
  std::vector<std::int32_t> default_round;
  /// Cumulative |D_k| for k = 0..rounds_used.
  std::vector<std::size_t> round_sizes;
  /// Sorted ids of the final default set.
  std::vector<NodeId> final_set;
  double fraction = 0.0;
  /// First k with D_k == D_{k+1}.
  std::size_t rounds_used = 0;

  /// D_k; for k past the fixed point this is the final set.
  std::vector<NodeId> defaults_by_round(std::size_t k) const;
};

/// Runs the cascade from {i : gamma(i) = 0}. A node defaults once the
/// accumulated loss (1-R) e(i,j) over defaulted counterparties j strictly
/// exceeds its capital.
CascadeResult run_cascade(const FinancialNetwork& network);

/// Same, with `extra_seeds` treated as fundamental defaults as well.
CascadeResult run_cascade(const FinancialNetwork& network, std::span<const NodeId> extra_seeds);

/// Final default counts for a batch of seed sets. OpenMP over the batch; the
/// result is independent of the thread count.
std::vector<std::size_t> cascade_sizes(const FinancialNetwork& network,
                                       std::span<const std::vector<NodeId>> seed_sets);
/// Serial reference for `cascade_sizes`.
std::vector<std::size_t> cascade_sizes_serial(const FinancialNetwork& network,
                                              std::span<const std::vector<NodeId>> seed_sets);

/// Least k >= 1 such that capital < sum of the first k losses taken in the
/// order given by `weight_at(0..j-1)`; j + 1 if no prefix exceeds capital.
template <typename WeightAt>
std::uint32_t first_overflow(double capital, double loss_given_default, std::size_t degree,
                             WeightAt weight_at) {
  double loss = 0.0;
  for (std::size_t k = 0; k < degree; ++k) {
    loss += loss_given_default * weight_at(k);
    if (capital < loss) return static_cast<std::uint32_t>(k + 1);
  }
  return static_cast<std::uint32_t>(degree + 1);
}

/// Number of counterparty defaults node i tolerates when they default in the
/// order `order` (indices into i's exposure list). 0 for gamma(i) = 0,
/// d+(i) + 1 when i survives losing every counterparty.
std::uint32_t default_threshold(const FinancialNetwork& network, NodeId node,
                                std::span<const std::uint32_t> order);

struct ThresholdAssignment {
  std::vector<std::uint32_t> theta;
  std::vector<std::vector<std::uint32_t>> permutation;
};

/// Draws an independent uniform exposure order per node from
/// Stream(seed, kPermutation, node) and evaluates the threshold along it.
ThresholdAssignment assign_thresholds(const FinancialNetwork& network, std::uint64_t seed);
ThresholdAssignment assign_thresholds(const WeightLists& weights, std::span<const double> gammas,
                                      double recovery, std::uint64_t seed);

/// Links i -> j with (1-R) e(i,j) > c(i). Links out of gamma = 0 nodes are
/// left out unless `include_seed_links` is set.
std::vector<EdgeSpec> contagious_links(const FinancialNetwork& network, bool include_seed_links = false);

/// Number of contagious out-links of each node (same convention).
std::vector<std::uint32_t> contagious_out_degrees(const FinancialNetwork& network,
                                                  bool include_seed_links = false);

}  // namespace contagion
