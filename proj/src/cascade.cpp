#include "contagion/cascade.hpp"

#include <algorithm>
#include <string>

#include "contagion/error.hpp"
#include "contagion/rng.hpp"

namespace contagion {

std::vector<NodeId> CascadeResult::defaults_by_round(std::size_t k) const {
  std::vector<NodeId> out;
  for (NodeId i = 0; i < default_round.size(); ++i) {
    if (default_round[i] >= 0 && static_cast<std::size_t>(default_round[i]) <= k) out.push_back(i);
  }
  return out;
}

namespace {

/// Workspace reused across runs of the same network.
struct CascadeScratch {
  std::vector<std::int32_t> round;
  std::vector<double> loss;
  std::vector<NodeId> frontier;
  std::vector<NodeId> touched;
  std::vector<NodeId> next;
  std::vector<char> is_touched;

  explicit CascadeScratch(std::size_t n) : round(n, -1), loss(n, 0.0), is_touched(n, 0) {}
};

/// Core loop; leaves per-node rounds in scratch.round and returns cumulative sizes.
std::vector<std::size_t> cascade_core(const FinancialNetwork& net, std::span<const NodeId> extra_seeds,
                                      CascadeScratch& s) {
  const auto n = net.size();
  std::fill(s.round.begin(), s.round.end(), -1);
  std::fill(s.loss.begin(), s.loss.end(), 0.0);
  s.frontier.clear();
  for (NodeId i = 0; i < n; ++i) {
    if (net.gamma(i) == 0.0) {
      s.round[i] = 0;
      s.frontier.push_back(i);
    }
  }
  for (NodeId i : extra_seeds) {
    if (i >= n) throw Error("invalid_argument", "seed id " + std::to_string(i) + " out of range");
    if (s.round[i] < 0) {
      s.round[i] = 0;
      s.frontier.push_back(i);
    }
  }

  const double lgd = net.loss_given_default();
  std::vector<std::size_t> sizes{s.frontier.size()};
  std::int32_t k = 0;
  while (!s.frontier.empty()) {
    s.touched.clear();
    for (NodeId j : s.frontier) {
      for (const auto& claim : net.claims(j)) {
        const NodeId i = claim.creditor;
        if (s.round[i] >= 0) continue;
        s.loss[i] += lgd * claim.weight;
        if (!s.is_touched[i]) {
          s.is_touched[i] = 1;
          s.touched.push_back(i);
        }
      }
    }
    ++k;
    s.next.clear();
    for (NodeId i : s.touched) {
      s.is_touched[i] = 0;
      if (net.capital(i) < s.loss[i]) {
        s.round[i] = k;
        s.next.push_back(i);
      }
    }
    if (s.next.empty()) break;
    sizes.push_back(sizes.back() + s.next.size());
    std::swap(s.frontier, s.next);
  }
  return sizes;
}

}  // namespace

CascadeResult run_cascade(const FinancialNetwork& network) { return run_cascade(network, {}); }

CascadeResult run_cascade(const FinancialNetwork& network, std::span<const NodeId> extra_seeds) {
  CascadeScratch scratch(network.size());
  CascadeResult result;
  result.round_sizes = cascade_core(network, extra_seeds, scratch);
  result.rounds_used = result.round_sizes.size() - 1;
  result.default_round = std::move(scratch.round);
  for (NodeId i = 0; i < network.size(); ++i) {
    if (result.default_round[i] >= 0) result.final_set.push_back(i);
  }
  result.fraction = network.size() == 0 ? 0.0
                                        : static_cast<double>(result.final_set.size()) /
                                              static_cast<double>(network.size());
  return result;
}

std::vector<std::size_t> cascade_sizes(const FinancialNetwork& network,
                                       std::span<const std::vector<NodeId>> seed_sets) {
  std::vector<std::size_t> out(seed_sets.size());
  const auto count = static_cast<std::ptrdiff_t>(seed_sets.size());
#pragma omp parallel
  {
    CascadeScratch scratch(network.size());
#pragma omp for schedule(dynamic)
    for (std::ptrdiff_t t = 0; t < count; ++t) {
      out[t] = cascade_core(network, seed_sets[t], scratch).back();
    }
  }
  return out;
}

std::vector<std::size_t> cascade_sizes_serial(const FinancialNetwork& network,
                                              std::span<const std::vector<NodeId>> seed_sets) {
  std::vector<std::size_t> out;
  out.reserve(seed_sets.size());
  CascadeScratch scratch(network.size());
  for (const auto& seeds : seed_sets) out.push_back(cascade_core(network, seeds, scratch).back());
  return out;
}

std::uint32_t default_threshold(const FinancialNetwork& network, NodeId node,
                                std::span<const std::uint32_t> order) {
  const auto ex = network.exposures(node);
  if (order.size() != ex.size()) {
    throw Error("invalid_permutation", "permutation length " + std::to_string(order.size()) +
                                           " != out-degree " + std::to_string(ex.size()));
  }
  std::vector<char> seen(ex.size(), 0);
  for (auto idx : order) {
    if (idx >= ex.size() || seen[idx]) throw Error("invalid_permutation", "order is not a permutation");
    seen[idx] = 1;
  }
  if (network.gamma(node) == 0.0) return 0;
  return first_overflow(network.capital(node), network.loss_given_default(), ex.size(),
                        [&](std::size_t k) { return ex[order[k]].weight; });
}

ThresholdAssignment assign_thresholds(const FinancialNetwork& network, std::uint64_t seed) {
  return assign_thresholds(weight_lists(network), network.gammas(), network.recovery(), seed);
}

ThresholdAssignment assign_thresholds(const WeightLists& weights, std::span<const double> gammas,
                                      double recovery, std::uint64_t seed) {
  if (weights.size() != gammas.size()) {
    throw Error("invalid_argument", "weight lists and capital ratios differ in length");
  }
  const double lgd = 1.0 - recovery;
  ThresholdAssignment out;
  out.theta.resize(weights.size());
  out.permutation.resize(weights.size());
  for (NodeId i = 0; i < weights.size(); ++i) {
    const auto& w = weights[i];
    Stream rng(seed, StreamTag::kPermutation, i);
    out.permutation[i] = rng.permutation(w.size());
    if (gammas[i] == 0.0) {
      out.theta[i] = 0;
      continue;
    }
    double assets = 0.0;
    for (double x : w) assets += x;
    const auto& perm = out.permutation[i];
    out.theta[i] = first_overflow(gammas[i] * assets, lgd, w.size(),
                                  [&](std::size_t k) { return w[perm[k]]; });
  }
  return out;
}

std::vector<EdgeSpec> contagious_links(const FinancialNetwork& network, bool include_seed_links) {
  std::vector<EdgeSpec> out;
  const double lgd = network.loss_given_default();
  for (NodeId i = 0; i < network.size(); ++i) {
    if (network.gamma(i) == 0.0 && !include_seed_links) continue;
    for (const auto& x : network.exposures(i)) {
      if (lgd * x.weight > network.capital(i)) out.push_back({i, x.counterparty, x.weight});
    }
  }
  return out;
}

std::vector<std::uint32_t> contagious_out_degrees(const FinancialNetwork& network,
                                                  bool include_seed_links) {
  std::vector<std::uint32_t> out(network.size(), 0);
  const double lgd = network.loss_given_default();
  for (NodeId i = 0; i < network.size(); ++i) {
    if (network.gamma(i) == 0.0 && !include_seed_links) continue;
    for (const auto& x : network.exposures(i)) {
      if (lgd * x.weight > network.capital(i)) ++out[i];
    }
  }
  return out;
}

}  // namespace contagion
