#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "contagion/network.hpp"
#include "contagion/rng.hpp"

namespace testing {

using namespace contagion;

/// Small random network: each ordered pair present with probability `p`,
/// weights drawn from a mix of equal, uniform and heavy-tailed laws, capital
/// ratios uniform in [0, gamma_max] with some exact zeros.
inline FinancialNetwork random_network(std::size_t n, double p, std::uint64_t seed, double gamma_max = 0.6,
                                       double zero_share = 0.15, double recovery = 0.0) {
  Stream rng(seed, StreamTag::kSample, 99);
  const auto mode = rng.below(3);
  std::vector<EdgeSpec> edges;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = 0; j < n; ++j) {
      if (i == j || !rng.bernoulli(p)) continue;
      double w = 1.0;
      if (mode == 1) w = 0.1 + rng.uniform();
      if (mode == 2) w = std::pow(rng.uniform_open(), -1.0 / 1.5);
      edges.push_back({i, j, w});
    }
  }
  std::vector<double> gammas(n);
  for (auto& g : gammas) g = rng.bernoulli(zero_share) ? 0.0 : gamma_max * rng.uniform();
  return FinancialNetwork::build(edges, gammas, recovery);
}

struct Instance {
  DegreeSequence degrees;
  WeightLists weights;
  std::vector<double> gammas;
  double recovery = 0.0;
};

/// Random balanced degrees: out-degrees first, then each out-stub picks an
/// in-degree owner uniformly.
inline Instance random_instance(std::uint64_t seed) {
  Stream rng(seed, StreamTag::kSample, 7);
  Instance x;
  const auto n = 2 + rng.below(199);
  const auto max_out = 1 + rng.below(6);
  x.degrees.out.resize(n);
  x.degrees.in.assign(n, 0);
  for (auto& d : x.degrees.out) d = static_cast<std::uint32_t>(rng.below(max_out + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::uint32_t s = 0; s < x.degrees.out[i]; ++s) ++x.degrees.in[rng.below(n)];
  }
  const auto mode = rng.below(3);
  x.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::uint32_t s = 0; s < x.degrees.out[i]; ++s) {
      double w = 1.0;
      if (mode == 1) w = 0.1 + rng.uniform();
      if (mode == 2) w = std::pow(rng.uniform_open(), -1.0 / 1.5);
      x.weights[i].push_back(w);
    }
  }
  const double zero_share = 0.01 + 0.1 * rng.uniform();
  const double gamma_max = 0.1 + 0.8 * rng.uniform();
  x.gammas.resize(n);
  for (auto& g : x.gammas) g = rng.bernoulli(zero_share) ? 0.0 : gamma_max * rng.uniform();
  x.recovery = rng.bernoulli(0.3) ? 0.5 * rng.uniform() : 0.0;
  return x;
}

}  // namespace testing
