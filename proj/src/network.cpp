#include "contagion/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "contagion/error.hpp"

namespace contagion {

namespace {

[[noreturn]] void reject(const std::string& message) { throw Error("invalid_network", message); }

}  // namespace

std::size_t DegreeSequence::edge_count() const {
  validate();
  return std::accumulate(out.begin(), out.end(), std::size_t{0});
}

void DegreeSequence::validate() const {
  if (out.size() != in.size()) {
    throw Error("unbalanced_degrees", "out- and in-degree sequences differ in length");
  }
  const auto sum_out = std::accumulate(out.begin(), out.end(), std::size_t{0});
  const auto sum_in = std::accumulate(in.begin(), in.end(), std::size_t{0});
  if (sum_out != sum_in) {
    throw Error("unbalanced_degrees", "sum of out-degrees " + std::to_string(sum_out) +
                                          " != sum of in-degrees " + std::to_string(sum_in));
  }
}

FinancialNetwork FinancialNetwork::build(std::span<const EdgeSpec> edges, std::vector<double> gammas,
                                         double recovery, bool multigraph) {
  if (!(recovery >= 0.0 && recovery < 1.0)) reject("recovery rate must lie in [0,1)");
  const auto n = gammas.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!(gammas[i] >= 0.0) || !std::isfinite(gammas[i])) {
      reject("capital ratio of node " + std::to_string(i) + " must be finite and >= 0");
    }
  }

  FinancialNetwork net;
  net.recovery_ = recovery;
  net.multigraph_ = multigraph;
  net.gamma_ = std::move(gammas);
  net.out_offset_.assign(n + 1, 0);
  for (const auto& e : edges) {
    if (e.source >= n || e.target >= n) reject("edge endpoint out of range");
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) reject("exposure weights must be finite and > 0");
    if (e.source == e.target && !multigraph) {
      reject("self-exposure of node " + std::to_string(e.source));
    }
    ++net.out_offset_[e.source + 1];
  }
  std::partial_sum(net.out_offset_.begin(), net.out_offset_.end(), net.out_offset_.begin());

  // Stable bucket fill keeps each node's input order.
  net.exposures_.resize(edges.size());
  std::vector<std::size_t> cursor(net.out_offset_.begin(), net.out_offset_.end() - 1);
  for (const auto& e : edges) net.exposures_[cursor[e.source]++] = {e.target, e.weight};

  if (!multigraph) {
    std::vector<NodeId> seen;
    for (NodeId i = 0; i < n; ++i) {
      seen.clear();
      for (const auto& x : net.exposures(i)) seen.push_back(x.counterparty);
      std::sort(seen.begin(), seen.end());
      if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
        reject("duplicate exposure from node " + std::to_string(i));
      }
    }
  }
  net.finalize();
  return net;
}

void FinancialNetwork::finalize() {
  const auto n = gamma_.size();
  in_offset_.assign(n + 1, 0);
  for (const auto& x : exposures_) ++in_offset_[x.counterparty + 1];
  std::partial_sum(in_offset_.begin(), in_offset_.end(), in_offset_.begin());
  claims_.resize(exposures_.size());
  std::vector<std::size_t> cursor(in_offset_.begin(), in_offset_.end() - 1);
  assets_.assign(n, 0.0);
  capital_.assign(n, 0.0);
  for (NodeId i = 0; i < n; ++i) {
    double total = 0.0;
    for (const auto& x : exposures(i)) {
      claims_[cursor[x.counterparty]++] = {i, x.weight};
      total += x.weight;
    }
    assets_[i] = total;
    capital_[i] = gamma_[i] * total;
  }
}

DegreeSequence FinancialNetwork::degrees() const {
  DegreeSequence seq;
  seq.out.resize(size());
  seq.in.resize(size());
  for (NodeId i = 0; i < size(); ++i) {
    seq.out[i] = out_degree(i);
    seq.in[i] = in_degree(i);
  }
  return seq;
}

std::vector<EdgeSpec> FinancialNetwork::edge_list() const {
  std::vector<EdgeSpec> edges;
  edges.reserve(edge_count());
  for (NodeId i = 0; i < size(); ++i) {
    for (const auto& x : exposures(i)) edges.push_back({i, x.counterparty, x.weight});
  }
  return edges;
}

FinancialNetwork FinancialNetwork::with_gammas(std::vector<double> gammas) const {
  if (gammas.size() != size()) reject("capital ratio vector has wrong length");
  for (double g : gammas) {
    if (!(g >= 0.0) || !std::isfinite(g)) reject("capital ratios must be finite and >= 0");
  }
  FinancialNetwork copy = *this;
  copy.gamma_ = std::move(gammas);
  for (NodeId i = 0; i < size(); ++i) copy.capital_[i] = copy.gamma_[i] * copy.assets_[i];
  return copy;
}

}  // namespace contagion

namespace contagion {

WeightLists weight_lists(const FinancialNetwork& network) {
  WeightLists out(network.size());
  for (NodeId i = 0; i < network.size(); ++i) {
    for (const auto& x : network.exposures(i)) out[i].push_back(x.weight);
  }
  return out;
}

}  // namespace contagion
