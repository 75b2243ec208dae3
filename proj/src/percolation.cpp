#include "contagion/percolation.hpp"

#include <algorithm>

#include "contagion/asymptotics.hpp"
#include "contagion/cascade.hpp"
#include "contagion/configmodel.hpp"
#include "contagion/error.hpp"
#include "contagion/measures.hpp"
#include "contagion/rng.hpp"

namespace contagion {

std::size_t Digraph::edge_count() const noexcept {
  std::size_t m = 0;
  for (const auto& a : adjacency) m += a.size();
  return m;
}

bool Digraph::has_parallel_edges() const {
  for (auto a : adjacency) {
    std::sort(a.begin(), a.end());
    if (std::adjacent_find(a.begin(), a.end()) != a.end()) return true;
  }
  return false;
}

Digraph contagious_skeleton(const FinancialNetwork& network, bool include_seed_links) {
  Digraph g(network.size());
  for (const auto& e : contagious_links(network, include_seed_links)) g.add_edge(e.source, e.target);
  return g;
}

std::vector<std::uint32_t> scc_labels(const Digraph& graph) {
  constexpr std::uint32_t kUnset = UINT32_MAX;
  const auto n = graph.n;
  std::vector<std::uint32_t> index(n, kUnset), low(n, 0), label(n, kUnset);
  std::vector<char> on_stack(n, 0);
  std::vector<NodeId> stack;
  std::vector<std::pair<NodeId, std::size_t>> call;  // node, next edge position
  std::uint32_t counter = 0, components = 0;
  for (NodeId root = 0; root < n; ++root) {
    if (index[root] != kUnset) continue;
    call.emplace_back(root, 0);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& [v, pos] = call.back();
      const auto& adj = graph.adjacency[v];
      if (pos < adj.size()) {
        const NodeId w = adj[pos++];
        if (index[w] == kUnset) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const NodeId done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
      if (low[done] == index[done]) {
        NodeId w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          label[w] = components;
        } while (w != done);
        ++components;
      }
    }
  }
  return label;
}

SccResult largest_scc(const Digraph& graph) {
  SccResult out;
  if (graph.n == 0) return out;
  const auto label = scc_labels(graph);
  const auto components = *std::max_element(label.begin(), label.end()) + 1;
  std::vector<std::size_t> size(components, 0);
  std::vector<NodeId> min_id(components, UINT32_MAX);
  for (NodeId i = 0; i < graph.n; ++i) {
    ++size[label[i]];
    min_id[label[i]] = std::min(min_id[label[i]], i);
  }
  std::uint32_t best = 0;
  for (std::uint32_t c = 1; c < components; ++c) {
    if (size[c] > size[best] || (size[c] == size[best] && min_id[c] < min_id[best])) best = c;
  }
  for (NodeId i = 0; i < graph.n; ++i) {
    if (label[i] == best) out.nodes.push_back(i);
  }
  out.fraction = static_cast<double>(out.nodes.size()) / static_cast<double>(graph.n);
  out.component_count = components;
  return out;
}

double giant_scc_condition(const LimitModel& model) { return susceptibility(model); }

DegreeSequence rewired_sequence(const FinancialNetwork& network, bool include_seed_links) {
  const auto n = network.size();
  const auto c_plus = contagious_out_degrees(network, include_seed_links);
  DegreeSequence d{c_plus, std::vector<std::uint32_t>(n)};
  std::size_t stubs = 0;
  for (NodeId i = 0; i < n; ++i) {
    d.in[i] = network.in_degree(i);
    stubs += network.out_degree(i) - c_plus[i];
  }
  d.out.resize(n + stubs, 1);
  d.in.resize(n + stubs, 0);
  d.validate();
  return d;
}

SkeletonTrial skeleton_scc_trial(const FinancialNetwork& network, std::uint64_t seed) {
  SkeletonTrial t;
  const auto n = network.size();
  t.direct = largest_scc(contagious_skeleton(network)).fraction;

  const auto seq = rewired_sequence(network);
  const auto graph = configuration_match(seq, seed);
  Digraph g(n);
  for (const auto& [u, v] : graph.edges()) {
    if (u < n && v < n) g.add_edge(u, v);
  }
  t.rewired = largest_scc(g).fraction;

  t.condition = first_order_measures(network).susceptibility;
  return t;
}

std::vector<SkeletonTrial> skeleton_scc_experiment(const ClassScenario& scenario, std::size_t n,
                                                   std::size_t trials, std::uint64_t seed) {
  if (n < 100) throw Error("invalid_argument", "skeleton experiment needs n >= 100");
  std::vector<SkeletonTrial> out(trials);
  const auto count = static_cast<std::ptrdiff_t>(trials);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t t = 0; t < count; ++t) {
    const auto s = derive_seed(seed, StreamTag::kTrial, static_cast<std::uint64_t>(t));
    out[t] = skeleton_scc_trial(realize_scenario(scenario, n, s), derive_seed(s, StreamTag::kGenerator, 1));
  }
  return out;
}

}  // namespace contagion
