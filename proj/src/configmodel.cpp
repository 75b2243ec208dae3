#include "contagion/configmodel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <queue>
#include <string>

#include "contagion/asymptotics.hpp"
#include "contagion/error.hpp"
#include "contagion/rng.hpp"

namespace contagion {

StubLayout::StubLayout(const DegreeSequence& degrees) {
  degrees.validate();
  const auto n = degrees.size();
  out_first_.resize(n + 1, 0);
  in_first_.resize(n + 1, 0);
  for (NodeId i = 0; i < n; ++i) {
    out_first_[i + 1] = out_first_[i] + degrees.out[i];
    in_first_[i + 1] = in_first_[i] + degrees.in[i];
  }
  out_owner_.resize(out_first_[n]);
  in_owner_.resize(in_first_[n]);
  for (NodeId i = 0; i < n; ++i) {
    std::fill(out_owner_.begin() + out_first_[i], out_owner_.begin() + out_first_[i + 1], i);
    std::fill(in_owner_.begin() + in_first_[i], in_owner_.begin() + in_first_[i + 1], i);
  }
}

std::vector<std::pair<NodeId, NodeId>> Multigraph::edges() const {
  StubLayout layout(degrees);
  std::vector<std::pair<NodeId, NodeId>> out(match.size());
  for (std::size_t s = 0; s < match.size(); ++s) {
    out[s] = {layout.out_owner(s), layout.in_owner(match[s])};
  }
  return out;
}

void Multigraph::validate() const {
  const auto m = degrees.edge_count();
  if (match.size() != m) throw Error("invalid_multigraph", "matching size differs from edge count");
  std::vector<char> seen(m, 0);
  for (auto t : match) {
    if (t >= m || seen[t]) throw Error("invalid_multigraph", "matching is not a bijection");
    seen[t] = 1;
  }
}

Multigraph configuration_match(const DegreeSequence& degrees, std::uint64_t seed) {
  const auto m = degrees.edge_count();
  Stream rng(seed, StreamTag::kMatching);
  return Multigraph{degrees, rng.permutation(m)};
}

bool is_simple(const Multigraph& graph) {
  auto e = graph.edges();
  for (const auto& [u, v] : e) {
    if (u == v) return false;
  }
  std::sort(e.begin(), e.end());
  return std::adjacent_find(e.begin(), e.end()) == e.end();
}

double simplicity_rate(const DegreeSequence& degrees, std::size_t trials, std::uint64_t seed) {
  if (trials == 0) throw Error("invalid_argument", "trials must be positive");
  std::size_t simple = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    if (is_simple(configuration_match(degrees, derive_seed(seed, StreamTag::kTrial, t)))) ++simple;
  }
  return static_cast<double>(simple) / static_cast<double>(trials);
}

namespace {

void check_weights(const DegreeSequence& degrees, const WeightLists& weights, std::size_t gammas) {
  if (weights.size() != degrees.size() || gammas != degrees.size()) {
    throw Error("invalid_argument", "weights / capital ratios do not match the degree sequence");
  }
  for (NodeId i = 0; i < weights.size(); ++i) {
    if (weights[i].size() != degrees.out[i]) {
      throw Error("invalid_argument", "node " + std::to_string(i) + " has " +
                                          std::to_string(weights[i].size()) + " weights for out-degree " +
                                          std::to_string(degrees.out[i]));
    }
  }
}

/// Shared machinery of the half-edge processes: the pool of black out-stubs
/// and the heap of black in-stubs belonging to defaulted nodes.
class HalfEdgeEngine {
 public:
  HalfEdgeEngine(const DegreeSequence& degrees, const std::vector<std::vector<std::uint32_t>>& perms,
                 std::uint64_t seed)
      : layout_(degrees),
        degrees_(degrees),
        perms_(perms),
        rng_(seed, StreamTag::kPartner),
        pool_(layout_.stub_count()),
        pos_(layout_.stub_count()),
        red_(degrees.size(), 0) {
    for (std::uint32_t s = 0; s < pool_.size(); ++s) pool_[s] = pos_[s] = s;
  }

  const StubLayout& layout() const { return layout_; }

  void push_in_stubs(NodeId i) {
    for (std::size_t a = layout_.first_in(i); a < layout_.first_in(i) + degrees_.in[i]; ++a) {
      heap_.push(static_cast<std::uint32_t>(a));
    }
  }
  bool has_black_in_stub() const { return !heap_.empty(); }
  std::size_t black_in_stubs() const { return heap_.size(); }
  std::uint32_t pop_in_stub() {
    const auto a = heap_.top();
    heap_.pop();
    return a;
  }
  bool pool_empty() const { return pool_.empty(); }
  std::vector<std::uint32_t>& pool() { return pool_; }

  /// Uniform black out-stub; its owner reveals the stub at position
  /// red_count in its order. Returns (owner, revealed local index, label).
  struct Pick {
    NodeId node;
    std::uint32_t local;
    std::uint32_t label;
  };
  Pick pick_partner() {
    const auto drawn = pool_[rng_.below(pool_.size())];
    const NodeId i = layout_.out_owner(drawn);
    const std::uint32_t local = perms_[i][red_[i]++];
    const auto label = static_cast<std::uint32_t>(layout_.first_out(i) + local);
    remove(label);
    return {i, local, label};
  }

  std::uint32_t red_count(NodeId i) const { return red_[i]; }

 private:
  void remove(std::uint32_t label) {
    const auto p = pos_[label];
    const auto last = pool_.back();
    pool_[p] = last;
    pos_[last] = p;
    pool_.pop_back();
  }

  StubLayout layout_;
  const DegreeSequence& degrees_;
  const std::vector<std::vector<std::uint32_t>>& perms_;
  Stream rng_;
  std::vector<std::uint32_t> pool_;
  std::vector<std::uint32_t> pos_;
  std::vector<std::uint32_t> red_;
  std::priority_queue<std::uint32_t, std::vector<std::uint32_t>, std::greater<>> heap_;
};

}  // namespace

FinancialNetwork weighted_overlay(const Multigraph& graph, const WeightLists& weights,
                                  std::vector<double> gammas, double recovery) {
  check_weights(graph.degrees, weights, gammas.size());
  graph.validate();
  StubLayout layout(graph.degrees);
  std::vector<EdgeSpec> edges;
  edges.reserve(graph.match.size());
  for (std::size_t s = 0; s < graph.match.size(); ++s) {
    const NodeId i = layout.out_owner(s);
    edges.push_back({i, layout.in_owner(graph.match[s]), weights[i][s - layout.first_out(i)]});
  }
  return FinancialNetwork::build(edges, std::move(gammas), recovery, true);
}

SequentialResult sequential_cascade(const DegreeSequence& degrees, const WeightLists& weights,
                                    std::span<const double> gammas, double recovery, std::uint64_t seed) {
  check_weights(degrees, weights, gammas.size());
  if (!(recovery >= 0.0 && recovery < 1.0)) throw Error("invalid_argument", "recovery must lie in [0,1)");
  const auto n = degrees.size();
  const auto m = degrees.edge_count();
  const double lgd = 1.0 - recovery;

  SequentialResult result;
  auto& proc = result.process;
  proc.permutation.resize(n);
  for (NodeId i = 0; i < n; ++i) {
    Stream rng(seed, StreamTag::kPermutation, i);
    proc.permutation[i] = rng.permutation(degrees.out[i]);
  }
  std::vector<double> capital(n), loss(n, 0.0);
  for (NodeId i = 0; i < n; ++i) {
    double assets = 0.0;
    for (double x : weights[i]) assets += x;
    capital[i] = gammas[i] * assets;
  }
  proc.defaulted.assign(n, 0);
  proc.out_red.assign(m, 0);
  proc.in_red.assign(m, 0);
  proc.partial_match.assign(m, -1);

  HalfEdgeEngine engine(degrees, proc.permutation, seed);
  for (NodeId i = 0; i < n; ++i) {
    if (gammas[i] == 0.0) {
      proc.defaulted[i] = 1;
      engine.push_in_stubs(i);
    }
  }
  while (engine.has_black_in_stub()) {
    const auto a = engine.pop_in_stub();
    const auto pick = engine.pick_partner();
    proc.in_red[a] = 1;
    proc.out_red[pick.label] = 1;
    proc.partial_match[pick.label] = a;
    bool fresh = false;
    if (!proc.defaulted[pick.node]) {
      loss[pick.node] += lgd * weights[pick.node][pick.local];
      if (capital[pick.node] < loss[pick.node]) {
        proc.defaulted[pick.node] = 1;
        engine.push_in_stubs(pick.node);
        fresh = true;
      }
    }
    proc.steps.push_back({a, pick.label, pick.node, fresh});
  }
  proc.remaining_capital.resize(n);
  for (NodeId i = 0; i < n; ++i) proc.remaining_capital[i] = capital[i] - loss[i];

  // Leftover stubs: uniform permutation of black out-stubs onto black
  // in-stubs in increasing label order.
  result.graph.degrees = degrees;
  result.graph.match.assign(m, 0);
  for (std::size_t s = 0; s < m; ++s) {
    if (proc.partial_match[s] >= 0) result.graph.match[s] = static_cast<std::uint32_t>(proc.partial_match[s]);
  }
  std::vector<std::uint32_t> outs;
  for (std::uint32_t s = 0; s < m; ++s) {
    if (!proc.out_red[s]) outs.push_back(s);
  }
  Stream completion(seed, StreamTag::kCompletion);
  completion.shuffle(std::span<std::uint32_t>(outs));
  std::size_t next = 0;
  for (std::uint32_t a = 0; a < m; ++a) {
    if (!proc.in_red[a]) result.graph.match[outs[next++]] = a;
  }
  for (NodeId i = 0; i < n; ++i) {
    if (proc.defaulted[i]) result.final_set.push_back(i);
  }
  return result;
}

MarkovTrajectory markov_trajectory(const DegreeSequence& degrees, const ThresholdAssignment& thresholds,
                                   std::uint64_t seed, bool continue_past_stopping) {
  const auto n = degrees.size();
  const auto m = degrees.edge_count();
  if (thresholds.theta.size() != n || thresholds.permutation.size() != n) {
    throw Error("invalid_argument", "threshold assignment does not match the degree sequence");
  }
  for (NodeId i = 0; i < n; ++i) {
    if (thresholds.permutation[i].size() != degrees.out[i] || thresholds.theta[i] > degrees.out[i] + 1) {
      throw Error("invalid_argument", "threshold data of node " + std::to_string(i) + " is inconsistent");
    }
  }

  MarkovTrajectory traj;
  traj.n = n;
  traj.m = m;
  std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>, std::int64_t> counts;
  for (NodeId i = 0; i < n; ++i) ++counts[{degrees.out[i], degrees.in[i], thresholds.theta[i]}];
  for (const auto& [key, c] : counts) {
    const auto [j, k, theta] = key;
    traj.initial_counts.push_back({j, k, theta, c});
    if (theta >= 1 && theta <= j) {
      for (std::uint32_t l = 0; l < theta; ++l) traj.classes.push_back({j, k, theta, l});
    }
  }
  // class index of node i with l red stubs is base[i] + l
  std::vector<std::int64_t> base(n, -1);
  {
    std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>, std::int64_t> first;
    for (std::size_t c = 0; c < traj.classes.size(); ++c) {
      const auto& cl = traj.classes[c];
      if (cl.l == 0) first[{cl.j, cl.k, cl.theta}] = static_cast<std::int64_t>(c);
    }
    for (NodeId i = 0; i < n; ++i) {
      const auto th = thresholds.theta[i];
      if (th >= 1 && th <= degrees.out[i]) base[i] = first.at({degrees.out[i], degrees.in[i], th});
    }
  }

  const auto width = traj.classes.size();
  std::vector<std::int64_t> current(width, 0);
  std::int64_t defaulted = 0, in_stub_total = 0;
  std::vector<char> is_default(n, 0);
  HalfEdgeEngine engine(degrees, thresholds.permutation, seed);
  for (NodeId i = 0; i < n; ++i) {
    if (thresholds.theta[i] == 0) {
      is_default[i] = 1;
      ++defaulted;
      in_stub_total += degrees.in[i];
      engine.push_in_stubs(i);
    } else if (base[i] >= 0) {
      ++current[base[i]];
    }
  }
  auto record = [&](std::size_t t) {
    traj.counters.insert(traj.counters.end(), current.begin(), current.end());
    traj.defaulted.push_back(defaulted);
    traj.defaulted_in_stubs.push_back(in_stub_total - static_cast<std::int64_t>(t));
  };
  record(0);
  traj.stopping_time = m;
  bool stopped = false;
  if (in_stub_total == 0) {
    traj.stopping_time = 0;
    stopped = true;
  }
  for (std::size_t t = 1; t <= m; ++t) {
    if (stopped && !continue_past_stopping) break;
    if (engine.has_black_in_stub()) engine.pop_in_stub();
    const auto pick = engine.pick_partner();
    traj.partners.push_back(pick.node);
    const NodeId i = pick.node;
    if (!is_default[i] && base[i] >= 0) {
      const auto l = engine.red_count(i);  // already incremented
      --current[base[i] + l - 1];
      if (l == thresholds.theta[i]) {
        is_default[i] = 1;
        ++defaulted;
        in_stub_total += degrees.in[i];
        engine.push_in_stubs(i);
      } else {
        ++current[base[i] + l];
      }
    }
    record(t);
    if (!stopped && in_stub_total - static_cast<std::int64_t>(t) == 0) {
      traj.stopping_time = t;
      stopped = true;
    }
  }
  return traj;
}

double sup_deviation(const MarkovTrajectory& trajectory, const LimitModel& model) {
  const double n = static_cast<double>(trajectory.n);
  const auto last = std::min(trajectory.stopping_time, trajectory.steps_recorded() - 1);
  // model classes the sample never produced have S = 0 throughout
  std::vector<CounterClass> absent;
  for (const auto& c : model.classes()) {
    for (std::uint32_t theta = 1; theta <= c.out_degree; ++theta) {
      if (c.mass * c.p(theta) == 0.0) continue;
      for (std::uint32_t l = 0; l < theta; ++l) {
        const CounterClass key{c.out_degree, c.in_degree, theta, l};
        if (!std::binary_search(trajectory.classes.begin(), trajectory.classes.end(), key)) {
          absent.push_back(key);
        }
      }
    }
  }
  double worst = 0.0;
  for (std::size_t t = 0; t <= last; ++t) {
    const double tau = static_cast<double>(t) / n;
    if (!(tau < model.lambda())) break;
    for (std::size_t c = 0; c < trajectory.classes.size(); ++c) {
      const auto& cl = trajectory.classes[c];
      const double limit = ode_solution(model, cl.j, cl.k, cl.theta, cl.l, tau);
      worst = std::max(worst, std::abs(static_cast<double>(trajectory.counter(t, c)) / n - limit));
    }
    for (const auto& cl : absent) worst = std::max(worst, ode_solution(model, cl.j, cl.k, cl.theta, cl.l, tau));
  }
  return worst;
}

}  // namespace contagion
