#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "contagion/cascade.hpp"
#include "contagion/limit_model.hpp"
#include "contagion/network.hpp"

namespace contagion {

/// Global half-edge labels: out-stubs (and in-stubs) are numbered 0..m-1 in
/// node order, then by local index within the node.
class StubLayout {
 public:
  explicit StubLayout(const DegreeSequence& degrees);

  std::size_t stub_count() const noexcept { return out_owner_.size(); }
  std::size_t first_out(NodeId i) const noexcept { return out_first_[i]; }
  std::size_t first_in(NodeId i) const noexcept { return in_first_[i]; }
  NodeId out_owner(std::size_t label) const noexcept { return out_owner_[label]; }
  NodeId in_owner(std::size_t label) const noexcept { return in_owner_[label]; }

 private:
  std::vector<std::size_t> out_first_;
  std::vector<std::size_t> in_first_;
  std::vector<NodeId> out_owner_;
  std::vector<NodeId> in_owner_;
};

/// A configuration: out-stub label s is matched to in-stub label match[s].
struct Multigraph {
  DegreeSequence degrees;
  std::vector<std::uint32_t> match;

  /// (source, target) per out-stub label.
  std::vector<std::pair<NodeId, NodeId>> edges() const;
  /// Throws `Error("invalid_multigraph")` if `match` is not a bijection of [0, m).
  void validate() const;
};

/// Uniform random matching; every one of the m! configurations is equally
/// likely. Throws `Error("unbalanced_degrees")`.
Multigraph configuration_match(const DegreeSequence& degrees, std::uint64_t seed);

/// No self-loop and no repeated ordered pair.
bool is_simple(const Multigraph& graph);

/// Fraction of `trials` independent configurations that are simple.
double simplicity_rate(const DegreeSequence& degrees, std::size_t trials, std::uint64_t seed);

/// Attaches weights[i][l] to node i's l-th out-stub. Self-loops and parallel
/// edges are kept (multigraph network). Throws `Error("invalid_argument")` on a
/// size mismatch.
FinancialNetwork weighted_overlay(const Multigraph& graph, const WeightLists& weights,
                                  std::vector<double> gammas, double recovery);

/// One contagion step of the half-edge algorithm.
struct HalfEdgeStep {
  std::uint32_t in_label;
  std::uint32_t out_label;
  NodeId partner;
  bool new_default;
};

/// State of the sequential algorithm when contagion stops (before the
/// leftover stubs are matched), plus the step log.
struct HalfEdgeProcess {
  std::vector<std::vector<std::uint32_t>> permutation;
  std::vector<double> remaining_capital;
  std::vector<char> defaulted;
  std::vector<char> out_red;
  std::vector<char> in_red;
  std::vector<HalfEdgeStep> steps;
  /// out_matched[s] is the in-stub matched to out-stub s during contagion
  /// steps, or -1.
  std::vector<std::int64_t> partial_match;
};

struct SequentialResult {
  Multigraph graph;
  std::vector<NodeId> final_set;
  HalfEdgeProcess process;
};

/// The sequential coupling algorithm. Exposure orders come from
/// Stream(seed, kPermutation, i), partner choices from Stream(seed, kPartner),
/// the leftover matching from Stream(seed, kCompletion).
///   1. uniform order tau_i per node;
///   2. D_0 = {gamma = 0};
///   3. while a defaulted node has a black in-stub: take the lowest such label,
///      pick a partner with probability proportional to its black out-stubs,
///      reveal its next weight in tau_i order and deduct (1-R) w; the partner
///      defaults when the accumulated loss exceeds its capital;
///   4. match the remaining out-stubs uniformly to the remaining in-stubs taken
///      in increasing label order.
SequentialResult sequential_cascade(const DegreeSequence& degrees, const WeightLists& weights,
                                    std::span<const double> gammas, double recovery, std::uint64_t seed);

/// (j, k, theta, l): solvent nodes of degree (j,k), threshold theta, with l red out-stubs.
struct CounterClass {
  std::uint32_t j;
  std::uint32_t k;
  std::uint32_t theta;
  std::uint32_t l;

  friend auto operator<=>(const CounterClass&, const CounterClass&) = default;
};

struct ThresholdClassCount {
  std::uint32_t j;
  std::uint32_t k;
  std::uint32_t theta;
  std::int64_t count;
};

struct MarkovTrajectory {
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<CounterClass> classes;
  /// N(j,k,theta) for every threshold value present, sentinel included.
  std::vector<ThresholdClassCount> initial_counts;
  /// counters[t * classes.size() + c] = S^{class c}(t), t = 0..last recorded step.
  std::vector<std::int64_t> counters;
  std::vector<std::int64_t> defaulted;          // D(t)
  std::vector<std::int64_t> defaulted_in_stubs; // D^-(t)
  /// Partner node chosen at step t + 1.
  std::vector<NodeId> partners;
  std::size_t stopping_time = 0;

  std::size_t steps_recorded() const noexcept { return defaulted.size(); }
  std::int64_t counter(std::size_t t, std::size_t c) const noexcept {
    return counters[t * classes.size() + c];
  }
};

/// Unweighted threshold process on the configuration model. With
/// `continue_past_stopping` the same transition law runs until t = m and D^-
/// goes negative; otherwise recording stops at T_n. Uses the same streams as
/// `sequential_cascade`, so with thresholds from `assign_thresholds(..., seed)`
/// both processes realize the same matching and default set.
MarkovTrajectory markov_trajectory(const DegreeSequence& degrees, const ThresholdAssignment& thresholds,
                                   std::uint64_t seed, bool continue_past_stopping = false);

/// sup over t <= T_n (and t/n < lambda) and all tracked classes of
/// |S(t)/n - s(t/n)| against the closed-form limit of `model`.
double sup_deviation(const MarkovTrajectory& trajectory, const LimitModel& model);

}  // namespace contagion
