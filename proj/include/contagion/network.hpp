#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace contagion {

using NodeId = std::uint32_t;

/// One entry of a node's exposure list: node `counterparty` owes `weight`.
struct Exposure {
  NodeId counterparty;
  double weight;
};

/// Reverse view of an exposure: `creditor` loses `weight` if the owner defaults.
struct Claim {
  NodeId creditor;
  double weight;
};

/// Directed weighted edge i -> j: i is exposed to j for `weight`.
struct EdgeSpec {
  NodeId source;
  NodeId target;
  double weight;

  friend bool operator==(const EdgeSpec&, const EdgeSpec&) = default;
};

struct DegreeSequence {
  std::vector<std::uint32_t> out;
  std::vector<std::uint32_t> in;

  std::size_t size() const noexcept { return out.size(); }
  /// Total number of edges; throws if the sequence is unbalanced.
  std::size_t edge_count() const;
  void validate() const;
};

/// Interbank exposure network with capital ratios and a global recovery rate.
/// Immutable after construction; exposure lists keep their input order because
/// threshold permutations index into them.
class FinancialNetwork {
 public:
  /// Node count is `gammas.size()`. Throws `Error("invalid_network")` on
  /// self-exposure (unless multigraph), duplicate ordered pairs (unless
  /// multigraph), non-positive weights, negative ratios or R outside [0,1).
  static FinancialNetwork build(std::span<const EdgeSpec> edges, std::vector<double> gammas,
                                double recovery, bool multigraph = false);

  std::size_t size() const noexcept { return gamma_.size(); }
  std::size_t edge_count() const noexcept { return exposures_.size(); }
  double recovery() const noexcept { return recovery_; }
  double loss_given_default() const noexcept { return 1.0 - recovery_; }
  bool multigraph() const noexcept { return multigraph_; }

  std::span<const Exposure> exposures(NodeId i) const noexcept {
    return {exposures_.data() + out_offset_[i], exposures_.data() + out_offset_[i + 1]};
  }
  std::span<const Claim> claims(NodeId j) const noexcept {
    return {claims_.data() + in_offset_[j], claims_.data() + in_offset_[j + 1]};
  }

  std::uint32_t out_degree(NodeId i) const noexcept {
    return static_cast<std::uint32_t>(out_offset_[i + 1] - out_offset_[i]);
  }
  std::uint32_t in_degree(NodeId j) const noexcept {
    return static_cast<std::uint32_t>(in_offset_[j + 1] - in_offset_[j]);
  }

  double gamma(NodeId i) const noexcept { return gamma_[i]; }
  std::span<const double> gammas() const noexcept { return gamma_; }
  /// Interbank assets A(i).
  double assets(NodeId i) const noexcept { return assets_[i]; }
  /// Capital c(i) = gamma(i) A(i).
  double capital(NodeId i) const noexcept { return capital_[i]; }

  DegreeSequence degrees() const;
  std::vector<EdgeSpec> edge_list() const;

  /// Same exposures with different capital ratios.
  FinancialNetwork with_gammas(std::vector<double> gammas) const;

 private:
  FinancialNetwork() = default;
  void finalize();

  std::vector<std::size_t> out_offset_;
  std::vector<Exposure> exposures_;
  std::vector<std::size_t> in_offset_;
  std::vector<Claim> claims_;
  std::vector<double> gamma_;
  std::vector<double> assets_;
  std::vector<double> capital_;
  double recovery_ = 0.0;
  bool multigraph_ = false;
};

}  // namespace contagion

namespace contagion {

/// Per-node exposure weights, indexed by local out-stub / exposure position.
using WeightLists = std::vector<std::vector<double>>;

/// Weight lists of an existing network, in exposure order.
WeightLists weight_lists(const FinancialNetwork& network);

}  // namespace contagion
