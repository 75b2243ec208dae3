#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

namespace contagion {

/// Purpose tags for stream derivation. Values are part of the reproducibility
/// contract: changing one changes every stream drawn under it.
enum class StreamTag : std::uint64_t {
  kPermutation = 0x7065726d,   // per-node exposure orders
  kPartner = 0x70617274,       // half-edge partner selection
  kCompletion = 0x636f6d70,    // leftover matching in the sequential algorithm
  kMatching = 0x6d617463,      // plain configuration matching
  kDegrees = 0x64656772,
  kEndpoints = 0x656e6470,
  kExposures = 0x6578706f,
  kSeeds = 0x73656564,
  kMeasure = 0x6d656173,       // Monte Carlo threshold estimation
  kTrial = 0x74726961,
  kGenerator = 0x67656e65,
  kSample = 0x73616d70,
};

std::uint64_t mix64(std::uint64_t x) noexcept;

/// SplitMix64 in counter form: output k is mix64(key + k * golden).
/// A stream is addressed by (master seed, purpose tag, index), so draws do not
/// depend on thread scheduling or on how many values other streams consumed.
class Stream {
 public:
  using result_type = std::uint64_t;

  Stream(std::uint64_t seed, StreamTag tag, std::uint64_t index = 0) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    counter_ += kGolden;
    return mix64(key_ + counter_);
  }

  /// Uniform on [0,1), 53-bit resolution.
  double uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  /// Uniform on (0,1); safe for log and negative powers.
  double uniform_open() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Unbiased integer in [0, bound) (Lemire's multiply-shift with rejection).
  std::uint64_t below(std::uint64_t bound) noexcept;

  bool bernoulli(double p) noexcept { return uniform() < p; }

  template <typename T>
  void shuffle(std::span<T> values) noexcept {
    for (std::size_t i = values.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

  /// Uniform permutation of [0, size).
  std::vector<std::uint32_t> permutation(std::size_t size);

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Seed for an independent sub-experiment, e.g. trial t of a sweep.
std::uint64_t derive_seed(std::uint64_t master, StreamTag tag, std::uint64_t index) noexcept;

}  // namespace contagion
