#include "contagion/rng.hpp"

namespace contagion {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Stream::Stream(std::uint64_t seed, StreamTag tag, std::uint64_t index) noexcept
    : key_(derive_seed(seed, tag, index)) {}

std::uint64_t Stream::below(std::uint64_t bound) noexcept {
  if (bound <= 1) return 0;
  auto x = (*this)();
  auto m = static_cast<unsigned __int128>(x) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      x = (*this)();
      m = static_cast<unsigned __int128>(x) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

std::vector<std::uint32_t> Stream::permutation(std::size_t size) {
  std::vector<std::uint32_t> out(size);
  std::iota(out.begin(), out.end(), 0u);
  shuffle(std::span<std::uint32_t>(out));
  return out;
}

std::uint64_t derive_seed(std::uint64_t master, StreamTag tag, std::uint64_t index) noexcept {
  auto h = mix64(master ^ 0x6a09e667f3bcc909ULL);
  h = mix64(h ^ static_cast<std::uint64_t>(tag));
  return mix64(h + index * 0xd1b54a32d192ed03ULL);
}

}  // namespace contagion
