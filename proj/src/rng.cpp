#include "dotcover/rng.hpp"

#include <algorithm>
#include <set>

namespace dotcover {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
    : key_(mix64(seed ^ mix64(stream + kGolden))) {}

std::uint64_t CounterRng::next() noexcept {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

std::uint64_t CounterRng::uniform(std::uint64_t bound) noexcept {
  const std::uint64_t threshold = (0 - bound) % bound;
  while (true) {
    const std::uint64_t r = next();
    if (r >= threshold) return r % bound;
  }
}

std::uint64_t stream_id(std::uint64_t tag, std::uint64_t size, std::uint64_t index) noexcept {
  return mix64(mix64(tag) ^ (size * kGolden)) ^ index;
}

std::vector<std::uint64_t> random_subset(CounterRng& rng, std::uint64_t universe, std::uint64_t k) {
  k = std::min(k, universe);
  std::set<std::uint64_t> chosen;
  for (std::uint64_t j = universe - k; j < universe; ++j) {
    const std::uint64_t t = rng.uniform(j + 1);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  return {chosen.begin(), chosen.end()};
}

}  // namespace dotcover
