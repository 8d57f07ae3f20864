#pragma once

#include <cstdint>
#include <vector>

namespace dotcover {

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z) noexcept;

/// Counter-based generator. Stream (seed, stream) has key
///   k = mix64(seed ^ mix64(stream + 0x9E3779B97F4A7C15))
/// and its i-th output (i = 1, 2, ...) is mix64(k + i * 0x9E3779B97F4A7C15).
/// Every sample in the harness owns its own stream, so results do not depend
/// on how work is split across threads.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept;

  std::uint64_t next() noexcept;
  /// Uniform in [0, bound) by rejection; bound > 0.
  std::uint64_t uniform(std::uint64_t bound) noexcept;

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Stream id for sample `index` of size class `size` under check family `tag`.
std::uint64_t stream_id(std::uint64_t tag, std::uint64_t size, std::uint64_t index) noexcept;

/// Uniform k-subset of [0, universe), ascending (Floyd's algorithm).
std::vector<std::uint64_t> random_subset(CounterRng& rng, std::uint64_t universe, std::uint64_t k);

}  // namespace dotcover
