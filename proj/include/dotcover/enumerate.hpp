#pragma once

#include <cstdint>
#include <vector>

#include "dotcover/bigint.hpp"

namespace dotcover {

/// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k) noexcept;
BigInt binomial_exact(std::uint64_t n, std::uint64_t k);

/// k-subsets of [0, n) in colex order: subsets compare by their largest
/// differing element. The rank of c_0 < ... < c_{k-1} is sum C(c_i, i + 1).
class ColexSubsets {
 public:
  ColexSubsets(std::uint64_t n, std::uint64_t k);
  /// Starts at the subset with the given colex rank.
  ColexSubsets(std::uint64_t n, std::uint64_t k, std::uint64_t rank);

  const std::vector<std::uint64_t>& current() const noexcept { return cur_; }
  /// Advances; false once the last subset has been passed.
  bool next();

 private:
  std::uint64_t n_;
  std::vector<std::uint64_t> cur_;
};

std::vector<std::uint64_t> colex_unrank(std::uint64_t n, std::uint64_t k, std::uint64_t rank);
std::uint64_t colex_rank(const std::vector<std::uint64_t>& subset);

}  // namespace dotcover
