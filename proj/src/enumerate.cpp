#include "dotcover/enumerate.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace dotcover {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) noexcept {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(r);
}

BigInt binomial_exact(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::vector<std::uint64_t> colex_unrank(std::uint64_t n, std::uint64_t k, std::uint64_t rank) {
  if (rank >= binomial(n, k)) throw std::out_of_range("colex rank out of range");
  std::vector<std::uint64_t> out(k);
  std::uint64_t hi = n;
  for (std::uint64_t i = k; i-- > 0;) {
    // Largest c < hi with C(c, i + 1) <= rank.
    std::uint64_t c = hi - 1;
    while (binomial(c, i + 1) > rank) --c;
    out[i] = c;
    rank -= binomial(c, i + 1);
    hi = c;
  }
  return out;
}

std::uint64_t colex_rank(const std::vector<std::uint64_t>& subset) {
  std::uint64_t r = 0;
  for (std::size_t i = 0; i < subset.size(); ++i) r += binomial(subset[i], i + 1);
  return r;
}

ColexSubsets::ColexSubsets(std::uint64_t n, std::uint64_t k) : n_(n), cur_(k) {
  if (k > n) throw std::out_of_range("subset size exceeds universe");
  for (std::uint64_t i = 0; i < k; ++i) cur_[i] = i;
}

ColexSubsets::ColexSubsets(std::uint64_t n, std::uint64_t k, std::uint64_t rank)
    : n_(n), cur_(colex_unrank(n, k, rank)) {}

bool ColexSubsets::next() {
  const std::size_t k = cur_.size();
  for (std::size_t i = 0; i < k; ++i) {
    const std::uint64_t limit = i + 1 < k ? cur_[i + 1] : n_;
    if (cur_[i] + 1 < limit) {
      ++cur_[i];
      for (std::size_t j = 0; j < i; ++j) cur_[j] = j;
      return true;
    }
  }
  return false;
}

}  // namespace dotcover
