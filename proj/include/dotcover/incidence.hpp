#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "dotcover/bigint.hpp"
#include "dotcover/fourier.hpp"
#include "dotcover/space.hpp"

namespace dotcover {

/// A subset E of F_q^d as a dense bit-vector over flat indices.
class PointSet {
 public:
  explicit PointSet(Space space);
  static PointSet from_points(Space space, std::span<const PointIndex> points);
  static PointSet full(Space space);

  const Space& space() const noexcept { return space_; }
  bool contains(PointIndex x) const { return bits_.test(x); }
  void insert(PointIndex x) { bits_.set(x); }
  void erase(PointIndex x) { bits_.reset(x); }
  std::uint64_t size() const { return bits_.count(); }
  bool empty() const { return bits_.none(); }
  bool contains_origin() const { return bits_.test(0); }

  /// Members in increasing flat-index order.
  std::vector<PointIndex> members() const;
  const boost::dynamic_bitset<std::uint64_t>& bits() const noexcept { return bits_; }

  friend bool operator==(const PointSet& a, const PointSet& b) {
    return a.space_ == b.space_ && a.bits_ == b.bits_;
  }

 private:
  Space space_;
  boost::dynamic_bitset<std::uint64_t> bits_;
};

PointSet strip_origin(PointSet e);

/// Real indicator function of E.
SpectralFn indicator(const PointSet& e);

/// nu(t) = #{(x, y) in E x E : x.y = t}, indexed by t.idx.
struct NuProfile {
  std::uint32_t q = 0;
  std::uint64_t set_size = 0;
  std::vector<std::uint64_t> nu;

  std::uint64_t total() const;
  /// Exact numerator of R(t) = nu(t) - |E|^2 / q, i.e. q nu(t) - |E|^2.
  BigInt remainder_numerator(std::uint32_t t) const;

  friend bool operator==(const NuProfile&, const NuProfile&) = default;
};

/// Pair enumeration with a histogram over t. `workers` > 1 shards the outer
/// loop; per-worker histograms are merged by addition.
NuProfile nu_bruteforce(const PointSet& e, unsigned workers = 1);

/// Character-sum route: nu(t) = q^{-1} sum_s chi(-s t) S(s), with
/// S(s) = sum_{x, y in E} chi(s x.y) = q^d sum_{x in E} Ehat(-s x).
/// Throws SpectralMismatch if any entry is further than 1e-6 from an
/// integer, the mass differs from |E|^2, or (when |E|^2 <= 10^8) the entry
/// at t = 0 disagrees with a direct count.
NuProfile nu_spectral(const PointSet& e);

/// Brute force below |E|^2 = 10^8 pairs, the character-sum route above.
NuProfile nu_profile(const PointSet& e, unsigned workers = 1);

/// Writes "t_index,nu,r_numerator" CSV.
void write_csv(const NuProfile& profile, std::ostream& os);

/// Which t the remainder bound is asserted for. The bound is only valid for
/// t != 0 in general: sets whose points are pairwise orthogonal (an isotropic
/// line, or any set holding the origin when d = 1) push nu(0) above it.
enum class RemainderScope { AllT, NonzeroT };

struct RemainderReport {
  BigInt bound;              ///< |E|^2 q^{d+1}
  BigInt worst_square;       ///< max over checked t of (q nu(t) - |E|^2)^2
  std::uint32_t worst_t = 0;
  double sharpness = 0.0;    ///< worst_square / bound, in [0, 1]
  BigInt zero_square;        ///< (q nu(0) - |E|^2)^2, always reported
  double zero_ratio = 0.0;   ///< zero_square / bound; may exceed 1
};

/// Checks (q nu(t) - |E|^2)^2 <= |E|^2 q^{d+1}, the squared form of
/// |R(t)| <= |E| q^{(d-1)/2}, for every t in scope. Throws BoundViolated on
/// the first failing t.
RemainderReport remainder_bound_check(const PointSet& e, const NuProfile& profile,
                                      RemainderScope scope = RemainderScope::AllT);
RemainderReport remainder_bound_check(const PointSet& e, RemainderScope scope = RemainderScope::AllT);

/// (R_t f)(x) = sum_{y : x.y = t} f(y).
SpectralFn rotating_planes_apply(const SpectralFn& f, Elem t);

/// |E cap l_y| for the line {s y : s in F_q}, origin included. Throws ZeroDirection.
std::uint64_t line_intersection(const PointSet& e, PointIndex y);
std::uint64_t line_intersection(const PointSet& e, std::span<const Elem> y);

/// Canonical direction of each line through the origin: the least flat
/// index among its nonzero points. Ascending order.
std::vector<PointIndex> canonical_directions(const Space& space);

struct LineMax {
  std::uint64_t count = 0;
  PointIndex direction = 0;
};

/// max over lines through the origin of |E cap l_y|, scanning one canonical
/// direction per line. Ties resolve to the smallest canonical direction.
LineMax max_line_intersection(const PointSet& e);

/// F(m) = |E cap m^perp| as a real-valued function; F(0) = |E|.
SpectralFn hyperplane_sum(const PointSet& e);

/// Exact integer form of hyperplane_sum.
std::vector<std::uint64_t> hyperplane_counts(const PointSet& e);

struct IdentityReport {
  double max_error = 0.0;       ///< max_k |lhs(k) - rhs(k)|
  double max_rel_error = 0.0;   ///< max_k |lhs - rhs| / max(1, |rhs|)
  PointIndex worst_k = 0;
};

/// Relative tolerance for the spectral identities.
inline constexpr double kIdentityTolerance = 1e-8;

/// Fhat(k) = q^{-1} |E cap l_k| for k != 0 and q^{-1} |E| at k = 0.
/// Throws OriginInSet, IdentityViolated.
IdentityReport verify_hatF_identity(const PointSet& e);

/// Ghat(k) = q^d |Ehat(k)|^2 for G = E * E. Throws IdentityViolated.
IdentityReport verify_hatG_identity(const PointSet& e);

struct SecondMomentReport {
  BigInt sum_nu_squared;   ///< sum_t nu(t)^2
  BigInt fg_bound;         ///< |E| sum_m F(m) G(m), the Cauchy-Schwarz stage
  BigInt lhs;              ///< q sum_t nu(t)^2
  BigInt rhs;              ///< M |E|^2 q^d + |E|^4
  std::uint64_t max_line = 0;
  bool fg_stage_holds = false;
  bool holds = false;
};

/// q sum_t nu(t)^2 <= M |E|^2 q^d + |E|^4 with M = max line intersection.
/// Throws OriginInSet.
SecondMomentReport second_moment_check(const PointSet& e, const NuProfile& profile);
SecondMomentReport second_moment_check(const PointSet& e);

}  // namespace dotcover
