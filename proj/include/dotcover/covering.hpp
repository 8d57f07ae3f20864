#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "dotcover/bigint.hpp"
#include "dotcover/gf.hpp"
#include "dotcover/incidence.hpp"

namespace dotcover {

/// A subset of F_q as a bit-vector over element indices.
class ScalarSet {
 public:
  explicit ScalarSet(FieldPtr field);
  static ScalarSet from_elems(FieldPtr field, std::span<const Elem> elems);
  static ScalarSet from_indices(FieldPtr field, std::span<const std::uint32_t> idx);
  static ScalarSet full(FieldPtr field);

  const Field& field() const noexcept { return *field_; }
  const FieldPtr& field_ptr() const noexcept { return field_; }
  bool contains(Elem a) const { return bits_.test(a.idx); }
  void insert(Elem a) { bits_.set(a.idx); }
  void erase(Elem a) { bits_.reset(a.idx); }
  std::uint64_t size() const { return bits_.count(); }
  bool empty() const { return bits_.none(); }
  std::vector<Elem> members() const;
  bool is_subset_of(const ScalarSet& other) const { return bits_.is_subset_of(other.bits_); }
  const boost::dynamic_bitset<std::uint64_t>& bits() const noexcept { return bits_; }

  friend bool operator==(const ScalarSet& a, const ScalarSet& b) {
    return a.field_ == b.field_ && a.bits_ == b.bits_;
  }

 private:
  friend ScalarSet sumset(const ScalarSet& s, const ScalarSet& t);

  FieldPtr field_;
  boost::dynamic_bitset<std::uint64_t> bits_;
};

/// A^2 = {a a' : a, a' in A}.
ScalarSet product_set(const ScalarSet& a);
/// A.B = {a b : a in A, b in B}.
ScalarSet product_set(const ScalarSet& a, const ScalarSet& b);
/// S + T under field addition.
ScalarSet sumset(const ScalarSet& s, const ScalarSet& t);
/// S + ... + S (d copies). Throws BadArity for d < 1.
ScalarSet iterated_sumset(const ScalarSet& s, int d);
/// dA^2 = A^2 + ... + A^2 (d copies).
ScalarSet dA2(const ScalarSet& a, int d);
/// cA = {c a : a in A}.
ScalarSet dilate(const ScalarSet& a, Elem c);

/// E = A x ... x A in F_q^d.
PointSet cartesian_power(const ScalarSet& a, int d);

/// {x.y : x, y in E}.
ScalarSet dot_product_set(const PointSet& e);

struct UnitCoverage {
  bool covers = false;
  std::vector<Elem> missing;  ///< uncovered nonzero elements, ascending
  bool contains_zero = false;
};

UnitCoverage covers_units(const ScalarSet& s);

/// |A| > q^{1/2 + 1/(2d)}, tested as |A|^{2d} > q^{d+1}. Equality is "not met".
bool sumset_cover_threshold(std::uint64_t set_size, std::uint32_t q, int d);
bool sumset_cover_threshold(const ScalarSet& a, int d);

/// |E| > q^{(d+1)/2}, tested as |E|^2 > q^{d+1}.
bool dot_cover_threshold(const PointSet& e);

struct CoverageVerdict {
  std::uint64_t base_size = 0;  ///< |A| (after any stripping) or |E|
  std::uint64_t set_size = 0;   ///< |dA^2|, |{x.y}|, or |sum A_j.B_j|
  UnitCoverage coverage;
  bool threshold_met = false;
  BigInt lhs;                   ///< exact instantiated inequality lhs >= rhs
  BigInt rhs;
  bool inequality_holds = false;
  std::uint64_t max_line = 0;
  bool stripped_zero = false;
  double c_size = 0.0;               ///< diagnostic only
  double implied_proportion = 0.0;   ///< C^{2-1/d} / (C^{2-1/d} + 1), diagnostic only
  double ratio = 0.0;                ///< prod |A_j||B_j| / q^{d+1} for the bilinear form
};

/// |{x.y}| (M q^d + |E|^2) >= q |E|^2 with M the measured max line
/// intersection. Throws OriginInSet.
CoverageVerdict dot_set_lower_bound_check(const PointSet& e);

/// The lower bound specialised to E = (A \ {0})^d with M <= |A \ {0}|:
/// |dA'^2| (|A'| q^d + |A'|^{2d}) >= q |A'|^{2d}. A zero in A is stripped and
/// flagged in the verdict. Throws BadArity.
CoverageVerdict positive_proportion_check(const ScalarSet& a, int d);

/// A_1.B_1 + ... + A_d.B_d and whether it covers F_q^*. threshold_met is
/// prod |A_j||B_j| > q^{d+1}. Throws ArityMismatch.
CoverageVerdict bilinear_cover(std::span<const ScalarSet> as, std::span<const ScalarSet> bs);

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;
};

/// Parses "a/b", an integer, or a finite decimal ("0.125") exactly.
/// Throws BadEpsilon on malformed input.
Rational parse_rational(std::string_view text);

struct DOfEps {
  std::int64_t d_cover = 0;       ///< ceil(1 / (2 eps))
  std::int64_t d_proportion = 0;  ///< ceil(1/2 + 1 / (4 eps))
};

/// Throws BadEpsilon unless 0 < eps <= 1/2.
DOfEps d_of_eps(Rational eps);

}  // namespace dotcover

namespace dotcover {

/// The subfield {a : a^{p^k} = a} of size p^k; k must divide n.
ScalarSet subfield(const FieldPtr& field, std::uint32_t k);

/// The subfield of size sqrt(q). Throws NoProperSubfield when n is odd.
ScalarSet square_root_subfield(const FieldPtr& field);

/// The multiplicative subgroup of order e; e must divide q - 1.
ScalarSet multiplicative_subgroup(const FieldPtr& field, std::uint64_t e);

}  // namespace dotcover
