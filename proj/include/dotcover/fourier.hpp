#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "dotcover/space.hpp"

namespace dotcover {

using Complex = std::complex<double>;

/// A complex-valued function on F_q^d, stored densely by flat index.
struct SpectralFn {
  Space space;
  std::vector<Complex> values;

  explicit SpectralFn(Space s) : space(std::move(s)), values(space.size()) {}
  SpectralFn(Space s, std::vector<Complex> v);

  static SpectralFn constant(Space s, Complex c);
  static SpectralFn delta(Space s, PointIndex at);

  Complex operator[](PointIndex x) const { return values[x]; }
  Complex& operator[](PointIndex x) { return values[x]; }
};

/// Absolute tolerance for a quantity accumulated from `terms` summands:
/// 1e-12 per term, never below 1e-9.
double accumulation_tolerance(std::uint64_t terms) noexcept;

/// fhat(m) = q^{-d} sum_x chi(-x.m) f(x). Factorized axis by axis, so the
/// cost is O(d q^{d+1}).
SpectralFn fourier_forward(const SpectralFn& f);

/// f(x) = sum_m chi(x.m) fhat(m); no normalization.
SpectralFn fourier_invert(const SpectralFn& fhat);

struct PlancherelSides {
  Complex lhs;  ///< sum_m fhat(m) conj(ghat(m))
  Complex rhs;  ///< q^{-d} sum_x f(x) conj(g(x))

  bool agrees(double tol = 1e-9) const;
};

PlancherelSides plancherel_check(const SpectralFn& f, const SpectralFn& g);

/// (f * g)(m) = sum_{y - y' = m} f(y) g(y').
SpectralFn convolve_diff(const SpectralFn& f, const SpectralFn& g);

/// Debug dump, one "flat re im" line per point in flat-index order.
void dump(const SpectralFn& f, std::ostream& os);

}  // namespace dotcover
