#include "dotcover/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "dotcover/error.hpp"

namespace dotcover {

namespace {

constexpr std::uint32_t kKernelTableLimit = 1024;

void require_same_space(const SpectralFn& f, const SpectralFn& g) {
  if (!(f.space == g.space)) throw Error(ErrorCode::DimensionMismatch, "functions live on different spaces");
}

// One q-point character sum along every line parallel to each axis in turn.
// sign = -1 gives the forward kernel chi(-x m), +1 the inverse kernel.
std::vector<Complex> axis_transform(const Space& space, std::vector<Complex> values, int sign) {
  const Field& field = space.field();
  const std::uint32_t q = field.q();
  const std::uint32_t p = field.p();

  auto kernel_row = [&](std::uint32_t x, Complex* row) {
    for (std::uint32_t m = 0; m < q; ++m) {
      const std::uint32_t tr = field.trace(field.mul(Elem{x}, Elem{m}));
      row[m] = field.root_of_unity(sign < 0 ? (p - tr) % p : tr);
    }
  };
  // kernel[x * q + m] = chi(sign * x m), tabulated once per call when it fits.
  const bool tabulate = q <= kKernelTableLimit;
  std::vector<Complex> kernel(tabulate ? std::size_t{q} * q : q);
  if (tabulate)
    for (std::uint32_t x = 0; x < q; ++x) kernel_row(x, &kernel[std::size_t{x} * q]);

  std::vector<Complex> line_in(q), line_out(q);
  for (int axis = 0; axis < space.dim(); ++axis) {
    const std::uint64_t stride = space.stride(axis);
    const std::uint64_t block = stride * q;
    for (std::uint64_t base = 0; base < space.size(); base += block) {
      for (std::uint64_t off = 0; off < stride; ++off) {
        const std::uint64_t start = base + off;
        for (std::uint32_t x = 0; x < q; ++x) line_in[x] = values[start + x * stride];
        std::fill(line_out.begin(), line_out.end(), Complex{});
        for (std::uint32_t x = 0; x < q; ++x) {
          const Complex v = line_in[x];
          if (v == Complex{}) continue;
          const Complex* row = &kernel[0];
          if (tabulate) {
            row = &kernel[std::size_t{x} * q];
          } else {
            kernel_row(x, kernel.data());
          }
          for (std::uint32_t m = 0; m < q; ++m) line_out[m] += row[m] * v;
        }
        for (std::uint32_t m = 0; m < q; ++m) values[start + m * stride] = line_out[m];
      }
    }
  }
  return values;
}

}  // namespace

SpectralFn::SpectralFn(Space s, std::vector<Complex> v) : space(std::move(s)), values(std::move(v)) {
  if (values.size() != space.size())
    throw Error(ErrorCode::DimensionMismatch, "value array length must be q^d");
}

SpectralFn SpectralFn::constant(Space s, Complex c) {
  SpectralFn f(std::move(s));
  std::fill(f.values.begin(), f.values.end(), c);
  return f;
}

SpectralFn SpectralFn::delta(Space s, PointIndex at) {
  SpectralFn f(std::move(s));
  f.values.at(at) = 1.0;
  return f;
}

double accumulation_tolerance(std::uint64_t terms) noexcept {
  return std::max(1e-9, 1e-12 * static_cast<double>(terms));
}

SpectralFn fourier_forward(const SpectralFn& f) {
  auto out = axis_transform(f.space, f.values, -1);
  const double norm = 1.0 / static_cast<double>(f.space.size());
  for (auto& v : out) v *= norm;
  return SpectralFn(f.space, std::move(out));
}

SpectralFn fourier_invert(const SpectralFn& fhat) {
  return SpectralFn(fhat.space, axis_transform(fhat.space, fhat.values, +1));
}

bool PlancherelSides::agrees(double tol) const { return std::abs(lhs - rhs) <= tol * (1.0 + std::abs(rhs)); }

PlancherelSides plancherel_check(const SpectralFn& f, const SpectralFn& g) {
  require_same_space(f, g);
  const SpectralFn fh = fourier_forward(f);
  const SpectralFn gh = fourier_forward(g);
  PlancherelSides sides{};
  for (std::size_t m = 0; m < fh.values.size(); ++m) sides.lhs += fh.values[m] * std::conj(gh.values[m]);
  for (std::size_t x = 0; x < f.values.size(); ++x) sides.rhs += f.values[x] * std::conj(g.values[x]);
  sides.rhs /= static_cast<double>(f.space.size());
  return sides;
}

SpectralFn convolve_diff(const SpectralFn& f, const SpectralFn& g) {
  require_same_space(f, g);
  const Space& space = f.space;
  std::vector<PointIndex> g_support;
  for (PointIndex y = 0; y < space.size(); ++y)
    if (g.values[y] != Complex{}) g_support.push_back(y);

  SpectralFn out(space);
  for (PointIndex y = 0; y < space.size(); ++y) {
    const Complex fy = f.values[y];
    if (fy == Complex{}) continue;
    for (PointIndex yp : g_support) out.values[space.sub(y, yp)] += fy * g.values[yp];
  }
  return out;
}

void dump(const SpectralFn& f, std::ostream& os) {
  char buf[96];
  for (std::size_t x = 0; x < f.values.size(); ++x) {
    std::snprintf(buf, sizeof buf, "%zu %.17g %.17g\n", x, f.values[x].real(), f.values[x].imag());
    os << buf;
  }
}

}  // namespace dotcover
