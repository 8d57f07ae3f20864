#include "dotcover/gf.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include "dotcover/error.hpp"

namespace dotcover {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotPrime: return "NotPrime";
    case ErrorCode::DegreeOutOfRange: return "DegreeOutOfRange";
    case ErrorCode::FieldTooLarge: return "FieldTooLarge";
    case ErrorCode::ReducibleModulus: return "ReducibleModulus";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SpectralMismatch: return "SpectralMismatch";
    case ErrorCode::BoundViolated: return "BoundViolated";
    case ErrorCode::ZeroDirection: return "ZeroDirection";
    case ErrorCode::OriginInSet: return "OriginInSet";
    case ErrorCode::IdentityViolated: return "IdentityViolated";
    case ErrorCode::BadArity: return "BadArity";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::BadEpsilon: return "BadEpsilon";
    case ErrorCode::NoProperSubfield: return "NoProperSubfield";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::BadSpec: return "BadSpec";
  }
  return "Unknown";
}

namespace {

using Poly = std::vector<std::uint32_t>;

// Strip trailing zero coefficients; the zero polynomial becomes empty.
void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
  std::int64_t t = 0, new_t = 1, r = p, new_r = a;
  while (new_r != 0) {
    std::int64_t quot = r / new_r;
    t = std::exchange(new_t, t - quot * new_t);
    r = std::exchange(new_r, r - quot * new_r);
  }
  return static_cast<std::uint32_t>((t % p + p) % p);
}

// Remainder of f modulo g over F_p; g must be nonzero after trimming.
Poly poly_mod(Poly f, Poly g, std::uint32_t p) {
  trim(f);
  trim(g);
  const std::uint64_t lead_inv = inv_mod(g.back(), p);
  while (f.size() >= g.size()) {
    const std::size_t shift = f.size() - g.size();
    const std::uint64_t factor = f.back() * lead_inv % p;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const std::uint64_t sub = factor * g[i] % p;
      f[shift + i] = static_cast<std::uint32_t>((f[shift + i] + p - sub) % p);
    }
    trim(f);
  }
  return f;
}

// a * b mod the monic modulus; a, b and the result have exactly n coefficients.
Poly mul_mod(const Poly& a, const Poly& b, const Poly& modulus, std::uint32_t p) {
  const std::size_t n = modulus.size() - 1;
  std::vector<std::uint64_t> prod(2 * n - 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < n; ++j) prod[i + j] = (prod[i + j] + std::uint64_t{a[i]} * b[j]) % p;
  }
  for (std::size_t k = prod.size(); k-- > n;) {
    const std::uint64_t c = prod[k];
    if (c == 0) continue;
    prod[k] = 0;
    for (std::size_t i = 0; i < n; ++i) {
      prod[k - n + i] = (prod[k - n + i] + (p - c) * modulus[i]) % p;
    }
  }
  Poly out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<std::uint32_t>(prod[i]);
  return out;
}

Poly pow_mod(Poly base, std::uint64_t e, const Poly& modulus, std::uint32_t p) {
  Poly result(modulus.size() - 1, 0);
  result[0] = 1;
  while (e != 0) {
    if (e & 1U) result = mul_mod(result, base, modulus, p);
    base = mul_mod(base, base, modulus, p);
    e >>= 1U;
  }
  return result;
}

Poly digits(std::uint32_t idx, std::uint32_t p, std::uint32_t n) {
  Poly out(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    out[i] = idx % p;
    idx /= p;
  }
  return out;
}

std::uint32_t pack(const Poly& c, std::uint32_t p) {
  std::uint32_t idx = 0;
  for (std::size_t i = c.size(); i-- > 0;) idx = idx * p + c[i];
  return idx;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t v) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t f = 2; f * f <= v; ++f) {
    if (v % f != 0) continue;
    out.push_back(f);
    while (v % f == 0) v /= f;
  }
  if (v > 1) out.push_back(v);
  return out;
}

bool is_one(const Poly& c) {
  if (c[0] != 1) return false;
  for (std::size_t i = 1; i < c.size(); ++i)
    if (c[i] != 0) return false;
  return true;
}

}  // namespace

bool is_prime(std::uint64_t v) noexcept {
  if (v < 2) return false;
  for (std::uint64_t f = 2; f * f <= v; ++f)
    if (v % f == 0) return false;
  return true;
}

bool is_irreducible(std::uint32_t p, std::span<const std::uint32_t> poly) {
  Poly f(poly.begin(), poly.end());
  trim(f);
  if (f.size() < 2 || f.back() != 1) return false;
  const std::size_t deg = f.size() - 1;
  // Every monic divisor candidate g = x^k + sum_{i<k} g_i x^i, k in [1, deg/2].
  for (std::size_t k = 1; 2 * k <= deg; ++k) {
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < k; ++i) count *= p;
    for (std::uint64_t lower = 0; lower < count; ++lower) {
      Poly g = digits(static_cast<std::uint32_t>(lower), p, static_cast<std::uint32_t>(k));
      g.push_back(1);
      if (poly_mod(f, g, p).empty()) return false;
    }
  }
  return true;
}

std::vector<std::uint32_t> least_irreducible(std::uint32_t p, std::uint32_t n) {
  std::uint64_t count = 1;
  for (std::uint32_t i = 0; i < n; ++i) count *= p;
  // Enumerate with c_0 as the most significant digit so iteration order is
  // lexicographic in (c_0, c_1, ..., c_{n-1}).
  for (std::uint64_t k = 0; k < count; ++k) {
    Poly f(n + 1, 0);
    std::uint64_t rest = k;
    for (std::uint32_t i = n; i-- > 0;) {
      f[i] = static_cast<std::uint32_t>(rest % p);
      rest /= p;
    }
    f[n] = 1;
    if (is_irreducible(p, f)) return f;
  }
  throw std::logic_error("no irreducible polynomial found");
}

FieldPtr build_field(std::uint32_t p, std::vector<std::uint32_t> modulus) {
  if (!is_prime(p)) throw Error(ErrorCode::NotPrime, std::to_string(p) + " is not prime");
  if (modulus.size() < 2 || modulus.back() != 1)
    throw Error(ErrorCode::ReducibleModulus, "modulus must be monic of degree >= 1");
  for (auto c : modulus)
    if (c >= p) throw Error(ErrorCode::ReducibleModulus, "modulus coefficient out of range");
  if (!is_irreducible(p, modulus))
    throw Error(ErrorCode::ReducibleModulus, "modulus is reducible over F_" + std::to_string(p));

  auto field = std::shared_ptr<Field>(new Field());
  Field& f = *field;
  f.p_ = p;
  f.n_ = static_cast<std::uint32_t>(modulus.size() - 1);
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < f.n_; ++i) q *= p;
  f.q_ = static_cast<std::uint32_t>(q);
  f.modulus_ = std::move(modulus);
  const std::uint32_t n = f.n_;
  const std::uint64_t order = q - 1;

  // Least-index generator of the multiplicative group.
  const auto factors = prime_factors(order);
  std::uint32_t gen = 0;
  for (std::uint32_t cand = 1; cand < q && gen == 0; ++cand) {
    const Poly c = digits(cand, p, n);
    bool primitive = true;
    for (auto r : factors) {
      if (is_one(pow_mod(c, order / r, f.modulus_, p))) {
        primitive = false;
        break;
      }
    }
    if (primitive) gen = cand;
  }
  if (gen == 0) throw std::logic_error("no multiplicative generator");
  f.generator_ = Elem{gen};

  f.log_.assign(q, 0);
  f.exp_.assign(2 * order, 0);
  const Poly g = digits(gen, p, n);
  Poly cur(n, 0);
  cur[0] = 1;
  for (std::uint64_t k = 0; k < order; ++k) {
    const std::uint32_t idx = pack(cur, p);
    f.exp_[k] = idx;
    f.exp_[k + order] = idx;
    f.log_[idx] = static_cast<std::uint32_t>(k);
    cur = mul_mod(cur, g, f.modulus_, p);
  }

  f.neg_.resize(q);
  for (std::uint32_t a = 0; a < q; ++a) {
    Poly c = digits(a, p, n);
    for (auto& ci : c) ci = (p - ci) % p;
    f.neg_[a] = pack(c, p);
  }
  f.inv_.assign(q, 0);
  for (std::uint32_t a = 1; a < q; ++a) f.inv_[a] = f.exp_[(order - f.log_[a]) % order];

  if (q <= kFullTableLimit) {
    f.add_table_.resize(q * q);
    f.mul_table_.resize(q * q);
    for (std::uint32_t a = 0; a < q; ++a) {
      for (std::uint32_t b = 0; b < q; ++b) {
        f.add_table_[std::size_t{a} * q + b] = f.add_slow(Elem{a}, Elem{b}).idx;
        f.mul_table_[std::size_t{a} * q + b] =
            (a == 0 || b == 0) ? 0 : f.exp_[std::size_t{f.log_[a]} + f.log_[b]];
      }
    }
  }

  f.trace_.resize(q);
  for (std::uint32_t a = 0; a < q; ++a) {
    Elem acc{0};
    Elem term{a};
    for (std::uint32_t i = 0; i < n; ++i) {
      acc = f.add(acc, term);
      term = f.frobenius(term);
    }
    if (acc.idx >= p) throw std::logic_error("trace left the prime field");
    f.trace_[a] = acc.idx;
  }
  // Linearity: Tr(sum c_i x^i) = sum c_i Tr(x^i) for every element.
  std::vector<std::uint32_t> basis_trace(n);
  std::uint32_t basis = 1;
  for (std::uint32_t i = 0; i < n; ++i, basis *= p) basis_trace[i] = f.trace_[basis];
  std::vector<bool> attained(p, false);
  for (std::uint32_t a = 0; a < q; ++a) {
    const Poly c = digits(a, p, n);
    std::uint64_t expect = 0;
    for (std::uint32_t i = 0; i < n; ++i) expect += std::uint64_t{c[i]} * basis_trace[i];
    if (expect % p != f.trace_[a]) throw std::logic_error("trace is not F_p-linear");
    attained[f.trace_[a]] = true;
  }
  for (bool hit : attained)
    if (!hit) throw std::logic_error("trace is not surjective");

  f.roots_.resize(p);
  for (std::uint32_t k = 0; k < p; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(p);
    f.roots_[k] = std::polar(1.0, angle);
  }
  return field;
}

FieldPtr make_field(std::uint64_t p, std::int64_t n, std::uint64_t cap) {
  if (!is_prime(p)) throw Error(ErrorCode::NotPrime, std::to_string(p) + " is not prime");
  if (n < 1 || n > 64)
    throw Error(ErrorCode::DegreeOutOfRange, "extension degree " + std::to_string(n) + " out of range");
  std::uint64_t q = 1;
  for (std::int64_t i = 0; i < n; ++i) {
    if (q > cap / p)
      throw Error(ErrorCode::FieldTooLarge, std::to_string(p) + "^" + std::to_string(n) +
                                                " exceeds the cap of " + std::to_string(cap));
    q *= p;
  }
  if (q > cap || q > kDefaultFieldCap * 4096)
    throw Error(ErrorCode::FieldTooLarge, "field size " + std::to_string(q) + " exceeds the cap");
  const auto prime = static_cast<std::uint32_t>(p);
  return build_field(prime, least_irreducible(prime, static_cast<std::uint32_t>(n)));
}

FieldPtr make_field_with_modulus(std::uint32_t p, std::vector<std::uint32_t> modulus) {
  return build_field(p, std::move(modulus));
}

Elem Field::add_slow(Elem a, Elem b) const noexcept {
  if (n_ == 1) return Elem{(a.idx + b.idx) % p_};
  std::uint32_t x = a.idx, y = b.idx, out = 0, scale = 1;
  for (std::uint32_t i = 0; i < n_; ++i) {
    out += ((x % p_ + y % p_) % p_) * scale;
    x /= p_;
    y /= p_;
    scale *= p_;
  }
  return Elem{out};
}

Elem Field::inv(Elem a) const {
  if (a.idx == 0) throw Error(ErrorCode::DivisionByZero, "inverse of zero");
  return Elem{inv_[a.idx]};
}

Elem Field::pow(Elem a, std::uint64_t e) const noexcept {
  if (e == 0) return one();
  if (a.idx == 0) return zero();
  const std::uint64_t order = q_ - 1;
  return Elem{exp_[(std::uint64_t{log_[a.idx]} * (e % order)) % order]};
}

Elem Field::frobenius(Elem a) const noexcept {
  if (a.idx == 0) return a;
  const std::uint64_t order = q_ - 1;
  return Elem{exp_[(std::uint64_t{log_[a.idx]} * p_) % order]};
}

std::vector<std::uint32_t> Field::coefficients(Elem a) const { return digits(a.idx, p_, n_); }

Elem Field::from_coefficients(std::span<const std::uint32_t> coeffs) const {
  Poly c(n_, 0);
  for (std::size_t i = 0; i < coeffs.size() && i < n_; ++i) c[i] = coeffs[i] % p_;
  return Elem{pack(c, p_)};
}

Elem multiplicative_generator(const Field& field) { return field.generator(); }

std::uint64_t multiplicative_order(const Field& field, Elem a) {
  if (a.idx == 0) throw Error(ErrorCode::DivisionByZero, "zero has no multiplicative order");
  std::uint64_t k = 1;
  for (Elem cur = a; cur != field.one(); cur = field.mul(cur, a)) ++k;
  return k;
}

}  // namespace dotcover
