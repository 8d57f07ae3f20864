#pragma once

#include <complex>
#include <compare>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace dotcover {

/// Element of GF(p^n). The index packs the coefficient vector
/// (c_0, ..., c_{n-1}) of the polynomial representative as sum c_i p^i,
/// so 0 is the additive and 1 the multiplicative identity.
struct Elem {
  std::uint32_t idx = 0;

  constexpr Elem() = default;
  constexpr explicit Elem(std::uint32_t i) : idx(i) {}

  friend constexpr auto operator<=>(Elem, Elem) = default;
};

inline constexpr std::uint64_t kDefaultFieldCap = std::uint64_t{1} << 20;

/// Fields at or below this size carry full q x q addition and
/// multiplication tables; larger ones use log/antilog tables.
inline constexpr std::uint64_t kFullTableLimit = 4096;

class Field;
using FieldPtr = std::shared_ptr<const Field>;

/// A fully tabulated finite field GF(p^n). Immutable after construction.
class Field {
 public:
  std::uint32_t p() const noexcept { return p_; }
  std::uint32_t n() const noexcept { return n_; }
  std::uint32_t q() const noexcept { return q_; }
  bool is_prime_field() const noexcept { return n_ == 1; }

  /// Monic modulus, constant coefficient first (n + 1 entries).
  const std::vector<std::uint32_t>& modulus() const noexcept { return modulus_; }

  Elem zero() const noexcept { return Elem{0}; }
  Elem one() const noexcept { return Elem{1}; }

  Elem add(Elem a, Elem b) const noexcept {
    if (!add_table_.empty()) return Elem{add_table_[std::size_t{a.idx} * q_ + b.idx]};
    return add_slow(a, b);
  }
  Elem neg(Elem a) const noexcept { return Elem{neg_[a.idx]}; }
  Elem sub(Elem a, Elem b) const noexcept { return add(a, neg(b)); }
  Elem mul(Elem a, Elem b) const noexcept {
    if (!mul_table_.empty()) return Elem{mul_table_[std::size_t{a.idx} * q_ + b.idx]};
    if (a.idx == 0 || b.idx == 0) return Elem{0};
    return Elem{exp_[std::size_t{log_[a.idx]} + log_[b.idx]]};
  }
  Elem inv(Elem a) const;
  Elem pow(Elem a, std::uint64_t e) const noexcept;

  /// a^p.
  Elem frobenius(Elem a) const noexcept;

  /// Absolute trace Tr_{F_q/F_p}(a), as a value in [0, p).
  std::uint32_t trace(Elem a) const noexcept { return trace_[a.idx]; }

  /// Canonical additive character exp(2 pi i Tr(a) / p).
  std::complex<double> chi(Elem a) const noexcept { return roots_[trace_[a.idx]]; }

  /// exp(2 pi i k / p) for k in [0, p).
  std::complex<double> root_of_unity(std::uint32_t k) const noexcept { return roots_[k]; }

  /// Least-index element of multiplicative order q - 1.
  Elem generator() const noexcept { return generator_; }

  /// Discrete log base generator(); requires a != 0.
  std::uint32_t log(Elem a) const noexcept { return log_[a.idx]; }
  Elem exp(std::uint64_t k) const noexcept { return Elem{exp_[k % (q_ - 1)]}; }

  std::vector<std::uint32_t> coefficients(Elem a) const;
  Elem from_coefficients(std::span<const std::uint32_t> coeffs) const;

  /// Embeds an integer of F_p (0 <= k < p) into the field.
  Elem from_prime(std::uint32_t k) const noexcept { return Elem{k % p_}; }

 private:
  friend FieldPtr build_field(std::uint32_t p, std::vector<std::uint32_t> modulus);

  Field() = default;
  Elem add_slow(Elem a, Elem b) const noexcept;

  std::uint32_t p_ = 0;
  std::uint32_t n_ = 0;
  std::uint32_t q_ = 0;
  std::vector<std::uint32_t> modulus_;
  std::vector<std::uint32_t> add_table_;
  std::vector<std::uint32_t> mul_table_;
  std::vector<std::uint32_t> neg_;
  std::vector<std::uint32_t> inv_;
  std::vector<std::uint32_t> log_;
  std::vector<std::uint32_t> exp_;  // 2(q-1) entries so log sums need no reduction
  std::vector<std::uint32_t> trace_;
  std::vector<std::complex<double>> roots_;
  Elem generator_;
};

bool is_prime(std::uint64_t v) noexcept;

/// Irreducibility over F_p by trial division against every monic polynomial
/// of degree <= deg/2. Coefficients constant-term first; must be monic.
bool is_irreducible(std::uint32_t p, std::span<const std::uint32_t> poly);

/// Lexicographically least monic irreducible of degree n over F_p, comparing
/// the constant coefficient first.
std::vector<std::uint32_t> least_irreducible(std::uint32_t p, std::uint32_t n);

/// GF(p^n) over the least irreducible modulus.
/// Throws NotPrime, DegreeOutOfRange, FieldTooLarge.
FieldPtr make_field(std::uint64_t p, std::int64_t n, std::uint64_t cap = kDefaultFieldCap);

/// Builds over a caller-chosen modulus. Only used to exercise the
/// irreducibility guard; throws ReducibleModulus for a bad modulus.
FieldPtr make_field_with_modulus(std::uint32_t p, std::vector<std::uint32_t> modulus);

Elem multiplicative_generator(const Field& field);

/// Order of a in the multiplicative group (a != 0), by brute force.
std::uint64_t multiplicative_order(const Field& field, Elem a);

}  // namespace dotcover
