#include "dotcover/covering.hpp"

#include <cctype>
#include <cmath>
#include <numeric>
#include <string>

#include "dotcover/error.hpp"

namespace dotcover {

ScalarSet::ScalarSet(FieldPtr field) : field_(std::move(field)), bits_(field_->q()) {}

ScalarSet ScalarSet::from_elems(FieldPtr field, std::span<const Elem> elems) {
  ScalarSet s(std::move(field));
  for (auto a : elems) s.insert(a);
  return s;
}

ScalarSet ScalarSet::from_indices(FieldPtr field, std::span<const std::uint32_t> idx) {
  ScalarSet s(std::move(field));
  for (auto i : idx) s.insert(Elem{i});
  return s;
}

ScalarSet ScalarSet::full(FieldPtr field) {
  ScalarSet s(std::move(field));
  s.bits_.set();
  return s;
}

std::vector<Elem> ScalarSet::members() const {
  std::vector<Elem> out;
  out.reserve(size());
  for (auto i = bits_.find_first(); i != boost::dynamic_bitset<std::uint64_t>::npos; i = bits_.find_next(i))
    out.emplace_back(static_cast<std::uint32_t>(i));
  return out;
}

ScalarSet product_set(const ScalarSet& a) { return product_set(a, a); }

ScalarSet product_set(const ScalarSet& a, const ScalarSet& b) {
  const Field& field = a.field();
  ScalarSet out(a.field_ptr());
  const auto bm = b.members();
  for (auto x : a.members())
    for (auto y : bm) out.insert(field.mul(x, y));
  return out;
}

ScalarSet sumset(const ScalarSet& s, const ScalarSet& t) {
  const Field& field = s.field();
  ScalarSet out(s.field_ptr());
  if (field.is_prime_field()) {
    // Prime fields: S + T is the union of T rotated by each a in S.
    const std::size_t q = field.q();
    for (auto a : s.members()) {
      if (a.idx == 0) {
        out.bits_ |= t.bits_;
      } else {
        out.bits_ |= (t.bits_ << a.idx) | (t.bits_ >> (q - a.idx));
      }
    }
    return out;
  }
  const auto tm = t.members();
  for (auto a : s.members())
    for (auto b : tm) out.insert(field.add(a, b));
  return out;
}

ScalarSet iterated_sumset(const ScalarSet& s, int d) {
  if (d < 1) throw Error(ErrorCode::BadArity, "sumset arity must be >= 1, got " + std::to_string(d));
  ScalarSet acc = s;
  for (int i = 1; i < d; ++i) acc = sumset(acc, s);
  return acc;
}

ScalarSet dA2(const ScalarSet& a, int d) {
  if (d < 1) throw Error(ErrorCode::BadArity, "sumset arity must be >= 1, got " + std::to_string(d));
  return iterated_sumset(product_set(a), d);
}

ScalarSet dilate(const ScalarSet& a, Elem c) {
  ScalarSet out(a.field_ptr());
  for (auto x : a.members()) out.insert(a.field().mul(c, x));
  return out;
}

PointSet cartesian_power(const ScalarSet& a, int d) {
  const Space space(a.field_ptr(), d);
  PointSet e(space);
  const auto elems = a.members();
  if (elems.empty()) return e;
  std::vector<std::size_t> pos(static_cast<std::size_t>(d), 0);
  while (true) {
    PointIndex flat = 0;
    for (int i = d; i-- > 0;) flat = flat * space.q() + elems[pos[static_cast<std::size_t>(i)]].idx;
    e.insert(flat);
    int i = 0;
    while (i < d && ++pos[static_cast<std::size_t>(i)] == elems.size()) pos[static_cast<std::size_t>(i++)] = 0;
    if (i == d) break;
  }
  return e;
}

ScalarSet dot_product_set(const PointSet& e) {
  const Space& space = e.space();
  ScalarSet out(space.field_ptr());
  const auto pts = e.members();
  const std::uint64_t q = space.q();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i; j < pts.size(); ++j) out.insert(space.dot(pts[i], pts[j]));
    if (out.size() == q) break;
  }
  return out;
}

UnitCoverage covers_units(const ScalarSet& s) {
  UnitCoverage c;
  c.contains_zero = s.contains(Elem{0});
  for (std::uint32_t a = 1; a < s.field().q(); ++a)
    if (!s.contains(Elem{a})) c.missing.emplace_back(a);
  c.covers = c.missing.empty();
  return c;
}

bool sumset_cover_threshold(std::uint64_t set_size, std::uint32_t q, int d) {
  if (d < 1) throw Error(ErrorCode::BadArity, "arity must be >= 1");
  const auto ud = static_cast<std::uint64_t>(d);
  return ipow(BigInt(set_size), 2 * ud) > ipow(BigInt(q), ud + 1);
}

bool sumset_cover_threshold(const ScalarSet& a, int d) { return sumset_cover_threshold(a.size(), a.field().q(), d); }

bool dot_cover_threshold(const PointSet& e) {
  const BigInt n(e.size());
  return n * n > ipow(BigInt(e.space().q()), static_cast<std::uint64_t>(e.space().dim()) + 1);
}

CoverageVerdict dot_set_lower_bound_check(const PointSet& e) {
  if (e.contains_origin())
    throw Error(ErrorCode::OriginInSet, "dot_set_lower_bound_check requires a set without the origin");
  const Space& space = e.space();
  const ScalarSet dots = dot_product_set(e);
  CoverageVerdict v;
  v.base_size = e.size();
  v.set_size = dots.size();
  v.coverage = covers_units(dots);
  v.threshold_met = dot_cover_threshold(e);
  v.max_line = max_line_intersection(e).count;
  const BigInt n2 = BigInt(e.size()) * e.size();
  const BigInt q(space.q());
  v.lhs = BigInt(v.set_size) * (BigInt(v.max_line) * ipow(q, static_cast<std::uint64_t>(space.dim())) + n2);
  v.rhs = q * n2;
  v.inequality_holds = v.lhs >= v.rhs;
  return v;
}

CoverageVerdict positive_proportion_check(const ScalarSet& a, int d) {
  if (d < 1) throw Error(ErrorCode::BadArity, "arity must be >= 1, got " + std::to_string(d));
  ScalarSet units = a;
  CoverageVerdict v;
  if (units.contains(Elem{0})) {
    units.erase(Elem{0});
    v.stripped_zero = true;
  }
  const ScalarSet sums = dA2(units, d);
  const std::uint32_t q = a.field().q();
  const auto ud = static_cast<std::uint64_t>(d);
  v.base_size = units.size();
  v.set_size = sums.size();
  v.coverage = covers_units(sums);
  v.threshold_met = sumset_cover_threshold(units.size(), q, d);
  v.max_line = units.size();
  const BigInt a_size(units.size());
  const BigInt e2 = ipow(a_size, 2 * ud);
  v.lhs = BigInt(v.set_size) * (a_size * ipow(BigInt(q), ud) + e2);
  v.rhs = BigInt(q) * e2;
  v.inequality_holds = v.lhs >= v.rhs;

  const double dd = d;
  const double exponent = dd / 2.0 + dd / (2.0 * (2.0 * dd - 1.0));
  v.c_size = std::pow(static_cast<double>(units.size()), dd) / std::pow(static_cast<double>(q), exponent);
  const double cpow = std::pow(v.c_size, 2.0 - 1.0 / dd);
  v.implied_proportion = cpow / (cpow + 1.0);
  return v;
}

CoverageVerdict bilinear_cover(std::span<const ScalarSet> as, std::span<const ScalarSet> bs) {
  if (as.empty() || as.size() != bs.size())
    throw Error(ErrorCode::ArityMismatch, std::to_string(as.size()) + " A-sets vs " + std::to_string(bs.size()) +
                                              " B-sets");
  const std::uint32_t q = as.front().field().q();
  ScalarSet acc = product_set(as[0], bs[0]);
  BigInt weight = BigInt(as[0].size()) * bs[0].size();
  for (std::size_t j = 1; j < as.size(); ++j) {
    acc = sumset(acc, product_set(as[j], bs[j]));
    weight *= BigInt(as[j].size()) * bs[j].size();
  }
  CoverageVerdict v;
  v.set_size = acc.size();
  v.coverage = covers_units(acc);
  const BigInt bound = ipow(BigInt(q), as.size() + 1);
  v.lhs = weight;
  v.rhs = bound;
  v.threshold_met = weight > bound;
  v.inequality_holds = v.threshold_met;
  v.ratio = to_double(weight) / to_double(bound);
  return v;
}

Rational parse_rational(std::string_view text) {
  auto bad = [&] { return Error(ErrorCode::BadEpsilon, "cannot parse '" + std::string(text) + "'"); };
  auto parse_int = [&](std::string_view s) {
    if (s.empty() || s.size() > 17) throw bad();
    std::int64_t v = 0;
    for (char c : s) {
      if (!std::isdigit(static_cast<unsigned char>(c))) throw bad();
      v = v * 10 + (c - '0');
    }
    return v;
  };
  Rational r;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    r = {parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1))};
  } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
    const auto whole = text.substr(0, dot);
    const auto frac = text.substr(dot + 1);
    if (frac.empty() || frac.size() > 15) throw bad();
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    r = {(whole.empty() ? 0 : parse_int(whole)) * den + parse_int(frac), den};
  } else {
    r = {parse_int(text), 1};
  }
  if (r.den == 0) throw bad();
  const std::int64_t g = std::gcd(r.num, r.den);
  if (g > 1) r = {r.num / g, r.den / g};
  return r;
}

DOfEps d_of_eps(Rational eps) {
  if (eps.den <= 0 || eps.num <= 0 || 2 * eps.num > eps.den)
    throw Error(ErrorCode::BadEpsilon, "epsilon must satisfy 0 < eps <= 1/2, got " + std::to_string(eps.num) +
                                           "/" + std::to_string(eps.den));
  auto ceil_div = [](std::int64_t a, std::int64_t b) { return (a + b - 1) / b; };
  // 1/(2 eps) = den / (2 num);  1/2 + 1/(4 eps) = (2 num + den) / (4 num).
  return {ceil_div(eps.den, 2 * eps.num), ceil_div(2 * eps.num + eps.den, 4 * eps.num)};
}

}  // namespace dotcover

namespace dotcover {

ScalarSet subfield(const FieldPtr& field, std::uint32_t k) {
  if (k == 0 || field->n() % k != 0)
    throw Error(ErrorCode::NoProperSubfield, "degree " + std::to_string(k) + " does not divide " +
                                                 std::to_string(field->n()));
  std::uint64_t size = 1;
  for (std::uint32_t i = 0; i < k; ++i) size *= field->p();
  ScalarSet out(field);
  for (std::uint32_t a = 0; a < field->q(); ++a) {
    Elem x{a};
    for (std::uint32_t i = 0; i < k; ++i) x = field->frobenius(x);
    if (x == Elem{a}) out.insert(Elem{a});
  }
  if (out.size() != size) throw std::logic_error("subfield has the wrong size");
  return out;
}

ScalarSet square_root_subfield(const FieldPtr& field) {
  if (field->n() % 2 != 0)
    throw Error(ErrorCode::NoProperSubfield, "GF(" + std::to_string(field->q()) +
                                                 ") has no subfield of size sqrt(q)");
  return subfield(field, field->n() / 2);
}

ScalarSet multiplicative_subgroup(const FieldPtr& field, std::uint64_t e) {
  const std::uint64_t order = field->q() - 1;
  if (e == 0 || order % e != 0)
    throw Error(ErrorCode::BadSpec, std::to_string(e) + " does not divide q - 1");
  ScalarSet out(field);
  const std::uint64_t step = order / e;
  for (std::uint64_t i = 0; i < e; ++i) out.insert(field->exp(i * step));
  return out;
}

}  // namespace dotcover
