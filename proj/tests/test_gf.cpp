#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dotcover/error.hpp"
#include "dotcover/gf.hpp"
#include "dotcover/rng.hpp"
#include "oracles.hpp"

using namespace dotcover;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::BadSpec;
}

void check_axioms(const Field& f) {
  const std::uint32_t q = f.q();
  for (std::uint32_t i = 0; i < q; ++i) {
    const Elem a{i};
    REQUIRE(f.add(a, f.zero()) == a);
    REQUIRE(f.mul(a, f.one()) == a);
    REQUIRE(f.add(a, f.neg(a)) == f.zero());
    if (i != 0) REQUIRE(f.mul(a, f.inv(a)) == f.one());
    for (std::uint32_t j = 0; j < q; ++j) {
      const Elem b{j};
      REQUIRE(f.add(a, b) == f.add(b, a));
      REQUIRE(f.mul(a, b) == f.mul(b, a));
      for (std::uint32_t k = 0; k < q; k += (q > 64 ? 7 : 1)) {
        const Elem c{k};
        REQUIRE(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
        REQUIRE(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)));
        REQUIRE(f.add(f.add(a, b), c) == f.add(a, f.add(b, c)));
      }
    }
  }
}

}  // namespace

TEST_CASE("prime field arithmetic is integer arithmetic mod p") {
  auto f = make_field(5, 1);
  CHECK(f->q() == 5);
  CHECK(f->add(Elem{3}, Elem{4}) == Elem{2});
  CHECK(f->mul(Elem{3}, Elem{4}) == Elem{2});
  CHECK(f->inv(Elem{2}) == Elem{3});
  for (std::uint32_t a = 0; a < 5; ++a)
    for (std::uint32_t b = 0; b < 5; ++b) {
      CHECK(f->add(Elem{a}, Elem{b}).idx == (a + b) % 5);
      CHECK(f->mul(Elem{a}, Elem{b}).idx == (a * b) % 5);
    }
}

TEST_CASE("GF(4) modulus and omega squared") {
  auto f = make_field(2, 2);
  CHECK(f->modulus() == std::vector<std::uint32_t>{1, 1, 1});
  const Elem w = f->from_coefficients(std::vector<std::uint32_t>{0, 1});
  CHECK(w == Elem{2});
  CHECK(f->mul(w, w) == f->add(w, f->one()));
}

TEST_CASE("modulus is the least irreducible, constant coefficient first") {
  for (auto [p, n] : {std::pair{2u, 2u}, {3u, 2u}, {5u, 2u}, {7u, 2u}, {2u, 3u}, {3u, 3u}, {11u, 2u}, {5u, 3u}}) {
    CAPTURE(p);
    CAPTURE(n);
    CHECK(make_field(p, n)->modulus() == oracle::least_low_degree_irreducible(p, n));
  }
  CHECK(make_field(3, 2)->modulus() == std::vector<std::uint32_t>{1, 0, 1});
}

TEST_CASE("irreducibility test") {
  CHECK_FALSE(is_irreducible(2, std::vector<std::uint32_t>{1, 0, 1}));
  CHECK(is_irreducible(3, std::vector<std::uint32_t>{1, 0, 1}));
  CHECK(is_irreducible(2, std::vector<std::uint32_t>{1, 1, 0, 0, 1}));   // x^4+x+1
  CHECK_FALSE(is_irreducible(2, std::vector<std::uint32_t>{1, 0, 1, 0, 1}));  // (x^2+x+1)^2
  CHECK(code_of([] { make_field_with_modulus(2, {1, 0, 1}); }) == ErrorCode::ReducibleModulus);
}

TEST_CASE("field construction errors") {
  CHECK(code_of([] { make_field(4, 1); }) == ErrorCode::NotPrime);
  CHECK(code_of([] { make_field(1, 1); }) == ErrorCode::NotPrime);
  CHECK(code_of([] { make_field(2, 0); }) == ErrorCode::DegreeOutOfRange);
  CHECK(code_of([] { make_field(2, -1); }) == ErrorCode::DegreeOutOfRange);
  CHECK(code_of([] { make_field(2, 21); }) == ErrorCode::FieldTooLarge);
  CHECK(code_of([] { make_field(3, 5, 100); }) == ErrorCode::FieldTooLarge);
  CHECK(code_of([] { make_field(5, 1)->inv(Elem{0}); }) == ErrorCode::DivisionByZero);
}

TEST_CASE("field axioms") {
  for (auto [p, n] : {std::pair{2u, 1u}, {3u, 1u}, {2u, 2u}, {5u, 1u}, {7u, 1u}, {2u, 3u}, {3u, 2u}, {13u, 1u},
                      {2u, 4u}, {5u, 2u}, {3u, 4u}, {2u, 7u}}) {
    CAPTURE(p);
    CAPTURE(n);
    check_axioms(*make_field(p, n));
  }
}

TEST_CASE("log-table path beyond the full-table limit") {
  for (auto [p, n] : {std::pair{2u, 13u}, {4099u, 1u}, {3u, 8u}}) {
    auto f = make_field(p, n);
    REQUIRE(f->q() > kFullTableLimit);
    CounterRng rng(7, p);
    for (int i = 0; i < 20000; ++i) {
      const Elem a{static_cast<std::uint32_t>(rng.uniform(f->q()))};
      const Elem b{static_cast<std::uint32_t>(rng.uniform(f->q()))};
      const Elem c{static_cast<std::uint32_t>(rng.uniform(f->q()))};
      REQUIRE(f->mul(a, f->add(b, c)) == f->add(f->mul(a, b), f->mul(a, c)));
      REQUIRE(f->mul(f->mul(a, b), c) == f->mul(a, f->mul(b, c)));
      if (a.idx != 0) REQUIRE(f->mul(a, f->inv(a)) == f->one());
    }
  }
  // prime field by integers
  auto f = make_field(4099, 1);
  CHECK(f->mul(Elem{4000}, Elem{4001}).idx == 4000ULL * 4001 % 4099);
}

TEST_CASE("Frobenius is an automorphism of order n") {
  for (auto [p, n] : {std::pair{2u, 3u}, {3u, 2u}, {5u, 2u}, {2u, 4u}, {3u, 3u}}) {
    auto f = make_field(p, n);
    for (std::uint32_t i = 0; i < f->q(); ++i) {
      const Elem a{i};
      REQUIRE(f->frobenius(a) == f->pow(a, p));
      Elem x = a;
      for (std::uint32_t k = 0; k < n; ++k) x = f->frobenius(x);
      REQUIRE(x == a);
      for (std::uint32_t j = 0; j < f->q(); ++j) {
        const Elem b{j};
        REQUIRE(f->frobenius(f->add(a, b)) == f->add(f->frobenius(a), f->frobenius(b)));
        REQUIRE(f->frobenius(f->mul(a, b)) == f->mul(f->frobenius(a), f->frobenius(b)));
      }
    }
  }
}

TEST_CASE("trace") {
  auto f4 = make_field(2, 2);
  CHECK(f4->trace(Elem{0}) == 0);
  CHECK(f4->trace(Elem{1}) == 0);
  CHECK(f4->trace(Elem{2}) == 1);
  CHECK(f4->trace(Elem{3}) == 1);

  auto f7 = make_field(7, 1);
  for (std::uint32_t a = 0; a < 7; ++a) CHECK(f7->trace(Elem{a}) == a);

  for (auto [p, n] : {std::pair{3u, 2u}, {2u, 3u}, {5u, 2u}, {2u, 4u}, {3u, 3u}}) {
    auto f = make_field(p, n);
    std::vector<std::uint64_t> hits(p, 0);
    for (std::uint32_t i = 0; i < f->q(); ++i) {
      const Elem a{i};
      // a + a^p + ... summed by repeated multiplication
      Elem s = f->zero();
      Elem power = a;
      for (std::uint32_t k = 0; k < n; ++k) {
        s = f->add(s, power);
        Elem next = f->one();
        for (std::uint32_t r = 0; r < p; ++r) next = f->mul(next, power);
        power = next;
      }
      REQUIRE(s.idx < p);
      REQUIRE(f->trace(a) == s.idx);
      ++hits[s.idx];
      for (std::uint32_t j = 0; j < f->q(); ++j)
        REQUIRE(f->trace(f->add(a, Elem{j})) == (f->trace(a) + f->trace(Elem{j})) % p);
    }
    for (auto h : hits) CHECK(h == f->q() / p);
  }
}

TEST_CASE("additive character") {
  auto f5 = make_field(5, 1);
  CHECK(std::abs(f5->chi(Elem{0}) - Complex(1, 0)) < 1e-15);
  const Complex expect = std::polar(1.0, 4 * std::numbers::pi / 5);
  CHECK(std::abs(f5->chi(Elem{2}) - expect) < 1e-12);
  auto f4 = make_field(2, 2);
  CHECK(std::abs(f4->chi(Elem{2}) - Complex(-1, 0)) < 1e-15);

  for (auto [p, n] : {std::pair{2u, 1u}, {3u, 1u}, {2u, 2u}, {7u, 1u}, {3u, 2u}, {2u, 4u}, {5u, 2u}}) {
    auto f = make_field(p, n);
    for (std::uint32_t a = 0; a < f->q(); ++a) {
      Complex s{};
      for (std::uint32_t t = 0; t < f->q(); ++t) s += f->chi(f->mul(Elem{a}, Elem{t}));
      const double want = a == 0 ? f->q() : 0.0;
      REQUIRE(std::abs(s - Complex(want, 0)) < 1e-9);
      for (std::uint32_t b = 0; b < f->q(); ++b)
        REQUIRE(std::abs(f->chi(f->add(Elem{a}, Elem{b})) - f->chi(Elem{a}) * f->chi(Elem{b})) < 1e-12);
    }
  }
}

TEST_CASE("multiplicative generator is the least primitive element") {
  CHECK(make_field(5, 1)->generator() == Elem{2});
  CHECK(make_field(7, 1)->generator() == Elem{3});
  CHECK(make_field(2, 1)->generator() == Elem{1});
  for (auto [p, n] : {std::pair{11u, 1u}, {13u, 1u}, {2u, 2u}, {3u, 2u}, {2u, 3u}, {5u, 2u}, {2u, 4u}}) {
    auto f = make_field(p, n);
    std::uint32_t least = 1;
    while (oracle::brute_order(*f, Elem{least}) != f->q() - 1) ++least;
    CHECK(f->generator() == Elem{least});
    CHECK(multiplicative_generator(*f) == Elem{least});
    for (std::uint32_t a = 1; a < f->q(); ++a)
      REQUIRE(multiplicative_order(*f, Elem{a}) == oracle::brute_order(*f, Elem{a}));
    for (std::uint32_t a = 1; a < f->q(); ++a) REQUIRE(f->exp(f->log(Elem{a})) == Elem{a});
  }
}

TEST_CASE("coefficient packing round-trips") {
  auto f = make_field(3, 3);
  for (std::uint32_t i = 0; i < f->q(); ++i) {
    const auto c = f->coefficients(Elem{i});
    REQUIRE(c.size() == 3);
    REQUIRE(c[0] + 3 * c[1] + 9 * c[2] == i);
    REQUIRE(f->from_coefficients(c) == Elem{i});
  }
}
