#include <doctest.h>

#include <sstream>

#include "dotcover/covering.hpp"
#include "dotcover/error.hpp"
#include "dotcover/incidence.hpp"
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

PointSet line_through(const Space& s, PointIndex dir, bool with_origin) {
  PointSet e(s);
  for (std::uint32_t t = with_origin ? 0 : 1; t < s.q(); ++t) e.insert(s.scale(Elem{t}, dir));
  return e;
}

}  // namespace

TEST_CASE("nu on the full plane over F_3") {
  Space s(make_field(3, 1), 2);
  auto nu = nu_bruteforce(PointSet::full(s));
  CHECK(nu.nu == std::vector<std::uint64_t>{33, 24, 24});
  CHECK(nu.total() == 81);
  CHECK(nu_spectral(PointSet::full(s)) == nu);
  // exact remainders: q nu(t) - |E|^2
  CHECK(nu.remainder_numerator(0) == 18);
  CHECK(nu.remainder_numerator(1) == -9);
}

TEST_CASE("nu of a singleton and of the empty set") {
  Space s(make_field(5, 1), 2);
  std::vector<Elem> v{Elem{1}, Elem{2}};
  auto e = PointSet::from_points(s, std::vector<PointIndex>{s.flat(v)});
  auto nu = nu_bruteforce(e);
  CHECK(nu.nu[0] == 1);  // 1 + 4 = 5 = 0
  CHECK(nu.total() == 1);
  auto empty = nu_bruteforce(PointSet(s));
  CHECK(empty.total() == 0);
  CHECK(nu_spectral(PointSet(s)) == empty);
}

TEST_CASE("nu routes agree with each other and with the coordinate oracle") {
  CounterRng rng(21, 0);
  for (auto [p, n, d] : {std::tuple{5u, 1u, 2}, {2u, 2u, 3}, {3u, 2u, 2}, {7u, 1u, 2}, {2u, 3u, 2}}) {
    Space s(make_field(p, n), d);
    for (int rep = 0; rep < 12; ++rep) {
      auto e = oracle::random_set(s, rng, 1 + rng.uniform(s.size()));
      auto brute = nu_bruteforce(e);
      REQUIRE(brute.nu == oracle::brute_nu(e));
      REQUIRE(nu_spectral(e) == brute);
      REQUIRE(nu_bruteforce(e, 4) == brute);
      REQUIRE(brute.total() == e.size() * e.size());
    }
  }
}

TEST_CASE("full space remainder") {
  for (auto [p, n, d] : {std::tuple{3u, 1u, 2}, {5u, 1u, 2}, {2u, 2u, 3}}) {
    Space s(make_field(p, n), d);
    auto nu = nu_bruteforce(PointSet::full(s));
    const BigInt qd = ipow(BigInt(s.q()), d);
    for (std::uint32_t t = 1; t < s.q(); ++t) CHECK(nu.remainder_numerator(t) == -qd);
    CHECK(nu.remainder_numerator(0) == qd * s.q() - qd);
  }
}

TEST_CASE("remainder bound on random sets") {
  CounterRng rng(22, 0);
  Space s(make_field(7, 1), 2);
  for (int rep = 0; rep < 100; ++rep) {
    auto e = oracle::random_set(s, rng, 1 + rng.uniform(s.size()));
    auto r = remainder_bound_check(e);
    REQUIRE(r.worst_square <= r.bound);
    REQUIRE(r.sharpness <= 1.0);
  }
  auto single = PointSet::from_points(s, std::vector<PointIndex>{3});
  CHECK_NOTHROW(remainder_bound_check(single));
}

TEST_CASE("a punctured isotropic line exceeds the remainder bound at t = 0 only") {
  // (2,1).(2,1) = 5 = 0 in F_5, so every pair on the line has dot product 0.
  Space s(make_field(5, 1), 2);
  std::vector<Elem> dir{Elem{2}, Elem{1}};
  auto e = line_through(s, s.flat(dir), false);
  CHECK(nu_bruteforce(e).nu[0] == 16);
  CHECK(code_of([&] { remainder_bound_check(e, RemainderScope::AllT); }) == ErrorCode::BoundViolated);
  auto r = remainder_bound_check(e, RemainderScope::NonzeroT);
  CHECK(r.zero_square == 4096);
  CHECK(r.bound == 2000);
  CHECK(r.zero_ratio == doctest::Approx(2.048));
}

TEST_CASE("rotating planes operator") {
  for (auto [p, n, d] : {std::tuple{3u, 1u, 2}, {5u, 1u, 2}, {2u, 2u, 3}, {3u, 1u, 3}}) {
    Space s(make_field(p, n), d);
    const double qd1 = std::pow(double(s.q()), d - 1);
    for (std::uint32_t t = 0; t < s.q(); ++t) {
      auto r = rotating_planes_apply(SpectralFn::constant(s, 1.0), Elem{t});
      for (PointIndex x = 1; x < s.size(); ++x) REQUIRE(std::abs(r[x] - Complex(qd1, 0)) < 1e-9);
      REQUIRE(std::abs(r[0] - Complex(t == 0 ? double(s.size()) : 0.0, 0)) < 1e-9);
    }
    CounterRng rng(23, p);
    auto e = oracle::random_set(s, rng, s.size() / 2);
    auto nu = nu_bruteforce(e);
    for (std::uint32_t t = 0; t < s.q(); ++t) {
      auto r = rotating_planes_apply(indicator(e), Elem{t});
      Complex sum{};
      for (auto x : e.members()) sum += r[x];
      REQUIRE(std::abs(sum - Complex(double(nu.nu[t]), 0)) < 1e-9);
    }
  }
}

TEST_CASE("line intersections") {
  Space s(make_field(5, 1), 2);
  std::vector<Elem> y{Elem{1}, Elem{3}};
  const PointIndex dir = s.flat(y);
  CHECK(line_intersection(line_through(s, dir, true), dir) == 5);
  CHECK(line_intersection(PointSet(s), dir) == 0);
  CHECK(code_of([&] { line_intersection(PointSet(s), PointIndex{0}); }) == ErrorCode::ZeroDirection);

  auto a = ScalarSet::from_indices(make_field(5, 1), std::vector<std::uint32_t>{1, 2});
  auto e = cartesian_power(a, 2);
  std::vector<Elem> diag{Elem{1}, Elem{1}};
  CHECK(line_intersection(e, diag) == 2);
  CHECK(max_line_intersection(e).count == 2);
  CHECK(max_line_intersection(line_through(s, dir, false)).count == 4);
  CHECK(max_line_intersection(PointSet::full(s)).count == 5);
  CHECK(max_line_intersection(PointSet(s)).count == 0);

  for (auto [p, n, d] : {std::tuple{5u, 1u, 2}, {3u, 1u, 3}, {2u, 2u, 3}}) {
    Space sp(make_field(p, n), d);
    const auto dirs = canonical_directions(sp);
    CHECK(dirs.size() == (sp.size() - 1) / (sp.q() - 1));
    // every nonzero point lies on exactly one canonical line
    std::vector<int> hit(sp.size(), 0);
    for (auto v : dirs)
      for (std::uint32_t t = 1; t < sp.q(); ++t) ++hit[sp.scale(Elem{t}, v)];
    for (PointIndex x = 1; x < sp.size(); ++x) REQUIRE(hit[x] == 1);
  }
}

TEST_CASE("max line intersection matches a scan over all directions") {
  CounterRng rng(24, 0);
  Space s(make_field(7, 1), 2);
  for (int rep = 0; rep < 30; ++rep) {
    auto e = oracle::random_set(s, rng, 1 + rng.uniform(s.size()));
    std::uint64_t best = 0;
    for (PointIndex y = 1; y < s.size(); ++y) {
      std::uint64_t cnt = 0;
      for (std::uint32_t t = 0; t < s.q(); ++t) cnt += e.contains(s.scale(Elem{t}, y));
      best = std::max(best, cnt);
    }
    REQUIRE(max_line_intersection(e).count == best);
  }
}

TEST_CASE("hyperplane sums") {
  Space s(make_field(3, 1), 3);
  auto full = hyperplane_counts(PointSet::full(s));
  CHECK(full[0] == 27);
  for (PointIndex m = 1; m < s.size(); ++m) CHECK(full[m] == 9);

  CounterRng rng(25, 0);
  for (int rep = 0; rep < 10; ++rep) {
    auto e = strip_origin(oracle::random_set(s, rng, 10));
    auto counts = hyperplane_counts(e);
    auto sums = hyperplane_sum(e);
    std::uint64_t mass = 0;
    for (PointIndex m = 0; m < s.size(); ++m) {
      std::uint64_t cnt = 0;
      for (auto x : e.members()) cnt += s.dot(x, m) == Elem{0};
      REQUIRE(counts[m] == cnt);
      REQUIRE(std::abs(sums[m] - Complex(double(cnt), 0)) < 1e-12);
      mass += cnt;
    }
    CHECK(mass == e.size() * 9);
  }
}

TEST_CASE("Fourier identities for hyperplane sums and autocorrelation") {
  Space s(make_field(5, 1), 2);
  CHECK(code_of([&] { verify_hatF_identity(PointSet::full(s)); }) == ErrorCode::OriginInSet);
  std::vector<Elem> dir{Elem{1}, Elem{2}};
  CHECK(verify_hatF_identity(line_through(s, s.flat(dir), false)).max_rel_error < kIdentityTolerance);
  CHECK(verify_hatF_identity(PointSet::from_points(s, std::vector<PointIndex>{7})).max_rel_error <
        kIdentityTolerance);
  CounterRng rng(26, 0);
  for (int rep = 0; rep < 50; ++rep) {
    auto e = strip_origin(oracle::random_set(s, rng, 1 + rng.uniform(s.size())));
    REQUIRE(verify_hatF_identity(e).max_rel_error < kIdentityTolerance);
    REQUIRE(verify_hatG_identity(e).max_rel_error < kIdentityTolerance);
  }
  CHECK(verify_hatG_identity(PointSet::full(s)).max_rel_error < kIdentityTolerance);
}

TEST_CASE("second moment") {
  Space s(make_field(7, 1), 2);
  CHECK(code_of([&] { second_moment_check(PointSet::full(s)); }) == ErrorCode::OriginInSet);
  auto single = second_moment_check(PointSet::from_points(s, std::vector<PointIndex>{9}));
  CHECK(single.sum_nu_squared == 1);
  CHECK(single.holds);

  auto a = ScalarSet::from_indices(make_field(7, 1), std::vector<std::uint32_t>{1, 2, 3});
  auto grid = second_moment_check(cartesian_power(a, 2));
  CHECK(grid.max_line == 3);
  CHECK(grid.holds);
  CHECK(grid.fg_stage_holds);

  CounterRng rng(27, 0);
  for (auto [p, d] : {std::pair{5u, 2}, {3u, 3}}) {
    Space sp(make_field(p, 1), d);
    for (int rep = 0; rep < 100; ++rep) {
      auto e = strip_origin(oracle::random_set(sp, rng, 1 + rng.uniform(sp.size())));
      auto r = second_moment_check(e);
      BigInt sq = 0;
      for (auto v : oracle::brute_nu(e)) sq += BigInt(v) * v;
      REQUIRE(r.sum_nu_squared == sq);
      REQUIRE(r.holds);
      REQUIRE(r.fg_stage_holds);
      REQUIRE(r.lhs <= r.rhs);
    }
  }
}

TEST_CASE("csv export") {
  Space s(make_field(3, 1), 2);
  std::ostringstream os;
  write_csv(nu_bruteforce(PointSet::full(s)), os);
  CHECK(os.str() == "t_index,nu,r_numerator\n0,33,18\n1,24,-9\n2,24,-9\n");
}
