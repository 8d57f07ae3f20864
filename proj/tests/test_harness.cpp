#include <doctest.h>

#include <set>

#include "dotcover/enumerate.hpp"
#include "dotcover/error.hpp"
#include "dotcover/harness.hpp"
#include "dotcover/rng.hpp"

using namespace dotcover;
using namespace dotcover::harness;

namespace {

ExperimentSpec spec_for(std::uint64_t p, std::int64_t n, int d) {
  ExperimentSpec s;
  s.p = p;
  s.n = n;
  s.d = d;
  return s;
}

}  // namespace

TEST_CASE("counter rng reproduces SplitMix64 finalizer outputs") {
  // reference values from an independent Python implementation
  CounterRng a(42, 0);
  CHECK(a.next() == 0xca685846b557f0fcULL);
  CHECK(a.next() == 0x0d5ec61fa641d02eULL);
  CHECK(a.next() == 0x45d46229cc936c2bULL);
  CounterRng b(0, 7);
  CHECK(b.next() == 0xf33dc6bd55ffa86bULL);
  CHECK(b.next() == 0xe1332a7db412c5a9ULL);
  CHECK(b.next() == 0xe6af094f768935b3ULL);
}

TEST_CASE("uniform draws and random subsets") {
  CounterRng rng(1, 2);
  std::vector<int> hist(6, 0);
  for (int i = 0; i < 60000; ++i) ++hist[rng.uniform(6)];
  for (int h : hist) CHECK(std::abs(h - 10000) < 500);
  for (int rep = 0; rep < 200; ++rep) {
    auto s = random_subset(rng, 50, 17);
    REQUIRE(s.size() == 17);
    REQUIRE(std::is_sorted(s.begin(), s.end()));
    REQUIRE(std::adjacent_find(s.begin(), s.end()) == s.end());
    REQUIRE(s.back() < 50);
  }
  CHECK(random_subset(rng, 9, 9) == std::vector<std::uint64_t>{0, 1, 2, 3, 4, 5, 6, 7, 8});
  CounterRng x(5, stream_id(1, 3, 4)), y(5, stream_id(1, 3, 4));
  CHECK(random_subset(x, 100, 10) == random_subset(y, 100, 10));
}

TEST_CASE("colex enumeration, rank and unrank") {
  CHECK(binomial(9, 6) == 84);
  CHECK(binomial_exact(100, 50) == BigInt("100891344545564193334812497256"));
  for (std::uint64_t n : {5u, 8u})
    for (std::uint64_t k = 0; k <= n; ++k) {
      ColexSubsets it(n, k);
      std::set<std::vector<std::uint64_t>> seen;
      std::uint64_t rank = 0;
      std::vector<std::uint64_t> prev;
      do {
        const auto& cur = it.current();
        REQUIRE(cur.size() == k);
        REQUIRE(colex_rank(cur) == rank);
        REQUIRE(colex_unrank(n, k, rank) == cur);
        if (rank > 0) {
          // colex: compare from the largest element down
          REQUIRE(std::lexicographical_compare(prev.rbegin(), prev.rend(), cur.rbegin(), cur.rend()));
        }
        seen.insert(cur);
        prev = cur;
        ++rank;
      } while (it.next());
      REQUIRE(rank == binomial(n, k));
      REQUIRE(seen.size() == rank);
      if (k > 0 && rank > 3) CHECK(ColexSubsets(n, k, 3).current() == colex_unrank(n, k, 3));
    }
}

TEST_CASE("spec parsing") {
  auto r = parse_size_range("4..7");
  CHECK(r.lo == 4);
  CHECK(r.hi == 7);
  CHECK(parse_size_range("5").lo == 5);
  CHECK_THROWS_AS(parse_size_range("7..4"), Error);
  CHECK_THROWS_AS(parse_size_range("x"), Error);
  CHECK(parse_checks("cover,remainder") == std::vector<std::string>{"cover", "remainder"});
  CHECK_THROWS_AS(parse_checks("cover,nonsense"), Error);
  CHECK(parse_mode("structured") == Mode::Structured);
  CHECK_THROWS_AS(parse_mode("random"), Error);
}

TEST_CASE("large integers are written as strings") {
  CHECK(json_integer(BigInt(12)).is_number_integer());
  const BigInt limit = BigInt(1) << 53;
  CHECK(json_integer(limit - 1).is_number_integer());
  CHECK(json_integer(limit).get<std::string>() == "9007199254740992");
  CHECK(json_integer(-limit).is_string());
}

TEST_CASE("exhaustive cover sweeps") {
  auto r5 = cmd_cover_exhaustive(spec_for(5, 1, 2));
  CHECK(r5.exit_code == kOk);
  CHECK(r5.report["subsets_checked"] == 6);
  CHECK(r5.report["counterexample_count"] == 0);

  auto r7 = cmd_cover_exhaustive(spec_for(7, 1, 2));
  CHECK(r7.report["subsets_checked"] == 29);
  CHECK(r7.report["status"] == "ok");

  auto r4 = cmd_cover_exhaustive(spec_for(2, 2, 2));
  CHECK(r4.report["subsets_checked"] == 5);
  CHECK(r4.report["sizes"][0]["size"] == 3);

  auto big = spec_for(31, 1, 2);
  big.sizes = SizeRange{5, 20};
  auto rb = cmd_cover_exhaustive(big);
  CHECK(rb.exit_code == kBudgetExceeded);
  CHECK(rb.report["error"] == "BudgetExceeded");

  CHECK(cmd_cover_exhaustive(spec_for(4, 1, 2)).exit_code == kBadSpec);
}

TEST_CASE("sampled sweeps are deterministic") {
  auto spec = spec_for(31, 1, 2);
  spec.samples = 200;
  spec.seed = 42;
  const auto a = render(cmd_cover_sample(spec).report);
  const auto b = render(cmd_cover_sample(spec).report);
  CHECK(a == b);
  spec.workers = 8;
  CHECK(render(cmd_cover_sample(spec).report) == a);
  spec.seed = 43;
  CHECK(render(cmd_cover_sample(spec).report) != a);
}

TEST_CASE("structured sampling over GF(9) includes the prime subfield") {
  auto spec = spec_for(3, 2, 2);
  spec.mode = Mode::Structured;
  auto r = cmd_cover_sample(spec);
  CHECK(r.exit_code == kOk);
  bool found = false;
  for (const auto& fam : r.report["structured"])
    if (fam["family"] == "subfield_deg1") {
      found = true;
      CHECK(fam["size"] == 3);
      CHECK(fam["covers_units"] == false);
    }
  CHECK(found);
}

TEST_CASE("sharpness witnesses") {
  auto r4 = cmd_sharpness(spec_for(2, 2, 2));
  CHECK(r4.report["subfield"]["elements"] == nlohmann::ordered_json::array({0, 1}));
  CHECK(r4.report["subfield"]["missing_count"] == 2);
  for (auto [p, n] : {std::pair{2, 2}, {3, 2}, {2, 4}, {5, 2}}) {
    auto r = cmd_sharpness(spec_for(p, n, 2));
    CHECK(r.exit_code == kOk);
    CHECK(r.report["subfield"]["closed_up_to"] == 6);
    CHECK(r.report["subfield"]["covers_units"] == false);
  }
  auto r25 = cmd_sharpness(spec_for(5, 2, 2));
  CHECK(r25.report["subfield"]["ratio"].get<double>() == doctest::Approx(0.4472).epsilon(1e-3));
  auto r7 = cmd_sharpness(spec_for(7, 1, 2));
  CHECK(r7.exit_code == kOk);
  CHECK(r7.report["subfield"]["error"] == "NoProperSubfield");
}

TEST_CASE("geometry over the 9-point plane") {
  auto spec = spec_for(3, 1, 2);
  spec.mode = Mode::Exhaustive;
  auto r = cmd_geometry(spec);
  CHECK(r.exit_code == kOk);
  std::uint64_t total = 0;
  for (const auto& s : r.report["sizes"]) {
    CHECK(s["sets"] == s["covering"]);
    total += s["sets"].get<std::uint64_t>();
  }
  CHECK(total == 130);

  auto structured = spec_for(5, 1, 2);
  structured.mode = Mode::Structured;
  CHECK(cmd_geometry(structured).exit_code == kOk);
}

TEST_CASE("d-of-eps command") {
  auto r = cmd_d_of_eps("1/10");
  CHECK(r.exit_code == kOk);
  CHECK(r.report["d_cover"] == 5);
  CHECK(r.report["d_proportion"] == 3);
  CHECK(cmd_d_of_eps("0").exit_code == kBadSpec);
  CHECK(cmd_d_of_eps("0").report["error"] == "BadEpsilon");
}

TEST_CASE("selftest and the corrupted modulus hook") {
  auto ok = cmd_selftest({});
  CHECK(ok.exit_code == kOk);
  CHECK(ok.report["failed"] == 0);
  SelftestOptions bad;
  bad.inject_bad_modulus = true;
  auto r = cmd_selftest(bad);
  CHECK(r.exit_code == kFailure);
  CHECK(render(r.report).find("ReducibleModulus") != std::string::npos);
}
