#include "dotcover/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <thread>

#include "dotcover/covering.hpp"
#include "dotcover/enumerate.hpp"
#include "dotcover/error.hpp"
#include "dotcover/fourier.hpp"
#include "dotcover/rng.hpp"

namespace dotcover::harness {

namespace {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kTagScalar = 1;
constexpr std::uint64_t kTagBilinear = 2;
constexpr std::uint64_t kTagPoints = 3;
constexpr std::uint64_t kTagStructured = 4;
constexpr std::uint64_t kTagSelftest = 5;
constexpr std::size_t kMaxListedCounterexamples = 64;
constexpr std::size_t kMaxListedMissing = 32;

const std::vector<std::string> kKnownChecks = {"cover",      "remainder",     "keylowerbound",
                                               "identities", "second_moment", "bilinear"};

struct CheckTally {
  std::uint64_t checked = 0;
  std::uint64_t passed = 0;
};

struct SizeTally {
  std::uint64_t sets = 0;
  std::uint64_t covering = 0;
};

struct Counterexample {
  std::string check;
  std::vector<std::uint64_t> set;
  std::string detail;

  friend auto operator<=>(const Counterexample&, const Counterexample&) = default;
};

// Per-worker results. Every merge operation (integer addition, max/min,
// sorted concatenation) is independent of how the work was split.
struct Accum {
  std::map<std::string, CheckTally> checks;
  std::map<std::uint64_t, SizeTally> sizes;
  std::vector<Counterexample> counterexamples;
  double worst_remainder = -1.0;
  std::vector<std::uint64_t> worst_remainder_set;
  double min_lower_slack = std::numeric_limits<double>::infinity();
  std::uint64_t below_threshold_noncovering = 0;
  // t = 0 lies outside the remainder bound's reach; tracked, never a counterexample.
  std::uint64_t remainder_t0_exceedances = 0;
  double worst_t0_ratio = 0.0;

  void pass(const std::string& check) {
    auto& t = checks[check];
    ++t.checked;
    ++t.passed;
  }
  void fail(const std::string& check, std::vector<std::uint64_t> set, std::string detail) {
    ++checks[check].checked;
    counterexamples.push_back({check, std::move(set), std::move(detail)});
  }
  void note_remainder(double score, const std::vector<std::uint64_t>& set) {
    if (score > worst_remainder || (score == worst_remainder && set < worst_remainder_set)) {
      worst_remainder = score;
      worst_remainder_set = set;
    }
  }
  void merge(Accum&& o) {
    for (const auto& [k, v] : o.checks) {
      checks[k].checked += v.checked;
      checks[k].passed += v.passed;
    }
    for (const auto& [k, v] : o.sizes) {
      sizes[k].sets += v.sets;
      sizes[k].covering += v.covering;
    }
    counterexamples.insert(counterexamples.end(), std::make_move_iterator(o.counterexamples.begin()),
                           std::make_move_iterator(o.counterexamples.end()));
    if (o.worst_remainder >= 0) note_remainder(o.worst_remainder, o.worst_remainder_set);
    min_lower_slack = std::min(min_lower_slack, o.min_lower_slack);
    below_threshold_noncovering += o.below_threshold_noncovering;
    remainder_t0_exceedances += o.remainder_t0_exceedances;
    worst_t0_ratio = std::max(worst_t0_ratio, o.worst_t0_ratio);
  }
};

struct Context {
  FieldPtr field;
  int d = 2;
  std::set<std::string> checks;

  bool wants(const std::string& c) const { return checks.contains(c); }
};

template <class Fn>
Accum run_sharded(std::uint64_t count, unsigned workers, Fn&& fn) {
  workers = std::max(1U, workers);
  if (count < workers) workers = static_cast<unsigned>(std::max<std::uint64_t>(1, count));
  std::vector<Accum> parts(workers);
  if (workers == 1) {
    fn(std::uint64_t{0}, count, parts[0]);
    return std::move(parts[0]);
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  const std::uint64_t chunk = (count + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t begin = std::min(count, w * chunk);
    const std::uint64_t end = std::min(count, begin + chunk);
    pool.emplace_back([&, w, begin, end] {
      try {
        fn(begin, end, parts[w]);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  Accum out;
  for (auto& part : parts) out.merge(std::move(part));
  return out;
}

std::vector<std::uint64_t> indices_of(const ScalarSet& a) {
  std::vector<std::uint64_t> out;
  for (auto e : a.members()) out.push_back(e.idx);
  return out;
}

std::string list_missing(const UnitCoverage& c) {
  std::string s = "missing";
  for (std::size_t i = 0; i < c.missing.size() && i < kMaxListedMissing; ++i) s += " " + std::to_string(c.missing[i].idx);
  return s;
}

double ratio_to_threshold(std::uint64_t size, std::uint32_t q, int d) {
  return static_cast<double>(size) / std::pow(static_cast<double>(q), 0.5 + 0.5 / d);
}

// Checks that run on a point set; `e` may contain the origin. Everything but
// the dot-product coverage check runs on e \ {0}.
void eval_points(const Context& ctx, const PointSet& e, Accum& acc) {
  const auto raw = e.members();
  if (ctx.wants("cover")) {
    const UnitCoverage cov = covers_units(dot_product_set(e));
    auto& st = acc.sizes[e.size()];
    ++st.sets;
    st.covering += cov.covers ? 1 : 0;
    if (dot_cover_threshold(e)) {
      if (cov.covers) {
        acc.pass("cover");
      } else {
        acc.fail("cover", raw, list_missing(cov));
      }
    } else if (!cov.covers) {
      ++acc.below_threshold_noncovering;
    }
  }

  const PointSet stripped = strip_origin(e);
  const auto pts = stripped.members();
  std::optional<NuProfile> profile;
  auto get_profile = [&]() -> const NuProfile& {
    if (!profile) profile = nu_profile(stripped);
    return *profile;
  };

  if (ctx.wants("remainder")) {
    try {
      const auto r = remainder_bound_check(stripped, get_profile(), RemainderScope::NonzeroT);
      acc.pass("remainder");
      acc.note_remainder(r.sharpness, pts);
      if (r.zero_square > r.bound) ++acc.remainder_t0_exceedances;
      acc.worst_t0_ratio = std::max(acc.worst_t0_ratio, r.zero_ratio);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::BoundViolated) throw;
      acc.fail("remainder", pts, err.what());
    }
  }
  if (ctx.wants("identities")) {
    for (auto* verify : {&verify_hatF_identity, &verify_hatG_identity}) {
      try {
        verify(stripped);
        acc.pass("identities");
      } catch (const Error& err) {
        if (err.code() != ErrorCode::IdentityViolated) throw;
        acc.fail("identities", pts, err.what());
      }
    }
  }
  if (ctx.wants("second_moment")) {
    const auto r = second_moment_check(stripped, get_profile());
    if (r.holds && r.fg_stage_holds) {
      acc.pass("second_moment");
    } else {
      acc.fail("second_moment", pts, "q*sum nu^2 = " + r.lhs.str() + " vs " + r.rhs.str());
    }
  }
  if (ctx.wants("keylowerbound")) {
    const auto v = dot_set_lower_bound_check(stripped);
    if (v.inequality_holds) {
      acc.pass("keylowerbound");
    } else {
      acc.fail("keylowerbound", pts, v.lhs.str() + " < " + v.rhs.str());
    }
    if (v.rhs != 0) acc.min_lower_slack = std::min(acc.min_lower_slack, to_double(v.lhs) / to_double(v.rhs));
  }
}

void eval_scalar(const Context& ctx, const ScalarSet& a, Accum& acc) {
  const auto members = indices_of(a);
  if (ctx.wants("cover")) {
    const UnitCoverage cov = covers_units(dA2(a, ctx.d));
    auto& st = acc.sizes[a.size()];
    ++st.sets;
    st.covering += cov.covers ? 1 : 0;
    if (sumset_cover_threshold(a, ctx.d)) {
      if (cov.covers) {
        acc.pass("cover");
      } else {
        acc.fail("cover", members, list_missing(cov));
      }
    } else if (!cov.covers) {
      ++acc.below_threshold_noncovering;
    }
  }
  if (ctx.wants("keylowerbound")) {
    const auto v = positive_proportion_check(a, ctx.d);
    if (v.inequality_holds) {
      acc.pass("keylowerbound");
    } else {
      acc.fail("keylowerbound", members, v.lhs.str() + " < " + v.rhs.str());
    }
    if (v.rhs != 0) acc.min_lower_slack = std::min(acc.min_lower_slack, to_double(v.lhs) / to_double(v.rhs));
  }
  Context geo{ctx.field, ctx.d, {}};
  for (const char* c : {"remainder", "identities", "second_moment"})
    if (ctx.wants(c)) geo.checks.insert(c);
  if (!geo.checks.empty()) eval_points(geo, cartesian_power(a, ctx.d), acc);
}

void eval_bilinear(const Context& ctx, const std::vector<ScalarSet>& as, const std::vector<ScalarSet>& bs,
                   Accum& acc) {
  const auto v = bilinear_cover(as, bs);
  if (!v.threshold_met) return;
  if (v.coverage.covers) {
    acc.pass("bilinear");
    return;
  }
  std::vector<std::uint64_t> all;
  for (std::size_t j = 0; j < as.size(); ++j) {
    for (auto i : indices_of(as[j])) all.push_back(i);
    all.push_back(ctx.field->q());  // separator
    for (auto i : indices_of(bs[j])) all.push_back(i);
    all.push_back(ctx.field->q());
  }
  acc.fail("bilinear", std::move(all), list_missing(v.coverage));
}

Json field_descriptor(const Field& f) {
  Json j;
  j["p"] = f.p();
  j["n"] = f.n();
  j["q"] = f.q();
  j["modulus"] = f.modulus();
  return j;
}

Json header(std::string_view command) {
  Json j;
  j["schema"] = kSchema;
  j["version"] = std::string(kVersion);
  j["command"] = std::string(command);
  return j;
}

Json spec_echo(const ExperimentSpec& spec, const std::vector<std::uint64_t>& sizes,
               const std::set<std::string>& checks) {
  Json j;
  j["d"] = spec.d;
  j["mode"] = std::string(to_string(spec.mode));
  j["sizes"] = sizes;
  j["samples"] = json_integer(BigInt(spec.samples));
  j["seed"] = json_integer(BigInt(spec.seed));
  j["checks"] = std::vector<std::string>(checks.begin(), checks.end());
  return j;
}

std::set<std::string> select_checks(const ExperimentSpec& spec, const std::set<std::string>& allowed,
                                    const std::set<std::string>& defaults, std::string_view command) {
  if (spec.checks.empty()) return defaults;
  std::set<std::string> out;
  for (const auto& c : spec.checks) {
    if (!allowed.contains(c))
      throw Error(ErrorCode::BadSpec, "check '" + c + "' is not supported by " + std::string(command));
    out.insert(c);
  }
  return out;
}

void write_results(Json& report, Accum& acc) {
  std::sort(acc.counterexamples.begin(), acc.counterexamples.end());
  Json checks = Json::object();
  for (const auto& [name, t] : acc.checks) {
    Json c;
    c["checked"] = json_integer(BigInt(t.checked));
    c["passed"] = json_integer(BigInt(t.passed));
    c["failed"] = json_integer(BigInt(t.checked - t.passed));
    checks[name] = c;
  }
  report["checks"] = checks;
  Json worst = Json::object();
  if (acc.worst_remainder >= 0) worst["remainder_sharpness"] = acc.worst_remainder;
  if (std::isfinite(acc.min_lower_slack)) worst["lower_bound_slack"] = acc.min_lower_slack;
  if (acc.checks.contains("remainder")) {
    worst["remainder_t0_ratio"] = acc.worst_t0_ratio;
    worst["remainder_t0_exceedances"] = json_integer(BigInt(acc.remainder_t0_exceedances));
  }
  report["worst"] = worst;
  report["below_threshold_noncovering"] = json_integer(BigInt(acc.below_threshold_noncovering));
  report["counterexample_count"] = json_integer(BigInt(acc.counterexamples.size()));
  Json list = Json::array();
  for (std::size_t i = 0; i < acc.counterexamples.size() && i < kMaxListedCounterexamples; ++i) {
    const auto& c = acc.counterexamples[i];
    Json item;
    item["check"] = c.check;
    item["set"] = c.set;
    item["detail"] = c.detail;
    list.push_back(item);
  }
  report["counterexamples"] = list;
}

Json size_table(const Accum& acc, const std::function<bool(std::uint64_t)>& threshold) {
  Json rows = Json::array();
  for (const auto& [size, t] : acc.sizes) {
    Json row;
    row["size"] = size;
    row["sets"] = json_integer(BigInt(t.sets));
    row["covering"] = json_integer(BigInt(t.covering));
    row["threshold_met"] = threshold(size);
    rows.push_back(row);
  }
  return rows;
}

int finish(Json& report, const Accum& acc) {
  const int code = acc.counterexamples.empty() ? kOk : kCounterexample;
  report["status"] = code == kOk ? "ok" : "counterexample";
  return code;
}

RunResult error_result(std::string_view command, const Error& err) {
  RunResult r;
  r.report = header(command);
  r.report["status"] = "error";
  r.report["error"] = std::string(to_string(err.code()));
  r.report["message"] = err.what();
  r.exit_code = err.code() == ErrorCode::BudgetExceeded ? kBudgetExceeded : kBadSpec;
  return r;
}

std::vector<std::uint64_t> sizes_from(const ExperimentSpec& spec, std::uint64_t universe,
                                      const std::function<bool(std::uint64_t)>& threshold, bool all_admitted) {
  std::vector<std::uint64_t> out;
  if (spec.sizes) {
    if (spec.sizes->lo > spec.sizes->hi || spec.sizes->hi > universe)
      throw Error(ErrorCode::BadSpec, "size range must lie within [0, " + std::to_string(universe) + "]");
    for (auto k = spec.sizes->lo; k <= spec.sizes->hi; ++k) out.push_back(k);
    return out;
  }
  for (std::uint64_t k = 0; k <= universe; ++k) {
    if (!threshold(k)) continue;
    out.push_back(k);
    if (!all_admitted) break;
  }
  if (out.empty()) throw Error(ErrorCode::BadSpec, "no subset size meets the threshold; pass --sizes");
  return out;
}

void check_budget(std::uint64_t universe, const std::vector<std::uint64_t>& sizes) {
  BigInt total = 0;
  for (auto k : sizes) total += binomial_exact(universe, k);
  if (total > kEnumerationBudget)
    throw Error(ErrorCode::BudgetExceeded, "exhaustive enumeration needs " + total.str() + " subsets (budget " +
                                               std::to_string(kEnumerationBudget) + ")");
}

template <class Body>
Accum enumerate_subsets(std::uint64_t universe, const std::vector<std::uint64_t>& sizes, unsigned workers,
                        Body&& body) {
  Accum total;
  for (auto k : sizes) {
    const std::uint64_t count = binomial(universe, k);
    total.merge(run_sharded(count, workers, [&](std::uint64_t begin, std::uint64_t end, Accum& acc) {
      if (begin >= end) return;
      ColexSubsets it(universe, k, begin);
      for (std::uint64_t r = begin; r < end; ++r) {
        body(it.current(), acc);
        it.next();
      }
    }));
  }
  return total;
}

struct NamedScalarSet {
  std::string family;
  ScalarSet set;
};

std::vector<std::uint64_t> divisors(std::uint64_t v) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t k = 1; k <= v; ++k)
    if (v % k == 0) out.push_back(k);
  return out;
}

// Subfields, multiplicative subgroups (with and without 0), geometric
// progressions of the generator and, for prime fields, intervals.
std::vector<NamedScalarSet> structured_scalar_sets(const FieldPtr& field) {
  std::vector<NamedScalarSet> out;
  const std::uint32_t q = field->q();
  for (std::uint32_t k = 1; k < field->n(); ++k)
    if (field->n() % k == 0) out.push_back({"subfield_deg" + std::to_string(k), subfield(field, k)});
  for (auto e : divisors(q - 1)) {
    ScalarSet h = multiplicative_subgroup(field, e);
    out.push_back({"subgroup_" + std::to_string(e), h});
    h.insert(field->zero());
    out.push_back({"subgroup_" + std::to_string(e) + "+0", std::move(h)});
  }
  ScalarSet geo(field);
  for (std::uint32_t k = 1; k < q; ++k) {
    geo.insert(field->exp(k - 1));
    out.push_back({"geometric_" + std::to_string(k), geo});
  }
  if (field->is_prime_field()) {
    ScalarSet interval(field);
    for (std::uint32_t k = 1; k < q; ++k) {
      interval.insert(Elem{k});
      out.push_back({"interval_" + std::to_string(k), interval});
    }
  }
  return out;
}

struct NamedPointSet {
  std::string family;
  PointSet set;
};

std::vector<NamedPointSet> structured_point_sets(const Space& space, std::uint64_t seed) {
  std::vector<NamedPointSet> out;
  const FieldPtr& field = space.field_ptr();
  const auto dirs = canonical_directions(space);
  for (std::size_t i = 0; i < dirs.size() && i < 8; ++i) {
    PointSet line(space);
    for (std::uint32_t s = 0; s < space.q(); ++s) line.insert(space.scale(Elem{s}, dirs[i]));
    out.push_back({"line_" + std::to_string(dirs[i]), line});
    CounterRng rng(seed, stream_id(kTagStructured, dirs[i], 0));
    PointSet noisy = line;
    for (auto x : random_subset(rng, space.size(), std::min<std::uint64_t>(space.size(), 2 * space.q())))
      noisy.insert(x);
    out.push_back({"line_plus_random_" + std::to_string(dirs[i]), std::move(noisy)});
  }
  if (space.dim() >= 2) {
    for (std::size_t i = 0; i < dirs.size() && i < 4; ++i) {
      PointSet plane(space);
      for (PointIndex x = 0; x < space.size(); ++x)
        if (space.dot(x, dirs[i]).idx == 0) plane.insert(x);
      out.push_back({"hyperplane_" + std::to_string(dirs[i]), std::move(plane)});
    }
  }
  for (auto& fam : structured_scalar_sets(field)) {
    if (fam.set.size() < 2) continue;
    if (fam.family.rfind("subgroup", 0) == 0 || fam.family.rfind("subfield", 0) == 0) {
      out.push_back({"grid_" + fam.family, cartesian_power(fam.set, space.dim())});
    }
  }
  for (std::uint64_t k = 2; k <= space.q(); k += std::max<std::uint64_t>(1, space.q() / 4)) {
    CounterRng rng(seed, stream_id(kTagStructured, k, 1));
    std::vector<std::uint32_t> idx;
    for (auto v : random_subset(rng, space.q(), k)) idx.push_back(static_cast<std::uint32_t>(v));
    out.push_back({"product_random_" + std::to_string(k),
                   cartesian_power(ScalarSet::from_indices(field, idx), space.dim())});
  }
  out.push_back({"full_minus_origin", strip_origin(PointSet::full(space))});
  out.push_back({"full", PointSet::full(space)});
  return out;
}

void add_timing(Json& report, bool timing, Clock::time_point start) {
  if (!timing) return;
  report["wall_clock_ms"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
}

}  // namespace

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::Exhaustive: return "exhaustive";
    case Mode::Sample: return "sample";
    case Mode::Structured: return "structured";
  }
  return "sample";
}

Mode parse_mode(std::string_view text) {
  if (text == "exhaustive") return Mode::Exhaustive;
  if (text == "sample") return Mode::Sample;
  if (text == "structured") return Mode::Structured;
  throw Error(ErrorCode::BadSpec, "unknown mode '" + std::string(text) + "'");
}

SizeRange parse_size_range(std::string_view text) {
  const auto bad = [&] { return Error(ErrorCode::BadSpec, "bad size range '" + std::string(text) + "'"); };
  auto parse = [&](std::string_view s) {
    std::uint64_t v = 0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || end != s.data() + s.size()) throw bad();
    return v;
  };
  SizeRange r;
  if (auto dots = text.find(".."); dots != std::string_view::npos)
    r = {parse(text.substr(0, dots)), parse(text.substr(dots + 2))};
  else
    r.lo = r.hi = parse(text);
  if (r.lo > r.hi) throw bad();
  return r;
}

std::vector<std::string> parse_checks(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto item = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    if (!item.empty()) {
      if (std::find(kKnownChecks.begin(), kKnownChecks.end(), item) == kKnownChecks.end())
        throw Error(ErrorCode::BadSpec, "unknown check '" + std::string(item) + "'");
      out.emplace_back(item);
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string render(const nlohmann::ordered_json& report) { return report.dump(2) + "\n"; }

nlohmann::ordered_json json_integer(const BigInt& v) {
  static const BigInt limit = BigInt(1) << 53;
  if (v < limit && v > -limit) return v.convert_to<std::int64_t>();
  return v.str();
}

RunResult cmd_cover_exhaustive(const ExperimentSpec& spec) {
  const auto start = Clock::now();
  try {
    const FieldPtr field = make_field(spec.p, spec.n);
    const std::uint32_t q = field->q();
    const auto checks = select_checks(spec, {"cover", "keylowerbound"}, {"cover"}, "cover-exhaustive");
    auto threshold = [&](std::uint64_t k) { return sumset_cover_threshold(k, q, spec.d); };
    const auto sizes = sizes_from(spec, q, threshold, true);
    check_budget(q, sizes);

    const Context ctx{field, spec.d, checks};
    Accum acc = enumerate_subsets(q, sizes, spec.workers, [&](const std::vector<std::uint64_t>& subset, Accum& a) {
      ScalarSet set(field);
      for (auto i : subset) set.insert(Elem{static_cast<std::uint32_t>(i)});
      eval_scalar(ctx, set, a);
    });

    RunResult r;
    r.report = header("cover-exhaustive");
    r.report["field"] = field_descriptor(*field);
    r.report["spec"] = spec_echo(spec, sizes, checks);
    std::uint64_t subsets = 0;
    for (const auto& [k, t] : acc.sizes) subsets += t.sets;
    r.report["subsets_checked"] = json_integer(BigInt(subsets));
    r.report["sizes"] = size_table(acc, threshold);
    // Smallest enumerated size from which every enumerated size covers.
    std::optional<std::uint64_t> empirical;
    for (auto it = acc.sizes.rbegin(); it != acc.sizes.rend() && it->second.covering == it->second.sets; ++it)
      empirical = it->first;
    r.report["empirical_threshold"] = empirical ? Json(*empirical) : Json(nullptr);
    std::vector<std::uint64_t> boundary;
    for (auto k : sizes)
      if (ipow(BigInt(k), 2 * static_cast<std::uint64_t>(spec.d)) ==
          ipow(BigInt(q), static_cast<std::uint64_t>(spec.d) + 1))
        boundary.push_back(k);
    r.report["boundary_sizes"] = boundary;
    write_results(r.report, acc);
    r.exit_code = finish(r.report, acc);
    add_timing(r.report, spec.timing, start);
    return r;
  } catch (const Error& err) {
    return error_result("cover-exhaustive", err);
  }
}

RunResult cmd_cover_sample(const ExperimentSpec& spec) {
  const auto start = Clock::now();
  try {
    const FieldPtr field = make_field(spec.p, spec.n);
    const std::uint32_t q = field->q();
    if (spec.mode == Mode::Exhaustive) throw Error(ErrorCode::BadSpec, "use cover-exhaustive for exhaustive mode");
    const auto checks =
        select_checks(spec, {"cover", "keylowerbound", "bilinear", "remainder", "second_moment", "identities"},
                      {"cover", "keylowerbound"}, "cover-sample");
    auto threshold = [&](std::uint64_t k) { return sumset_cover_threshold(k, q, spec.d); };
    const auto sizes = sizes_from(spec, q, threshold, false);
    const Context ctx{field, spec.d, checks};

    Accum acc;
    for (auto k : sizes) {
      acc.merge(run_sharded(spec.samples, spec.workers, [&](std::uint64_t begin, std::uint64_t end, Accum& a) {
        for (std::uint64_t i = begin; i < end; ++i) {
          CounterRng rng(spec.seed, stream_id(kTagScalar, k, i));
          std::vector<std::uint32_t> idx;
          for (auto v : random_subset(rng, q, k)) idx.push_back(static_cast<std::uint32_t>(v));
          eval_scalar(ctx, ScalarSet::from_indices(field, idx), a);
          if (ctx.wants("bilinear")) {
            CounterRng brng(spec.seed, stream_id(kTagBilinear, k, i));
            std::vector<ScalarSet> as, bs;
            for (int j = 0; j < 2 * spec.d; ++j) {
              std::vector<std::uint32_t> sidx;
              for (auto v : random_subset(brng, q, k)) sidx.push_back(static_cast<std::uint32_t>(v));
              (j % 2 == 0 ? as : bs).push_back(ScalarSet::from_indices(field, sidx));
            }
            eval_bilinear(ctx, as, bs, a);
          }
        }
      }));
    }

    RunResult r;
    r.report = header("cover-sample");
    r.report["field"] = field_descriptor(*field);
    r.report["spec"] = spec_echo(spec, sizes, checks);
    r.report["sizes"] = size_table(acc, threshold);
    if (spec.mode == Mode::Structured) {
      Json fams = Json::array();
      for (auto& fam : structured_scalar_sets(field)) {
        Accum local;
        eval_scalar(ctx, fam.set, local);
        Json row;
        row["family"] = fam.family;
        row["size"] = fam.set.size();
        row["threshold_met"] = threshold(fam.set.size());
        row["covers_units"] = covers_units(dA2(fam.set, spec.d)).covers;
        fams.push_back(row);
        acc.merge(std::move(local));
      }
      r.report["structured"] = fams;
    }
    write_results(r.report, acc);
    r.exit_code = finish(r.report, acc);
    add_timing(r.report, spec.timing, start);
    return r;
  } catch (const Error& err) {
    return error_result("cover-sample", err);
  }
}

RunResult cmd_sharpness(const ExperimentSpec& spec) {
  const auto start = Clock::now();
  try {
    const FieldPtr field = make_field(spec.p, spec.n);
    const std::uint32_t q = field->q();
    if (spec.dmax < 1) throw Error(ErrorCode::BadSpec, "--dmax must be >= 1");
    RunResult r;
    r.report = header("sharpness");
    r.report["field"] = field_descriptor(*field);
    Json echo;
    echo["d"] = spec.d;
    echo["dmax"] = spec.dmax;
    r.report["spec"] = echo;

    bool closure_failed = false;
    Json sub;
    try {
      const ScalarSet s = square_root_subfield(field);
      sub["size"] = s.size();
      sub["elements"] = indices_of(s);
      int closed_up_to = 0;
      bool covers_any = false;
      for (int dd = 1; dd <= spec.dmax; ++dd) {
        const ScalarSet sums = dA2(s, dd);
        covers_any = covers_any || covers_units(sums).covers;
        if (!(sums == s)) break;
        closed_up_to = dd;
      }
      sub["closed_up_to"] = closed_up_to;
      sub["closed"] = closed_up_to == spec.dmax;
      sub["covers_units"] = covers_any;
      sub["missing_count"] = covers_units(dA2(s, spec.d)).missing.size();
      sub["ratio"] = ratio_to_threshold(s.size(), q, spec.d);
      closure_failed = closed_up_to != spec.dmax || covers_any;
    } catch (const Error& err) {
      if (err.code() != ErrorCode::NoProperSubfield) throw;
      sub["error"] = std::string(to_string(err.code()));
      sub["message"] = err.what();
    }
    r.report["subfield"] = sub;

    const Context ctx{field, spec.d, {"cover"}};
    Accum acc;
    Json fams = Json::array();
    std::optional<NamedScalarSet> largest;
    for (auto& fam : structured_scalar_sets(field)) {
      const UnitCoverage cov = covers_units(dA2(fam.set, spec.d));
      eval_scalar(ctx, fam.set, acc);
      Json row;
      row["family"] = fam.family;
      row["size"] = fam.set.size();
      row["covers_units"] = cov.covers;
      row["threshold_met"] = sumset_cover_threshold(fam.set, spec.d);
      row["ratio"] = ratio_to_threshold(fam.set.size(), q, spec.d);
      fams.push_back(row);
      if (!cov.covers && (!largest || fam.set.size() > largest->set.size())) largest = fam;
    }
    r.report["families"] = fams;
    if (largest) {
      Json l;
      l["family"] = largest->family;
      l["size"] = largest->set.size();
      l["ratio"] = ratio_to_threshold(largest->set.size(), q, spec.d);
      r.report["largest_noncovering"] = l;
    } else {
      r.report["largest_noncovering"] = nullptr;
    }
    write_results(r.report, acc);
    r.exit_code = finish(r.report, acc);
    if (r.exit_code == kOk && closure_failed) {
      r.report["status"] = "failure";
      r.exit_code = kFailure;
    }
    add_timing(r.report, spec.timing, start);
    return r;
  } catch (const Error& err) {
    return error_result("sharpness", err);
  }
}

RunResult cmd_geometry(const ExperimentSpec& spec) {
  const auto start = Clock::now();
  try {
    const FieldPtr field = make_field(spec.p, spec.n);
    const Space space(field, spec.d);
    const auto checks =
        select_checks(spec, {"cover", "remainder", "keylowerbound", "identities", "second_moment"},
                      {"cover", "remainder", "keylowerbound", "identities", "second_moment"}, "geometry");
    const Context ctx{field, spec.d, checks};
    const BigInt bound = ipow(BigInt(space.q()), static_cast<std::uint64_t>(spec.d) + 1);
    auto threshold = [&](std::uint64_t k) { return BigInt(k) * k > bound; };

    Accum acc;
    std::vector<std::uint64_t> sizes;
    Json structured = Json::array();
    switch (spec.mode) {
      case Mode::Exhaustive: {
        sizes = sizes_from(spec, space.size(), threshold, true);
        check_budget(space.size(), sizes);
        acc = enumerate_subsets(space.size(), sizes, spec.workers,
                                [&](const std::vector<std::uint64_t>& subset, Accum& a) {
                                  eval_points(ctx, PointSet::from_points(space, subset), a);
                                });
        break;
      }
      case Mode::Sample: {
        sizes = sizes_from(spec, space.size(), threshold, false);
        for (auto k : sizes) {
          acc.merge(run_sharded(spec.samples, spec.workers, [&](std::uint64_t begin, std::uint64_t end, Accum& a) {
            for (std::uint64_t i = begin; i < end; ++i) {
              CounterRng rng(spec.seed, stream_id(kTagPoints, k, i));
              eval_points(ctx, PointSet::from_points(space, random_subset(rng, space.size(), k)), a);
            }
          }));
        }
        break;
      }
      case Mode::Structured: {
        auto sets = structured_point_sets(space, spec.seed);
        acc = run_sharded(sets.size(), spec.workers, [&](std::uint64_t begin, std::uint64_t end, Accum& a) {
          for (std::uint64_t i = begin; i < end; ++i) eval_points(ctx, sets[i].set, a);
        });
        for (const auto& s : sets) {
          Json row;
          row["family"] = s.family;
          row["size"] = s.set.size();
          row["contains_origin"] = s.set.contains_origin();
          structured.push_back(row);
        }
        break;
      }
    }

    RunResult r;
    r.report = header("geometry");
    r.report["field"] = field_descriptor(*field);
    r.report["spec"] = spec_echo(spec, sizes, checks);
    r.report["sizes"] = size_table(acc, threshold);
    if (spec.mode == Mode::Structured) r.report["structured"] = structured;
    if (acc.worst_remainder >= 0) {
      r.report["worst_remainder_set"] = acc.worst_remainder_set;
      r.profile = nu_profile(PointSet::from_points(space, acc.worst_remainder_set));
    }
    write_results(r.report, acc);
    r.exit_code = finish(r.report, acc);
    add_timing(r.report, spec.timing, start);
    return r;
  } catch (const Error& err) {
    return error_result("geometry", err);
  }
}

RunResult cmd_d_of_eps(std::string_view eps) {
  try {
    const Rational r = parse_rational(eps);
    const DOfEps out = d_of_eps(r);
    RunResult res;
    res.report = header("d-of-eps");
    res.report["eps"] = std::to_string(r.num) + "/" + std::to_string(r.den);
    res.report["d_cover"] = out.d_cover;
    res.report["d_proportion"] = out.d_proportion;
    res.report["status"] = "ok";
    return res;
  } catch (const Error& err) {
    return error_result("d-of-eps", err);
  }
}

// ---------------------------------------------------------------------------
// selftest

namespace {

struct SelftestLog {
  Json rows = Json::array();
  std::uint64_t passed = 0;
  std::uint64_t failed = 0;

  void add(std::string_view check, const Field& f, int d, bool ok, std::optional<double> err = std::nullopt,
           std::string message = {}) {
    Json row;
    row["check"] = std::string(check);
    row["q"] = f.q();
    if (d > 0) row["d"] = d;
    row["ok"] = ok;
    if (err) row["max_error"] = *err;
    if (!message.empty()) row["message"] = message;
    rows.push_back(row);
    (ok ? passed : failed) += 1;
  }

  template <class Fn>
  void run(std::string_view check, const Field& f, int d, Fn&& fn) {
    try {
      auto [ok, err] = fn();
      add(check, f, d, ok, err);
    } catch (const std::exception& e) {
      add(check, f, d, false, std::nullopt, e.what());
    }
  }
};

double unit_double(CounterRng& rng) { return static_cast<double>(rng.next() >> 11) * 0x1.0p-53; }

SpectralFn random_function(const Space& space, CounterRng& rng) {
  SpectralFn f(space);
  for (auto& v : f.values) v = Complex(2 * unit_double(rng) - 1, 2 * unit_double(rng) - 1) / std::sqrt(2.0);
  return f;
}

PointSet random_points(const Space& space, CounterRng& rng, std::uint64_t max_size) {
  const std::uint64_t k = 1 + rng.uniform(std::min(space.size(), max_size));
  return PointSet::from_points(space, random_subset(rng, space.size(), k));
}

using Outcome = std::pair<bool, std::optional<double>>;

void field_checks(const Field& f, SelftestLog& log) {
  const std::uint32_t q = f.q();
  log.run("field_axioms", f, 0, [&]() -> Outcome {
    for (std::uint32_t a = 0; a < q; ++a) {
      const Elem x{a};
      if (f.add(x, f.zero()) != x || f.mul(x, f.one()) != x || f.add(x, f.neg(x)) != f.zero()) return {false, {}};
      if (a != 0 && f.mul(x, f.inv(x)) != f.one()) return {false, {}};
      for (std::uint32_t b = 0; b < q; ++b) {
        const Elem y{b};
        if (f.add(x, y) != f.add(y, x) || f.mul(x, y) != f.mul(y, x)) return {false, {}};
        for (std::uint32_t c = 0; c < q; ++c) {
          const Elem z{c};
          if (f.add(f.add(x, y), z) != f.add(x, f.add(y, z))) return {false, {}};
          if (f.mul(f.mul(x, y), z) != f.mul(x, f.mul(y, z))) return {false, {}};
          if (f.mul(x, f.add(y, z)) != f.add(f.mul(x, y), f.mul(x, z))) return {false, {}};
        }
      }
    }
    return {true, {}};
  });
  log.run("frobenius", f, 0, [&]() -> Outcome {
    for (std::uint32_t a = 0; a < q; ++a)
      for (std::uint32_t b = 0; b < q; ++b)
        if (f.frobenius(f.add(Elem{a}, Elem{b})) != f.add(f.frobenius(Elem{a}), f.frobenius(Elem{b})))
          return {false, {}};
    return {true, {}};
  });
  log.run("trace", f, 0, [&]() -> Outcome {
    std::vector<bool> hit(f.p(), false);
    for (std::uint32_t a = 0; a < q; ++a) {
      hit[f.trace(Elem{a})] = true;
      for (std::uint32_t b = 0; b < q; ++b)
        if (f.trace(f.add(Elem{a}, Elem{b})) != (f.trace(Elem{a}) + f.trace(Elem{b})) % f.p()) return {false, {}};
    }
    return {std::all_of(hit.begin(), hit.end(), [](bool h) { return h; }), {}};
  });
  log.run("orthogonality", f, 0, [&]() -> Outcome {
    double worst = 0.0;
    for (std::uint32_t a = 0; a < q; ++a) {
      Complex sum{};
      for (std::uint32_t t = 0; t < q; ++t) sum += f.chi(f.neg(f.mul(Elem{a}, Elem{t})));
      worst = std::max(worst, std::abs(sum - Complex(a == 0 ? q : 0, 0)));
    }
    return {worst <= 1e-9 * q, worst};
  });
}

void space_checks(const FieldPtr& field, int d, std::uint64_t seed, SelftestLog& log) {
  const Space space(field, d);
  const Field& f = *field;
  CounterRng rng(seed, stream_id(kTagSelftest, f.q(), static_cast<std::uint64_t>(d)));
  constexpr std::uint64_t kMaxSet = 256;

  log.run("inversion", f, d, [&]() -> Outcome {
    const SpectralFn g = random_function(space, rng);
    const SpectralFn back = fourier_invert(fourier_forward(g));
    double worst = 0.0;
    for (std::size_t i = 0; i < g.values.size(); ++i) worst = std::max(worst, std::abs(back.values[i] - g.values[i]));
    return {worst <= 1e-9, worst};
  });
  log.run("plancherel", f, d, [&]() -> Outcome {
    const auto sides = plancherel_check(random_function(space, rng), random_function(space, rng));
    return {sides.agrees(1e-9), std::abs(sides.lhs - sides.rhs)};
  });
  log.run("plancherel_indicator", f, d, [&]() -> Outcome {
    const PointSet e = random_points(space, rng, kMaxSet);
    const auto sides = plancherel_check(indicator(e), indicator(e));
    const double expect = static_cast<double>(e.size()) / static_cast<double>(space.size());
    return {sides.agrees(1e-9) && std::abs(sides.rhs - expect) <= 1e-12, std::abs(sides.lhs - sides.rhs)};
  });
  log.run("hatG_identity", f, d, [&]() -> Outcome {
    return {true, verify_hatG_identity(random_points(space, rng, kMaxSet)).max_rel_error};
  });
  log.run("hatF_identity", f, d, [&]() -> Outcome {
    return {true, verify_hatF_identity(strip_origin(random_points(space, rng, kMaxSet))).max_rel_error};
  });
  const PointSet e = strip_origin(random_points(space, rng, kMaxSet));
  const NuProfile brute = nu_bruteforce(e);
  log.run("nu_consistency", f, d, [&]() -> Outcome {
    const NuProfile spectral = nu_spectral(e);
    return {spectral == brute && brute.total() == e.size() * e.size(), {}};
  });
  log.run("remainder_bound", f, d, [&]() -> Outcome {
    return {true, remainder_bound_check(e, brute, RemainderScope::NonzeroT).sharpness};
  });
  log.run("second_moment", f, d, [&]() -> Outcome {
    const auto r = second_moment_check(e, brute);
    return {r.holds && r.fg_stage_holds, {}};
  });
  log.run("dot_set_lower_bound", f, d, [&]() -> Outcome {
    return {dot_set_lower_bound_check(e).inequality_holds, {}};
  });
  if (space.size() <= 729) {
    log.run("rotating_planes", f, d, [&]() -> Outcome {
      const SpectralFn ind = indicator(e);
      for (std::uint32_t t = 0; t < f.q(); ++t) {
        const SpectralFn rt = rotating_planes_apply(ind, Elem{t});
        double sum = 0.0;
        for (auto x : e.members()) sum += rt.values[x].real();
        if (std::llround(sum) != static_cast<long long>(brute.nu[t])) return {false, {}};
      }
      return {true, {}};
    });
  }
}

}  // namespace

RunResult cmd_selftest(const SelftestOptions& options) {
  const auto start = Clock::now();
  RunResult r;
  r.report = header("selftest");
  if (options.inject_bad_modulus) {
    // x^2 + 1 = (x + 1)^2 over F_2.
    try {
      make_field_with_modulus(2, {1, 0, 1});
      r.report["status"] = "failure";
      r.report["message"] = "reducible modulus x^2+1 over F_2 was accepted";
    } catch (const Error& err) {
      r.report["status"] = "failure";
      r.report["error"] = std::string(to_string(err.code()));
      r.report["message"] = err.what();
    }
    r.exit_code = kFailure;
    return r;
  }

  static constexpr std::pair<std::uint64_t, std::int64_t> kRoster[] = {
      {2, 1}, {3, 1}, {2, 2}, {5, 1}, {7, 1}, {2, 3}, {3, 2}, {13, 1}, {2, 4}, {5, 2}};
  SelftestLog log;
  Json roster = Json::array();
  for (auto [p, n] : kRoster) {
    const FieldPtr field = make_field(p, n);
    roster.push_back(field_descriptor(*field));
    field_checks(*field, log);
    for (int d = 1; d <= 3; ++d) space_checks(field, d, options.seed, log);
  }
  r.report["roster"] = roster;
  r.report["seed"] = json_integer(BigInt(options.seed));
  r.report["results"] = log.rows;
  r.report["passed"] = log.passed;
  r.report["failed"] = log.failed;
  r.report["status"] = log.failed == 0 ? "ok" : "failure";
  r.exit_code = log.failed == 0 ? kOk : kFailure;
  add_timing(r.report, options.timing, start);
  return r;
}

}  // namespace dotcover::harness
