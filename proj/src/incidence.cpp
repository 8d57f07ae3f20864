#include "dotcover/incidence.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <thread>

#include "dotcover/error.hpp"

namespace dotcover {

namespace {

constexpr std::uint64_t kBruteForcePairLimit = 100'000'000;

void require_origin_free(const PointSet& e, const char* op) {
  if (e.contains_origin())
    throw Error(ErrorCode::OriginInSet, std::string(op) + " requires a set without the origin");
}

}  // namespace

PointSet::PointSet(Space space) : space_(std::move(space)), bits_(space_.size()) {}

PointSet PointSet::from_points(Space space, std::span<const PointIndex> points) {
  PointSet e(std::move(space));
  for (auto x : points) e.insert(x);
  return e;
}

PointSet PointSet::full(Space space) {
  PointSet e(std::move(space));
  e.bits_.set();
  return e;
}

std::vector<PointIndex> PointSet::members() const {
  std::vector<PointIndex> out;
  out.reserve(size());
  for (auto i = bits_.find_first(); i != boost::dynamic_bitset<std::uint64_t>::npos; i = bits_.find_next(i))
    out.push_back(i);
  return out;
}

PointSet strip_origin(PointSet e) {
  e.erase(0);
  return e;
}

SpectralFn indicator(const PointSet& e) {
  SpectralFn f(e.space());
  for (auto x : e.members()) f.values[x] = 1.0;
  return f;
}

std::uint64_t NuProfile::total() const {
  std::uint64_t sum = 0;
  for (auto v : nu) sum += v;
  return sum;
}

BigInt NuProfile::remainder_numerator(std::uint32_t t) const {
  return BigInt(q) * nu.at(t) - BigInt(set_size) * set_size;
}

NuProfile nu_bruteforce(const PointSet& e, unsigned workers) {
  const Space& space = e.space();
  const std::uint32_t q = space.q();
  const auto pts = e.members();
  NuProfile profile{q, pts.size(), std::vector<std::uint64_t>(q, 0)};

  auto count_rows = [&](std::size_t begin, std::size_t end, std::vector<std::uint64_t>& hist) {
    for (std::size_t i = begin; i < end; ++i)
      for (auto y : pts) ++hist[space.dot(pts[i], y).idx];
  };

  workers = std::max(1U, workers);
  if (workers == 1 || pts.size() < 2 * std::size_t{workers}) {
    count_rows(0, pts.size(), profile.nu);
    return profile;
  }
  std::vector<std::vector<std::uint64_t>> partial(workers, std::vector<std::uint64_t>(q, 0));
  std::vector<std::thread> pool;
  const std::size_t chunk = (pts.size() + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t begin = std::min(pts.size(), w * chunk);
    const std::size_t end = std::min(pts.size(), begin + chunk);
    pool.emplace_back(count_rows, begin, end, std::ref(partial[w]));
  }
  for (auto& t : pool) t.join();
  for (const auto& hist : partial)
    for (std::uint32_t t = 0; t < q; ++t) profile.nu[t] += hist[t];
  return profile;
}

NuProfile nu_spectral(const PointSet& e) {
  const Space& space = e.space();
  const Field& field = space.field();
  const std::uint32_t q = field.q();
  const std::uint32_t p = field.p();
  const auto pts = e.members();
  const std::uint64_t n = pts.size();
  NuProfile profile{q, n, std::vector<std::uint64_t>(q, 0)};
  if (n == 0) return profile;

  const SpectralFn ehat = fourier_forward(indicator(e));
  const double scale = static_cast<double>(space.size());
  std::vector<Complex> pair_sum(q);  // S(s)
  for (std::uint32_t s = 0; s < q; ++s) {
    const Elem minus_s = field.neg(Elem{s});
    Complex acc{};
    for (auto x : pts) acc += ehat.values[space.scale(minus_s, x)];
    pair_sum[s] = acc * scale;
  }

  double worst_defect = 0.0;
  for (std::uint32_t t = 0; t < q; ++t) {
    Complex acc{};
    for (std::uint32_t s = 0; s < q; ++s) {
      const std::uint32_t tr = field.trace(field.mul(Elem{s}, Elem{t}));
      acc += field.root_of_unity((p - tr) % p) * pair_sum[s];
    }
    acc /= static_cast<double>(q);
    const double rounded = std::round(acc.real());
    worst_defect = std::max({worst_defect, std::abs(acc.real() - rounded), std::abs(acc.imag())});
    if (rounded < 0)
      throw Error(ErrorCode::SpectralMismatch, "negative count at t=" + std::to_string(t));
    profile.nu[t] = static_cast<std::uint64_t>(rounded);
  }
  if (worst_defect >= 1e-6)
    throw Error(ErrorCode::SpectralMismatch, "pre-rounding defect " + std::to_string(worst_defect));
  if (profile.total() != n * n)
    throw Error(ErrorCode::SpectralMismatch, "mass " + std::to_string(profile.total()) + " != |E|^2");
  if (n * n <= kBruteForcePairLimit) {
    std::uint64_t zero_count = 0;
    for (auto x : pts)
      for (auto y : pts) zero_count += space.dot(x, y).idx == 0 ? 1 : 0;
    if (zero_count != profile.nu[0])
      throw Error(ErrorCode::SpectralMismatch, "nu(0) spectral " + std::to_string(profile.nu[0]) +
                                                   " vs direct " + std::to_string(zero_count));
  }
  return profile;
}

NuProfile nu_profile(const PointSet& e, unsigned workers) {
  const std::uint64_t n = e.size();
  if (n * n <= kBruteForcePairLimit) return nu_bruteforce(e, workers);
  return nu_spectral(e);
}

void write_csv(const NuProfile& profile, std::ostream& os) {
  os << "t_index,nu,r_numerator\n";
  for (std::uint32_t t = 0; t < profile.q; ++t)
    os << t << ',' << profile.nu[t] << ',' << profile.remainder_numerator(t).str() << '\n';
}

RemainderReport remainder_bound_check(const PointSet& e, const NuProfile& profile, RemainderScope scope) {
  const Space& space = e.space();
  const BigInt n(profile.set_size);
  RemainderReport report;
  report.bound = n * n * ipow(BigInt(space.q()), static_cast<std::uint64_t>(space.dim()) + 1);
  const BigInt r0 = profile.remainder_numerator(0);
  report.zero_square = r0 * r0;
  report.zero_ratio = report.bound == 0 ? 0.0 : to_double(report.zero_square) / to_double(report.bound);
  bool first = true;
  for (std::uint32_t t = scope == RemainderScope::AllT ? 0 : 1; t < profile.q; ++t) {
    const BigInt r = profile.remainder_numerator(t);
    const BigInt sq = r * r;
    if (sq > report.bound)
      throw Error(ErrorCode::BoundViolated, "t=" + std::to_string(t) + ": (q nu - |E|^2)^2 = " + sq.str() +
                                                " > " + report.bound.str());
    if (first || sq > report.worst_square) {
      report.worst_square = sq;
      report.worst_t = t;
      first = false;
    }
  }
  report.sharpness = report.bound == 0 ? 0.0 : to_double(report.worst_square) / to_double(report.bound);
  return report;
}

RemainderReport remainder_bound_check(const PointSet& e, RemainderScope scope) {
  return remainder_bound_check(e, nu_profile(e), scope);
}

SpectralFn rotating_planes_apply(const SpectralFn& f, Elem t) {
  const Space& space = f.space;
  SpectralFn out(space);
  for (PointIndex x = 0; x < space.size(); ++x) {
    Complex acc{};
    for (PointIndex y = 0; y < space.size(); ++y)
      if (space.dot(x, y) == t) acc += f.values[y];
    out.values[x] = acc;
  }
  return out;
}

std::uint64_t line_intersection(const PointSet& e, PointIndex y) {
  const Space& space = e.space();
  if (y == 0) throw Error(ErrorCode::ZeroDirection, "line direction must be nonzero");
  std::uint64_t count = 0;
  for (std::uint32_t s = 0; s < space.q(); ++s) count += e.contains(space.scale(Elem{s}, y)) ? 1 : 0;
  return count;
}

std::uint64_t line_intersection(const PointSet& e, std::span<const Elem> y) {
  return line_intersection(e, e.space().flat(y));
}

std::vector<PointIndex> canonical_directions(const Space& space) {
  std::vector<PointIndex> out;
  boost::dynamic_bitset<std::uint64_t> seen(space.size());
  for (PointIndex y = 1; y < space.size(); ++y) {
    if (seen.test(y)) continue;
    out.push_back(y);
    for (std::uint32_t s = 1; s < space.q(); ++s) seen.set(space.scale(Elem{s}, y));
  }
  return out;
}

LineMax max_line_intersection(const PointSet& e) {
  LineMax best;
  bool first = true;
  for (auto y : canonical_directions(e.space())) {
    const std::uint64_t c = line_intersection(e, y);
    if (first || c > best.count) {
      best = {c, y};
      first = false;
    }
  }
  return best;
}

std::vector<std::uint64_t> hyperplane_counts(const PointSet& e) {
  const Space& space = e.space();
  const auto pts = e.members();
  std::vector<std::uint64_t> out(space.size(), 0);
  for (PointIndex m = 0; m < space.size(); ++m) {
    std::uint64_t c = 0;
    for (auto x : pts) c += space.dot(x, m).idx == 0 ? 1 : 0;
    out[m] = c;
  }
  return out;
}

SpectralFn hyperplane_sum(const PointSet& e) {
  const auto counts = hyperplane_counts(e);
  SpectralFn f(e.space());
  for (std::size_t m = 0; m < counts.size(); ++m) f.values[m] = static_cast<double>(counts[m]);
  return f;
}

namespace {

void record(IdentityReport& report, PointIndex k, Complex lhs, Complex rhs) {
  const double err = std::abs(lhs - rhs);
  const double rel = err / std::max(1.0, std::abs(rhs));
  report.max_error = std::max(report.max_error, err);
  if (rel > report.max_rel_error) {
    report.max_rel_error = rel;
    report.worst_k = k;
  }
}

void require_within(const IdentityReport& report, const char* name) {
  if (report.max_rel_error > kIdentityTolerance)
    throw Error(ErrorCode::IdentityViolated, std::string(name) + " off by " +
                                                 std::to_string(report.max_rel_error) + " at k=" +
                                                 std::to_string(report.worst_k));
}

}  // namespace

IdentityReport verify_hatF_identity(const PointSet& e) {
  require_origin_free(e, "verify_hatF_identity");
  const Space& space = e.space();
  const double q = space.q();
  const SpectralFn fhat = fourier_forward(hyperplane_sum(e));
  IdentityReport report;
  for (PointIndex k = 0; k < space.size(); ++k) {
    const double count = k == 0 ? static_cast<double>(e.size()) : static_cast<double>(line_intersection(e, k));
    record(report, k, fhat.values[k], count / q);
  }
  require_within(report, "Fhat(k) = |E cap l_k| / q");
  return report;
}

IdentityReport verify_hatG_identity(const PointSet& e) {
  const Space& space = e.space();
  const SpectralFn ind = indicator(e);
  const SpectralFn ehat = fourier_forward(ind);
  const SpectralFn ghat = fourier_forward(convolve_diff(ind, ind));
  const double qd = static_cast<double>(space.size());
  IdentityReport report;
  for (PointIndex k = 0; k < space.size(); ++k) record(report, k, ghat.values[k], qd * std::norm(ehat.values[k]));
  require_within(report, "Ghat(k) = q^d |Ehat(k)|^2");
  return report;
}

SecondMomentReport second_moment_check(const PointSet& e, const NuProfile& profile) {
  require_origin_free(e, "second_moment_check");
  const Space& space = e.space();
  const BigInt n(e.size());
  const BigInt q(space.q());
  SecondMomentReport report;
  for (auto v : profile.nu) report.sum_nu_squared += BigInt(v) * v;

  // G(m) = #{(y, y') in E x E : y - y' = m}, exact.
  const auto pts = e.members();
  std::vector<std::uint64_t> g(space.size(), 0);
  for (auto y : pts)
    for (auto yp : pts) ++g[space.sub(y, yp)];
  const auto f = hyperplane_counts(e);
  BigInt fg = 0;
  for (std::size_t m = 0; m < g.size(); ++m)
    if (g[m] != 0 && f[m] != 0) fg += BigInt(f[m]) * g[m];
  report.fg_bound = n * fg;
  report.fg_stage_holds = report.sum_nu_squared <= report.fg_bound;

  report.max_line = max_line_intersection(e).count;
  report.lhs = q * report.sum_nu_squared;
  report.rhs = BigInt(report.max_line) * n * n * ipow(q, static_cast<std::uint64_t>(space.dim())) + n * n * n * n;
  report.holds = report.lhs <= report.rhs;
  return report;
}

SecondMomentReport second_moment_check(const PointSet& e) {
  require_origin_free(e, "second_moment_check");
  return second_moment_check(e, nu_profile(e));
}

}  // namespace dotcover
