#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dotcover/error.hpp"
#include "dotcover/harness.hpp"

namespace hx = dotcover::harness;

namespace {

struct CommonFlags {
  std::uint64_t p = 5;
  std::int64_t n = 1;
  int d = 2;
  std::string mode;
  std::string sizes;
  std::uint64_t samples = 1000;
  std::uint64_t seed = 0;
  std::string checks;
  std::string out;
  std::string csv;
  unsigned workers = 1;
  int dmax = 6;
  bool timing = false;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_mode) {
  cmd->add_option("--p", f.p, "Field characteristic (prime)");
  cmd->add_option("--n", f.n, "Extension degree");
  cmd->add_option("--d", f.d, "Dimension / number of summands");
  cmd->add_option("--sizes", f.sizes, "Size range a..b (or a single size)");
  cmd->add_option("--samples", f.samples, "Samples per size");
  cmd->add_option("--seed", f.seed, "64-bit seed");
  cmd->add_option("--checks", f.checks, "Comma-separated checks");
  cmd->add_option("--out", f.out, "Write the JSON report here instead of stdout");
  cmd->add_option("--workers", f.workers, "Worker threads");
  cmd->add_flag("--timing", f.timing, "Include wall-clock time in the report");
  if (with_mode) cmd->add_option("--mode", f.mode, "exhaustive | sample | structured");
}

hx::ExperimentSpec to_spec(const CommonFlags& f, hx::Mode default_mode) {
  hx::ExperimentSpec spec;
  spec.p = f.p;
  spec.n = f.n;
  spec.d = f.d;
  spec.mode = f.mode.empty() ? default_mode : hx::parse_mode(f.mode);
  if (!f.sizes.empty()) spec.sizes = hx::parse_size_range(f.sizes);
  spec.samples = f.samples;
  spec.seed = f.seed;
  if (!f.checks.empty()) spec.checks = hx::parse_checks(f.checks);
  spec.workers = f.workers;
  spec.dmax = f.dmax;
  spec.timing = f.timing;
  return spec;
}

int emit(const hx::RunResult& result, const CommonFlags& f) {
  const std::string text = hx::render(result.report);
  if (f.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream os(f.out, std::ios::binary | std::ios::trunc);
    if (!os) {
      std::cerr << "cannot write " << f.out << "\n";
      return hx::kFailure;
    }
    os << text;
  }
  if (!f.csv.empty()) {
    if (!result.profile) {
      std::cerr << "no nu profile was produced for --csv\n";
    } else {
      std::ofstream os(f.csv, std::ios::binary | std::ios::trunc);
      dotcover::write_csv(*result.profile, os);
    }
  }
  const auto status = result.report.value("status", std::string("ok"));
  if (result.exit_code != hx::kOk) std::cerr << "status: " << status << " (exit " << result.exit_code << ")\n";
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-field dot-product and sum-product coverage harness"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(hx::kVersion));

  CommonFlags f;
  bool inject_bad_modulus = false;
  std::string eps;

  auto* selftest = app.add_subcommand("selftest", "Field axioms and Fourier/incidence identity suite");
  selftest->add_option("--seed", f.seed, "64-bit seed");
  selftest->add_option("--out", f.out, "Write the JSON report here instead of stdout");
  selftest->add_flag("--timing", f.timing, "Include wall-clock time in the report");
  selftest->add_flag("--inject-bad-modulus", inject_bad_modulus, "Test hook: build GF(4) over a reducible modulus");

  auto* exhaustive = app.add_subcommand("cover-exhaustive", "Enumerate every A above the threshold");
  add_common(exhaustive, f, false);
  auto* sample = app.add_subcommand("cover-sample", "Seeded random subsets A");
  add_common(sample, f, true);
  auto* sharp = app.add_subcommand("sharpness", "Subfield obstruction and structured non-covering sets");
  add_common(sharp, f, false);
  sharp->add_option("--dmax", f.dmax, "Closure depth for the subfield check");
  auto* geometry = app.add_subcommand("geometry", "Incidence bounds and spectral identities on E in F_q^d");
  add_common(geometry, f, true);
  geometry->add_option("--csv", f.csv, "Write the nu profile of the sharpest set as CSV");
  auto* deps = app.add_subcommand("d-of-eps", "Number of summands needed for a given epsilon");
  deps->add_option("eps", eps, "Exact rational, e.g. 1/10 or 0.25")->required();
  deps->add_option("--out", f.out, "Write the JSON report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : hx::kBadSpec;
  }

  try {
    if (*selftest) return emit(hx::cmd_selftest({f.seed, inject_bad_modulus, f.timing}), f);
    if (*exhaustive) return emit(hx::cmd_cover_exhaustive(to_spec(f, hx::Mode::Exhaustive)), f);
    if (*sample) return emit(hx::cmd_cover_sample(to_spec(f, hx::Mode::Sample)), f);
    if (*sharp) return emit(hx::cmd_sharpness(to_spec(f, hx::Mode::Structured)), f);
    if (*geometry) return emit(hx::cmd_geometry(to_spec(f, hx::Mode::Sample)), f);
    if (*deps) return emit(hx::cmd_d_of_eps(eps), f);
  } catch (const dotcover::Error& e) {
    std::cerr << e.what() << "\n";
    return hx::kBadSpec;
  }
  return hx::kBadSpec;
}
