#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dotcover/incidence.hpp"

namespace dotcover::harness {

inline constexpr std::string_view kVersion = "0.1.0";
inline constexpr int kSchema = 1;
inline constexpr std::uint64_t kEnumerationBudget = 10'000'000;

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kCounterexample = 2,
  kBadSpec = 3,
  kBudgetExceeded = 4,
};

enum class Mode { Exhaustive, Sample, Structured };

std::string_view to_string(Mode mode);
/// Throws BadSpec.
Mode parse_mode(std::string_view text);

struct SizeRange {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
};

/// "a..b" or a single "a". Throws BadSpec.
SizeRange parse_size_range(std::string_view text);
/// Comma-separated check names. Throws BadSpec on unknown names.
std::vector<std::string> parse_checks(std::string_view text);

struct ExperimentSpec {
  std::uint64_t p = 5;
  std::int64_t n = 1;
  int d = 2;
  Mode mode = Mode::Sample;
  std::optional<SizeRange> sizes;
  std::uint64_t samples = 1000;
  std::uint64_t seed = 0;
  std::vector<std::string> checks;  ///< empty selects the command's defaults
  unsigned workers = 1;
  int dmax = 6;                     ///< closure depth for the sharpness command
  bool timing = false;              ///< adds wall-clock to the report (breaks byte-identity)
};

struct RunResult {
  nlohmann::ordered_json report;
  int exit_code = kOk;
  /// Profile of the set with the sharpest remainder bound, when one was computed.
  std::optional<NuProfile> profile;
};

struct SelftestOptions {
  std::uint64_t seed = 0;
  bool inject_bad_modulus = false;
  bool timing = false;
};

RunResult cmd_selftest(const SelftestOptions& options);
RunResult cmd_cover_exhaustive(const ExperimentSpec& spec);
RunResult cmd_cover_sample(const ExperimentSpec& spec);
RunResult cmd_sharpness(const ExperimentSpec& spec);
RunResult cmd_geometry(const ExperimentSpec& spec);
RunResult cmd_d_of_eps(std::string_view eps);

/// Stable serialization: two-space indent and a trailing newline.
std::string render(const nlohmann::ordered_json& report);

/// Integers below 2^53 as JSON numbers, larger ones as decimal strings.
nlohmann::ordered_json json_integer(const BigInt& v);

}  // namespace dotcover::harness
