#pragma once

#include "udist/double_complex.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace udist {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SuiteConfig {
  std::uint32_t M = 3;
  std::vector<std::uint32_t> primes{7, 13, 19};
  std::map<std::uint32_t, std::uint32_t> roots;
  std::optional<std::size_t> max_omega;   // default: every divisor of the full level
  std::vector<std::string> checks;        // empty or {"all"}: every check
  bool timing = false;                    // millis stay 0 unless set, keeping output byte-stable
};

/// Reads the keys M, primes, roots, max_omega, checks (and ignores format/out/timing,
/// which belong to the caller) from a JSON document.
SuiteConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const SuiteConfig& c);

enum class Verdict { pass, fail, error };
std::string to_string(Verdict v);

struct CheckReport {
  std::string name;
  std::string anchor;
  nlohmann::ordered_json params;
  Verdict verdict = Verdict::error;
  nlohmann::ordered_json details;
  double millis = 0;
};

struct SuiteResult {
  std::vector<CheckReport> reports;
  int exit_code = 0;           // 0 pass, 1 failure, 3 internal contradiction
  std::string diagnostic;      // first internal contradiction, if any
};

/// All check names in report order.
const std::vector<std::string>& check_names();
/// Divisors of the full level with ω ≤ max_omega.
std::vector<std::uint64_t> suite_levels(const Context& ctx, std::optional<std::size_t> max_omega);
/// Validates the config; throws ConfigError.
Context build_context(const SuiteConfig& config);

/// Runs the selected checks against a shared workspace.
SuiteResult run_suite(const SuiteConfig& config, const Workspace& ws, const KWorkspace& kws);
SuiteResult run_suite(const SuiteConfig& config);

}  // namespace udist
