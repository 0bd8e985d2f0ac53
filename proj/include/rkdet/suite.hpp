#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rkdet {

struct SuiteFailure {
  std::string property;
  std::uint64_t seed;  // reproduces the failure via run_property
  std::string digest;  // FNV-1a of the generated inputs
  double margin;       // negative slack; NaN when the check threw
  std::optional<std::string> error;
};

struct SuiteResult {
  std::size_t trials = 0;
  std::size_t checks = 0;
  std::vector<SuiteFailure> failures;  // sorted by seed
  double wall_time_s = 0.0;

  bool passed() const noexcept { return failures.empty(); }
};

struct PropertyOutcome {
  double margin;  // pass iff margin >= 0
  std::string digest;
};

/// Names of the registered property checks, in execution order.
std::vector<std::string> property_names();

/// Runs one property on the instance derived from `seed`.
/// Throws ConfigurationError for an unknown property name.
PropertyOutcome run_property(const std::string& name, std::uint64_t seed, std::size_t max_dim);

/// Runs every registered property once per trial; the per-check seed is
/// derive_seed(derive_seed(seed, trial), property index).
SuiteResult run_suite(std::size_t trials, std::uint64_t seed, std::size_t max_dim);

}  // namespace rkdet
