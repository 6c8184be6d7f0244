#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace fitevo {

struct Check {
  std::string name;
  bool passed = false;
  std::string observed;
  std::string expected;
  /// Informational checks are printed but never fail a criterion.
  bool gating = true;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  /// Demonstrations report their outcome but never fail.
  bool gating = true;
  double seconds = 0.0;

  bool passed() const;
};

inline constexpr int kCriterionCount = 10;
inline constexpr std::uint64_t kDefaultVerifySeed = 20'240'601;

/// Runs acceptance criterion `id` in 1..10 with base seed `seed`.
CriterionResult run_criterion(int id, std::uint64_t seed = kDefaultVerifySeed);

/// Criteria grouped under a `verify --suite` name: tables, duality, shape,
/// kill, recurrence, bp, heavy-tail, determinism, counterexample, all.
/// Throws ConfigError for unknown names.
std::vector<int> suite_criteria(std::string_view suite);
std::vector<std::string> suite_names();

/// One line per check plus a PASS/FAIL summary line for the criterion.
std::string format_result(const CriterionResult& r);

}  // namespace fitevo
