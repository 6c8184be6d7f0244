// Acceptance runner: `acceptance [--seed s] [id...]` runs the listed criteria
// (all when none are given) and prints one PASS/FAIL line per criterion.
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "fitevo/verification.hpp"

int main(int argc, char** argv) {
  std::uint64_t seed = fitevo::kDefaultVerifySeed;
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--seed" && i + 1 < argc) {
      seed = std::stoull(argv[++i]);
    } else {
      ids.push_back(std::stoi(arg));
    }
  }
  if (ids.empty()) {
    for (int id = 1; id <= fitevo::kCriterionCount; ++id) ids.push_back(id);
  }

  int failed = 0;
  std::vector<std::string> summary;
  for (int id : ids) {
    const fitevo::CriterionResult r = fitevo::run_criterion(id, seed);
    std::cout << fitevo::format_result(r) << std::flush;
    if (r.gating && !r.passed()) ++failed;
    std::string line = r.gating ? (r.passed() ? "PASS" : "FAIL")
                                : (r.passed() ? "DEMO-PASS" : "DEMO-FAIL");
    summary.push_back(line + " criterion " + std::to_string(id) + ": " + r.title);
  }
  if (ids.size() > 1) {
    std::cout << "\nsummary\n";
    for (const std::string& line : summary) std::cout << line << "\n";
  }
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
