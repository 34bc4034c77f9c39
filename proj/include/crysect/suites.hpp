#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace crysect {

// Knobs shared by the verification suites.  Numerical targets, primes and
// degree bounds inside each suite are pinned in code; the config only carries
// the RNG seed and the quick switch (smaller sample counts for interactive
// runs -- the shipped budgets assume quick == false).
struct SuiteConfig {
  uint64_t seed = 0x5eed5u;
  bool quick = false;
};

struct SuiteResult {
  std::string name;
  bool pass = false;
  bool within_budget = true;
  double seconds = 0;
  double budget = 0;
  uint64_t checks = 0;  // individual comparisons performed
  std::string detail;   // first failure, or a one-line summary
};

// Registered suite names, in report order.
const std::vector<std::string>& suite_names();

// Runs one suite by name; throws ConfigError for unknown names.
SuiteResult run_suite(const std::string& name, const SuiteConfig& cfg);

// Expands a selector (a suite name, a group alias or "all") into suite names.
std::vector<std::string> expand_selector(const std::string& selector);

std::vector<SuiteResult> run_suites(const std::vector<std::string>& names,
                                    const SuiteConfig& cfg);

std::string format_result_line(const SuiteResult& r);

}  // namespace crysect
