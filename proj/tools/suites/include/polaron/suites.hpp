#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace polaron::suites {

struct CriterionResult {
  /// Acceptance criteria use 1..11; extra invariant checks use 0.
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct SuiteOptions {
  std::uint64_t seed = 20240521;
  unsigned threads = 0;
};

struct Suite {
  int id;
  std::string name;
  std::function<CriterionResult(const SuiteOptions&)> run;
};

/// Criteria 1..11 in order.
const std::vector<Suite>& acceptance_suites();

/// Module invariants not already covered by a numbered criterion.
const std::vector<Suite>& invariant_suites();

/// Runs a suite, timing it and turning exceptions into failures.
CriterionResult run_suite(const Suite& suite, const SuiteOptions& options);

}  // namespace polaron::suites
