#pragma once

// The reproduction scorecard: nine end-to-end criteria, each reported as one
// PASS or FAIL line. Shared by the acceptance test binary and `mrd reproduce`.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace mrd {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  int checks = 0;
  std::vector<std::string> failures;  // one message per failed check
  std::string summary;                // worst deviations and other figures
  double seconds = 0.0;
};

struct AcceptanceConfig {
  std::uint64_t seed = 2024;
  std::vector<int> only;  // criterion ids to run; empty runs all
  std::function<void(const CriterionResult&)> on_result;  // called as each criterion finishes
};

std::vector<CriterionResult> run_acceptance(const AcceptanceConfig& cfg = {});

/// "PASS  3  <title>  (<seconds> s)  <summary>", plus the first failures.
std::string format_result(const CriterionResult& r);

}  // namespace mrd
