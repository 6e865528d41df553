#pragma once
// Acceptance suite: one entry per criterion, each evaluated at its stated
// tolerance. The test binary asserts on the results; the CLI prints them.

#include <string>
#include <vector>

namespace hlsv {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double observed = 0.0;   // worst observed deviation / statistic
  double threshold = 0.0;  // 0 = trend-only criterion
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  bool quick = false;          // reduced sampling for smoke runs (not the gate)
  std::uint64_t seed = 20240915;
  int threads = 0;             // 0 = default
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt = {});

// Pretty pass/fail line, e.g. "PASS  3 joint-t-laplace  3.1e-08 <= 1e-06  (12.3s)"
std::string format_criterion(const CriterionResult& r);

}  // namespace hlsv
