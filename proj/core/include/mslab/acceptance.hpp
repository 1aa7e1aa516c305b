#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mslab {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double time_limit = 0.0;  // 0 means unbounded
};

inline constexpr int kCriteria = 11;

// Runs one criterion at its stated tolerances. Exceptions are reported as a failure.
CriterionResult run_criterion(int id);

// Runs the selected criteria (all when empty) and prints one line per criterion as each
// finishes, in id order.
std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids, std::ostream* out);

std::string format_line(const CriterionResult& r);

}  // namespace mslab
