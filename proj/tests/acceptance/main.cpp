#include <CLI11.hpp>

#include <algorithm>
#include <iostream>

#include "mslab/acceptance.hpp"

// One line per criterion. Exit status is 0 when every failure is listed in --known-failures,
// so the suite can run under ctest while the lines still report FAIL.
int main(int argc, char** argv) {
  CLI::App app{"mslab acceptance suite"};
  std::vector<int> only, known;
  app.add_option("--only", only, "Criterion ids")->check(CLI::Range(1, mslab::kCriteria));
  app.add_option("--known-failures", known, "Ids whose failure does not fail the run")
      ->check(CLI::Range(1, mslab::kCriteria));
  CLI11_PARSE(app, argc, argv);

  const auto rs = mslab::run_acceptance(only, &std::cout);
  std::size_t failed = 0, unexpected = 0;
  for (const auto& r : rs) {
    if (r.passed) continue;
    ++failed;
    if (std::find(known.begin(), known.end(), r.id) == known.end()) ++unexpected;
  }
  std::cout << rs.size() - failed << "/" << rs.size() << " criteria passed";
  if (failed > unexpected) std::cout << " (" << failed - unexpected << " known failure" << (failed - unexpected > 1 ? "s" : "") << ")";
  std::cout << '\n';
  return unexpected ? 1 : 0;
}
