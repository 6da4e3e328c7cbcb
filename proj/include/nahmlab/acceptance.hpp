#ifndef NAHMLAB_ACCEPTANCE_HPP
#define NAHMLAB_ACCEPTANCE_HPP

#include <string>
#include <vector>

namespace nahmlab {

// End-to-end checks of the explicit formulas and worked values the library
// is built around, each with a pinned tolerance. The suite runs on default
// grids in well under a minute; `filter` keeps criteria whose name contains
// the substring.

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;  // worst observed error vs. tolerance
};

std::vector<CriterionResult> run_acceptance(const std::string& filter = "");

/// Prints one pass/fail line per criterion to stdout; returns true when all
/// selected criteria pass.
bool report_acceptance(const std::vector<CriterionResult>& results);

}  // namespace nahmlab

#endif
