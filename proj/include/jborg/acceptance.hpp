#pragma once

#include <string>
#include <vector>

namespace jborg {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  double max_error = 0.0;   // worst observed error, criterion-specific scale
  double tolerance = 0.0;
  double seconds = 0.0;
  std::string detail;
};

// Runs one acceptance criterion (1..10) or all of them; each prints a
// single pass/fail line to stdout when verbose.
CriterionResult run_criterion(int id, int workers, bool verbose = true);
std::vector<CriterionResult> run_all_criteria(int workers,
                                              bool verbose = true);

}  // namespace jborg
