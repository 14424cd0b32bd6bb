#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace grassfeed {

/// Outcome of one validation criterion.
struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Ids of the validation criteria (1..13).
std::vector<int> acceptance_criterion_ids();

/// Runs one criterion at its pinned tolerances and trial counts.
CriterionResult run_acceptance_criterion(int id, int threads = 0);

/// Runs the whole suite; when progress is given, prints one pass/fail line
/// per criterion as it completes.
std::vector<CriterionResult> run_all_acceptance(int threads = 0,
                                                std::ostream* progress = nullptr);

}  // namespace grassfeed
