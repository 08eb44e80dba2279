#pragma once

#include <string>
#include <vector>

#include "kinavg/report.hpp"

namespace kinavg {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool checks = false;  // every numerical check held
  double seconds = 0.0;
  double budget = 0.0;  // runtime limit in seconds
  std::string detail;
  json data;

  bool pass() const { return checks && seconds <= budget; }
};

// 1 .. 11
std::vector<int> criterion_ids();
std::string criterion_title(int id);
// Runs one criterion. Exceptions from the library are caught and reported as
// a failed check with the message in `detail`.
CriterionResult run_criterion(int id);

json to_json(const CriterionResult& r);
// "[PASS] 4 duality identity ... (12.3 s)"
std::string summary_line(const CriterionResult& r);

}  // namespace kinavg
