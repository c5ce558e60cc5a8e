#pragma once

#include <string>
#include <vector>

#include "resonwave/config.hpp"

namespace resonwave {

struct CheckResult {
  std::string name;
  bool passed = false;
  bool skipped = false;
  double value = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

/// Property and oracle checks applicable to the configured model: Jost
/// analyticity and Wronskian constancy, resolvent identity, scan
/// bookkeeping, projection routes, oracle agreement and the expansion
/// decomposition identity. Checks that do not apply are marked skipped.
std::vector<CheckResult> verify_problem(const ProblemSpec& p);

}  // namespace resonwave
