#pragma once

#include <functional>
#include <string>
#include <vector>

namespace combstruct {

struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;   // worst observed gap (or count of violations)
  double tolerance = 0.0;
  std::string detail;
};

/// Oracle cross-checks at small n; `progress` is called after each check.
std::vector<CheckResult> run_verify(int n_max = 10,
                                    const std::function<void(const CheckResult&)>& progress = {});

}  // namespace combstruct
