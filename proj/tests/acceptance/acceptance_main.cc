// Copyright 2026 The hdfnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
//
// Prints one PASS/FAIL line per headline criterion and exits nonzero if any
// criterion fails its check or its time budget.

#include <cstdio>

#include "hdfnet/verify/acceptance.h"

int main() {
  int failed = 0;
  for (const auto& c : hdf::verify::acceptance_criteria()) {
    const hdf::verify::CriterionResult r = hdf::verify::run_criterion(c);
    std::printf("%s  %-10s %-30s %.3fs/%.0fs  %s%s\n", r.ok() ? "PASS" : "FAIL",
                r.id.c_str(), r.title.c_str(), r.seconds, r.budget_seconds,
                r.detail.c_str(), r.within_budget() ? "" : "  [over time budget]");
    std::fflush(stdout);
    failed += r.ok() ? 0 : 1;
  }
  std::printf("%s: %d of %zu criteria failed\n", failed ? "FAIL" : "PASS", failed,
              hdf::verify::acceptance_criteria().size());
  return failed ? 1 : 0;
}
