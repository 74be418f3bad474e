#pragma once

#include <vector>

#include "xsess/sessionize/tasks.hpp"

namespace xsess {

struct SplitResult {
  std::vector<TaskInstance> train;
  std::vector<TaskInstance> test;
  long removed_overlapping = 0;  // training tasks sharing a session with the test set
};

// Hold out the latest ceil(test_frac * N) tasks by purchase time (ties broken
// by user id). Training tasks whose session lists intersect any test task's
// sessions are removed to avoid leakage.
SplitResult temporal_split(const std::vector<TaskInstance>& tasks, double test_frac = 0.10);

}  // namespace xsess
