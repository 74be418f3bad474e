#include "xsess/eval/split.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace xsess {

SplitResult temporal_split(const std::vector<TaskInstance>& tasks, double test_frac) {
  const auto n = static_cast<long>(tasks.size());
  if (n < 10) fail("temporal_split: need at least 10 tasks, got " + std::to_string(n));
  if (!(test_frac > 0.0 && test_frac < 1.0)) fail("temporal_split: test_frac must lie in (0, 1)");

  std::vector<std::size_t> order(tasks.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (tasks[a].purchase_time != tasks[b].purchase_time) {
      return tasks[a].purchase_time < tasks[b].purchase_time;
    }
    return tasks[a].user_id < tasks[b].user_id;
  });

  const auto n_test = static_cast<long>(std::ceil(test_frac * static_cast<double>(n)));
  const auto cut = static_cast<std::size_t>(n - n_test);

  SplitResult out;
  std::set<std::string> test_sessions;
  for (std::size_t i = cut; i < order.size(); ++i) {
    const TaskInstance& t = tasks[order[i]];
    out.test.push_back(t);
    for (const auto& s : t.sessions) test_sessions.insert(s.key());
  }
  for (std::size_t i = 0; i < cut; ++i) {
    const TaskInstance& t = tasks[order[i]];
    const bool overlaps = std::any_of(t.sessions.begin(), t.sessions.end(), [&](const Session& s) {
      return test_sessions.count(s.key()) > 0;
    });
    if (overlaps) {
      ++out.removed_overlapping;
    } else {
      out.train.push_back(t);
    }
  }
  return out;
}

}  // namespace xsess
