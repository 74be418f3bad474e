#pragma once

#include <string>
#include <vector>

#include "xsess/core/data.hpp"

namespace xsess {

// Everything one purchase event contributes to training or evaluation:
// the recent sessions feeding the models, the binarized target, and the
// side information consumed by the baselines.
struct TaskInstance {
  std::string user_id;
  std::vector<Session> sessions;  // chronological, gaps <= threshold, <= max_sessions
  Vector target;                  // length K, entry 1 for purchased items
  IntVector portfolio;            // snapshot at assembly time
  Vector demographics;
  Timestamp purchase_time = 0;
};

struct AssembleReport {
  long tasks = 0;
  long skipped_no_sessions = 0;   // purchases with no prior session
  long truncated_tasks = 0;       // chains capped at max_sessions
};

// For every purchase event, walk the user's earlier sessions backwards,
// keeping them while the start-time gap to the previously kept session is
// at most `threshold_seconds`, then keep the most recent `max_sessions`.
// Purchases with no prior session are skipped and counted.
std::vector<TaskInstance> assemble_tasks(const Dataset& ds, double threshold_seconds,
                                         int max_sessions, AssembleReport& report);

// Task-file schema: vocabulary + catalog + tasks, written as a single JSON
// document so later stages are independent of the raw CSVs.
void save_tasks(const std::string& path, const Vocabulary& vocab,
                const std::vector<TaskInstance>& tasks);
std::pair<Vocabulary, std::vector<TaskInstance>> load_tasks(const std::string& path);

}  // namespace xsess
