#pragma once

#include "xsess/eval/report.hpp"

namespace xsess {

// Re-train-and-compare studies over the assembled tasks. Every run uses the
// same temporal split, seed and hyperparameter overrides, so metric deltas
// isolate the data transformation under study.
struct AnalysisOptions {
  std::vector<std::string> models;  // models to study
  nlohmann::json model_configs;     // per-model hyperparameter overrides
  std::uint64_t seed = 0;
  int shuffle_repeats = 5;
  double test_frac = 0.10;
  EvalOptions eval;
};

struct AnalysisRun {
  std::string study;      // "baseline", "shuffle", "ablation"
  std::string detail;     // shuffle repeat or removed label
  std::string model;
  std::vector<MetricSet> mean;  // [cutoff-1]
};

// Candidate ablation targets: every section, the item/service object
// groups, and every action type except the dominant "click".
struct AblationTarget {
  std::string kind;   // "section", "object_group", "type"
  std::string label;  // vocabulary label or "items"/"services"
};
std::vector<AblationTarget> default_ablation_targets(const Vocabulary& vocab);

// Removes all actions matching the target. Sessions left empty are dropped;
// tasks left without sessions are dropped (counted by the caller via size).
std::vector<TaskInstance> ablate_actions(const std::vector<TaskInstance>& tasks,
                                         const Vocabulary& vocab, const AblationTarget& target);

// Shuffles the order of each task's session list (actions inside sessions
// keep their order).
std::vector<TaskInstance> shuffle_session_order(const std::vector<TaskInstance>& tasks,
                                                std::uint64_t seed);

// Baseline run, `shuffle_repeats` session-order shuffles, and one ablation
// per target; each run retrains the requested models from scratch.
std::vector<AnalysisRun> analysis_suite(const std::vector<TaskInstance>& tasks,
                                        const Vocabulary& vocab, const AnalysisOptions& opt);

void write_analysis_csv(const std::string& path, const std::vector<AnalysisRun>& runs,
                        int max_cutoff);

}  // namespace xsess
