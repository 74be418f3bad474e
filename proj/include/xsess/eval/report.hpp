#pragma once

#include <string>
#include <vector>

#include "xsess/eval/metrics.hpp"
#include "xsess/recommender.hpp"

namespace xsess {

struct EvalOptions {
  int report_cutoff = 3;   // the headline k
  int max_cutoff = 5;      // sweep range 1..max_cutoff
  bool apply_post_filter = true;
};

// Per-model evaluation: metric values per test task at every cutoff, plus
// their means. Task order matches the test set everywhere, so per-task
// vectors align across models for the significance tests.
struct ModelEval {
  std::string model;
  std::vector<std::vector<MetricSet>> per_task;  // [cutoff-1][task]
  std::vector<MetricSet> mean;                   // [cutoff-1]
};

struct SignificancePair {
  std::string model_a;
  std::string model_b;
  std::string measure;  // hr via McNemar, the rest via one-way ANOVA
  double statistic = 0.0;
  double p_raw = 1.0;
  double p_adjusted = 1.0;  // Holm step-down within the measure family
};

struct EvalReport {
  std::vector<ModelEval> models;
  std::vector<SignificancePair> significance;
  int report_cutoff = 3;
};

ModelEval evaluate_model(const Recommender& model, const std::vector<TaskInstance>& test,
                         const Vocabulary& vocab, const EvalOptions& opt = {});

EvalReport evaluate_models(const std::vector<const Recommender*>& models,
                           const std::vector<TaskInstance>& test, const Vocabulary& vocab,
                           const EvalOptions& opt = {});

// metrics.csv: model x measure x cutoff, one row per combination.
void write_metrics_csv(const std::string& path, const EvalReport& report);
void write_significance_csv(const std::string& path, const EvalReport& report);
// Long-format per-cutoff table for plotting the sweep.
void write_cutoff_sweep_csv(const std::string& path, const EvalReport& report);
// HR at the report cutoff grouped by session count and actions-per-session
// bins, one row per (model, group).
void write_breakdown_csv(const std::string& path, const EvalReport& report,
                         const std::vector<TaskInstance>& test);
// Summary table of every measure at the report cutoff.
std::string markdown_summary(const EvalReport& report);

}  // namespace xsess
