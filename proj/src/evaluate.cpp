#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "xsess/core/csv.hpp"
#include "xsess/eval/analysis.hpp"
#include "xsess/eval/report.hpp"
#include "xsess/eval/split.hpp"
#include "xsess/eval/stats.hpp"
#include "xsess/rng.hpp"

namespace xsess {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::set<int> relevant_items(const TaskInstance& t) {
  std::set<int> rel;
  for (Index k = 0; k < t.target.size(); ++k) {
    if (t.target[k] > 0.5) rel.insert(static_cast<int>(k));
  }
  return rel;
}

constexpr const char* kMeasures[] = {"hr", "precision", "recall", "mrr", "map"};

double measure_value(const MetricSet& m, const std::string& name) {
  if (name == "hr") return m.hr;
  if (name == "precision") return m.precision;
  if (name == "recall") return m.recall;
  if (name == "mrr") return m.mrr;
  if (name == "map") return m.map;
  fail("unknown measure '" + name + "'");
}

}  // namespace

ModelEval evaluate_model(const Recommender& model, const std::vector<TaskInstance>& test,
                         const Vocabulary& vocab, const EvalOptions& opt) {
  if (test.empty()) fail("evaluate_model: empty test set");
  ModelEval ev;
  ev.model = model.name();
  ev.per_task.resize(static_cast<std::size_t>(opt.max_cutoff));
  ev.mean.resize(static_cast<std::size_t>(opt.max_cutoff));

  for (const auto& task : test) {
    Vector scores = model.score(task);
    if (opt.apply_post_filter) {
      scores = post_filter(scores, task.portfolio, vocab.item_base);
    }
    const auto ranking = rank_items(scores);
    const auto rel = relevant_items(task);
    for (int k = 1; k <= opt.max_cutoff; ++k) {
      ev.per_task[static_cast<std::size_t>(k - 1)].push_back(metrics_at_k(ranking, rel, k));
    }
  }

  const double n = static_cast<double>(test.size());
  for (int k = 0; k < opt.max_cutoff; ++k) {
    MetricSet sum;
    for (const auto& m : ev.per_task[static_cast<std::size_t>(k)]) {
      sum.hr += m.hr;
      sum.precision += m.precision;
      sum.recall += m.recall;
      sum.mrr += m.mrr;
      sum.map += m.map;
    }
    ev.mean[static_cast<std::size_t>(k)] = {sum.hr / n, sum.precision / n, sum.recall / n,
                                            sum.mrr / n, sum.map / n};
  }
  return ev;
}

EvalReport evaluate_models(const std::vector<const Recommender*>& models,
                           const std::vector<TaskInstance>& test, const Vocabulary& vocab,
                           const EvalOptions& opt) {
  EvalReport report;
  report.report_cutoff = opt.report_cutoff;
  for (const auto* m : models) {
    report.models.push_back(evaluate_model(*m, test, vocab, opt));
  }

  // Pairwise significance at the report cutoff, Holm-adjusted per measure.
  const auto kc = static_cast<std::size_t>(opt.report_cutoff - 1);
  for (const std::string measure : kMeasures) {
    std::vector<SignificancePair> pairs;
    for (std::size_t a = 0; a < report.models.size(); ++a) {
      for (std::size_t b = a + 1; b < report.models.size(); ++b) {
        SignificancePair p;
        p.model_a = report.models[a].model;
        p.model_b = report.models[b].model;
        p.measure = measure;
        const auto& ta = report.models[a].per_task[kc];
        const auto& tb = report.models[b].per_task[kc];
        if (measure == "hr") {
          std::vector<int> ha(ta.size()), hb(tb.size());
          for (std::size_t i = 0; i < ta.size(); ++i) {
            ha[i] = ta[i].hr > 0.5 ? 1 : 0;
            hb[i] = tb[i].hr > 0.5 ? 1 : 0;
          }
          const TestResult r = mcnemar(ha, hb);
          p.statistic = r.statistic;
          p.p_raw = r.p_value;
        } else {
          std::vector<double> va(ta.size()), vb(tb.size());
          for (std::size_t i = 0; i < ta.size(); ++i) {
            va[i] = measure_value(ta[i], measure);
            vb[i] = measure_value(tb[i], measure);
          }
          const AnovaResult r = anova_oneway({va, vb});
          p.statistic = r.f;
          p.p_raw = r.p_value;
        }
        pairs.push_back(std::move(p));
      }
    }
    std::vector<double> raw(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) raw[i] = pairs[i].p_raw;
    const auto adjusted = holm_adjust(raw);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      pairs[i].p_adjusted = adjusted[i];
      report.significance.push_back(std::move(pairs[i]));
    }
  }
  return report;
}

void write_metrics_csv(const std::string& path, const EvalReport& report) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& ev : report.models) {
    for (std::size_t k = 0; k < ev.mean.size(); ++k) {
      for (const std::string measure : kMeasures) {
        rows.push_back({ev.model, measure, std::to_string(k + 1),
                        fmt(measure_value(ev.mean[k], measure))});
      }
    }
  }
  write_csv(path, {"model", "measure", "cutoff", "value"}, rows);
}

void write_significance_csv(const std::string& path, const EvalReport& report) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& p : report.significance) {
    rows.push_back({p.model_a, p.model_b, p.measure, fmt(p.statistic), fmt(p.p_raw),
                    fmt(p.p_adjusted)});
  }
  write_csv(path, {"model_a", "model_b", "measure", "statistic", "p_raw", "p_holm"}, rows);
}

void write_cutoff_sweep_csv(const std::string& path, const EvalReport& report) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& ev : report.models) {
    for (std::size_t k = 0; k < ev.mean.size(); ++k) {
      rows.push_back({ev.model, std::to_string(k + 1), fmt(ev.mean[k].hr), fmt(ev.mean[k].mrr),
                      fmt(ev.mean[k].precision), fmt(ev.mean[k].recall), fmt(ev.mean[k].map)});
    }
  }
  write_csv(path, {"model", "cutoff", "hr", "mrr", "precision", "recall", "map"}, rows);
}

void write_breakdown_csv(const std::string& path, const EvalReport& report,
                         const std::vector<TaskInstance>& test) {
  const auto kc = static_cast<std::size_t>(report.report_cutoff - 1);
  // Bin edges for mean actions per session.
  const std::vector<std::pair<int, int>> action_bins = {{1, 5}, {6, 10}, {11, 20}, {21, 30}};

  std::vector<std::vector<std::string>> rows;
  for (const auto& ev : report.models) {
    std::map<std::string, std::pair<double, long>> groups;
    for (std::size_t i = 0; i < test.size(); ++i) {
      const auto& t = test[i];
      const double hr = ev.per_task[kc][i].hr;
      groups["sessions=" + std::to_string(t.sessions.size())].first += hr;
      groups["sessions=" + std::to_string(t.sessions.size())].second += 1;
      double mean_actions = 0.0;
      for (const auto& s : t.sessions) mean_actions += static_cast<double>(s.actions.size());
      mean_actions /= static_cast<double>(t.sessions.size());
      for (const auto& [lo, hi] : action_bins) {
        if (mean_actions >= lo && mean_actions <= hi) {
          const std::string key = "actions=" + std::to_string(lo) + "-" + std::to_string(hi);
          groups[key].first += hr;
          groups[key].second += 1;
          break;
        }
      }
    }
    for (const auto& [key, agg] : groups) {
      rows.push_back({ev.model, key, std::to_string(agg.second),
                      fmt(agg.first / static_cast<double>(agg.second))});
    }
  }
  write_csv(path, {"model", "group", "tasks", "hr"}, rows);
}

std::string markdown_summary(const EvalReport& report) {
  const auto kc = static_cast<std::size_t>(report.report_cutoff - 1);
  const std::string k = std::to_string(report.report_cutoff);
  std::ostringstream out;
  out << "| Model | HR@" << k << " | Precision@" << k << " | Recall@" << k << " | MRR@" << k
      << " | MAP@" << k << " |\n";
  out << "|---|---|---|---|---|---|\n";
  for (const auto& ev : report.models) {
    const auto& m = ev.mean[kc];
    out << "| " << ev.model << " | " << fmt(m.hr) << " | " << fmt(m.precision) << " | "
        << fmt(m.recall) << " | " << fmt(m.mrr) << " | " << fmt(m.map) << " |\n";
  }
  return out.str();
}

// ---- analysis suite ----

std::vector<AblationTarget> default_ablation_targets(const Vocabulary& vocab) {
  std::vector<AblationTarget> targets;
  for (const auto& s : vocab.sections.labels()) targets.push_back({"section", s});
  targets.push_back({"object_group", "items"});
  targets.push_back({"object_group", "services"});
  for (const auto& t : vocab.action_types.labels()) {
    if (t == "click") continue;  // removing clicks would remove most of the data
    targets.push_back({"type", t});
  }
  return targets;
}

std::vector<TaskInstance> ablate_actions(const std::vector<TaskInstance>& tasks,
                                         const Vocabulary& vocab, const AblationTarget& target) {
  auto matches = [&](const Action& a) {
    if (target.kind == "section") return vocab.sections.label(a.section) == target.label;
    if (target.kind == "type") return vocab.action_types.label(a.type) == target.label;
    if (target.kind == "object_group") {
      const bool is_item = vocab.item_of_object(a.object).has_value();
      const bool is_none = vocab.objects.label(a.object) == "no-object";
      if (target.label == "items") return is_item;
      if (target.label == "services") return !is_item && !is_none;
      fail("ablate_actions: unknown object group '" + target.label + "'");
    }
    fail("ablate_actions: unknown target kind '" + target.kind + "'");
  };

  std::vector<TaskInstance> out;
  for (const auto& t : tasks) {
    TaskInstance nt = t;
    nt.sessions.clear();
    for (const auto& s : t.sessions) {
      Session ns = s;
      ns.actions.clear();
      for (const auto& a : s.actions) {
        if (!matches(a)) ns.actions.push_back(a);
      }
      if (!ns.actions.empty()) nt.sessions.push_back(std::move(ns));
    }
    if (!nt.sessions.empty()) out.push_back(std::move(nt));
  }
  return out;
}

std::vector<TaskInstance> shuffle_session_order(const std::vector<TaskInstance>& tasks,
                                                std::uint64_t seed) {
  Rng rng(seed);
  std::vector<TaskInstance> out = tasks;
  for (auto& t : out) rng.shuffle(t.sessions);
  return out;
}

namespace {

std::vector<AnalysisRun> run_models_on(const std::vector<TaskInstance>& tasks,
                                       const Vocabulary& vocab, const AnalysisOptions& opt,
                                       const std::string& study, const std::string& detail) {
  const SplitResult split = temporal_split(tasks, opt.test_frac);
  std::vector<AnalysisRun> runs;
  for (const auto& name : opt.models) {
    nlohmann::json config(nullptr);
    if (opt.model_configs.is_object() && opt.model_configs.contains(name)) {
      config = opt.model_configs.at(name);
    }
    auto model = make_recommender(name, config, opt.seed);
    model->fit(split.train, vocab);
    const ModelEval ev = evaluate_model(*model, split.test, vocab, opt.eval);
    runs.push_back({study, detail, name, ev.mean});
  }
  return runs;
}

}  // namespace

std::vector<AnalysisRun> analysis_suite(const std::vector<TaskInstance>& tasks,
                                        const Vocabulary& vocab, const AnalysisOptions& opt) {
  std::vector<AnalysisRun> runs = run_models_on(tasks, vocab, opt, "baseline", "all");

  for (int rep = 0; rep < opt.shuffle_repeats; ++rep) {
    const auto shuffled = shuffle_session_order(tasks, opt.seed + 101 + static_cast<std::uint64_t>(rep));
    auto r = run_models_on(shuffled, vocab, opt, "shuffle", "repeat_" + std::to_string(rep + 1));
    runs.insert(runs.end(), r.begin(), r.end());
  }

  for (const auto& target : default_ablation_targets(vocab)) {
    const auto ablated = ablate_actions(tasks, vocab, target);
    if (ablated.size() < 10) continue;  // not enough left to split
    auto r = run_models_on(ablated, vocab, opt, "ablation", target.kind + ":" + target.label);
    runs.insert(runs.end(), r.begin(), r.end());
  }
  return runs;
}

void write_analysis_csv(const std::string& path, const std::vector<AnalysisRun>& runs,
                        int max_cutoff) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& run : runs) {
    for (int k = 1; k <= max_cutoff && k <= static_cast<int>(run.mean.size()); ++k) {
      const auto& m = run.mean[static_cast<std::size_t>(k - 1)];
      rows.push_back({run.study, run.detail, run.model, std::to_string(k), fmt(m.hr),
                      fmt(m.precision), fmt(m.recall), fmt(m.mrr), fmt(m.map)});
    }
  }
  write_csv(path, {"study", "detail", "model", "cutoff", "hr", "precision", "recall", "mrr", "map"},
            rows);
}

}  // namespace xsess
