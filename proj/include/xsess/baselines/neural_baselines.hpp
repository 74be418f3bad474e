#pragma once

#include "xsess/models/nets.hpp"
#include "xsess/models/trainer.hpp"
#include "xsess/recommender.hpp"

namespace xsess {

// Feed-forward classifier over [demographics | portfolio counts].
class DemographicRecommender : public Recommender {
 public:
  struct Spec {
    int units = 32;
    int batch_size = 32;
    double dropout = 0.3;
    int max_epochs = 500;
    int patience = 1;
    double val_frac = 0.10;
    AdamConfig adam;
  };

  DemographicRecommender(Spec spec, std::uint64_t seed) : spec_(spec), seed_(seed) {}

  std::string name() const override { return "demographic"; }
  void fit(const std::vector<TaskInstance>& train, const Vocabulary& vocab) override;
  Vector score(const TaskInstance& task) const override;
  void save(const std::string& path) const override;
  void load(const std::string& path, const Vocabulary& vocab) override;

  static Vector features(const TaskInstance& task);
  const TrainHistory& history() const { return history_; }

 private:
  Spec spec_;
  std::uint64_t seed_;
  std::optional<FeedForwardNet> net_;
  TrainHistory history_;
};

// Next-action model over the joint (section, object, type) token
// vocabulary. The plain variant reads only the task's last session; the
// concat variant reads all recent sessions flattened. Item scores come
// from the final step's distribution via the actions that reference the
// item (max by default, sum on request).
class Gru4RecRecommender : public Recommender {
 public:
  struct Spec {
    int units = 256;
    int batch_size = 32;
    double dropout = 0.2;
    int max_epochs = 500;
    int patience = 1;
    double val_frac = 0.10;
    bool sum_scores = false;  // default folds token probabilities with max
    AdamConfig adam;
  };

  Gru4RecRecommender(bool concat_sessions, Spec spec, std::uint64_t seed)
      : concat_(concat_sessions), spec_(spec), seed_(seed) {}

  std::string name() const override { return concat_ ? "gru4rec_concat" : "gru4rec"; }
  void fit(const std::vector<TaskInstance>& train, const Vocabulary& vocab) override;
  Vector score(const TaskInstance& task) const override;
  void save(const std::string& path) const override;
  void load(const std::string& path, const Vocabulary& vocab) override;

  // Token sequence a task feeds the model (unknown tuples are skipped).
  std::vector<int> tokens(const TaskInstance& task) const;
  const TrainHistory& history() const { return history_; }

 private:
  std::string token_key(const Action& a) const;
  void rebuild_token_items(const Vocabulary& vocab);

  bool concat_;
  Spec spec_;
  std::uint64_t seed_;
  LabelMap token_vocab_;           // "section|object|type" label per token
  std::vector<int> token_item_;    // catalog item per token, -1 if none
  std::optional<NextActionNet> net_;
  TrainHistory history_;
  Vocabulary vocab_;
};

}  // namespace xsess
