#pragma once

#include "xsess/recommender.hpp"

namespace xsess {

// Uniform-random scores, deterministic per (seed, task identity).
class RandomRecommender : public Recommender {
 public:
  explicit RandomRecommender(std::uint64_t seed) : seed_(seed) {}
  std::string name() const override { return "random"; }
  void fit(const std::vector<TaskInstance>& train, const Vocabulary& vocab) override;
  Vector score(const TaskInstance& task) const override;
  void save(const std::string& path) const override;
  void load(const std::string& path, const Vocabulary& vocab) override;

 private:
  std::uint64_t seed_;
  Index k_ = 0;
};

// Training purchase counts per item, identical for every task.
class PopularRecommender : public Recommender {
 public:
  std::string name() const override { return "popular"; }
  void fit(const std::vector<TaskInstance>& train, const Vocabulary& vocab) override;
  Vector score(const TaskInstance& task) const override;
  void save(const std::string& path) const override;
  void load(const std::string& path, const Vocabulary& vocab) override;

  const Vector& counts() const { return counts_; }

 private:
  Vector counts_;
};

// Rank-1 truncated SVD of the ownership matrix. Repeat purchases become
// extra column blocks (block j marks "owns at least j+1 copies"); scores
// fold the reconstructed row back to base items with a max.
class SvdRecommender : public Recommender {
 public:
  std::string name() const override { return "svd"; }
  void fit(const std::vector<TaskInstance>& train, const Vocabulary& vocab) override;
  Vector score(const TaskInstance& task) const override;
  void save(const std::string& path) const override;
  void load(const std::string& path, const Vocabulary& vocab) override;

  // users x (copies * K) expansion used for both fitting and scoring.
  static Vector expand_portfolio(const IntVector& portfolio, int max_copies);

 private:
  Vector right_vector_;  // dominant right singular vector
  int max_copies_ = 1;
  Index k_ = 0;
};

// Session-based nearest neighbours over max-pooled action vectors of all
// recent sessions. Scores sum neighbour similarity per purchased item; the
// boosted variant adds a constant for items the user interacted with.
class SknnRecommender : public Recommender {
 public:
  SknnRecommender(bool boost_interacted, int n_neighbors, double boost)
      : boosted_(boost_interacted), n_neighbors_(n_neighbors), boost_(boost) {}

  std::string name() const override { return boosted_ ? "sknn_eb" : "sknn_e"; }
  void fit(const std::vector<TaskInstance>& train, const Vocabulary& vocab) override;
  Vector score(const TaskInstance& task) const override;
  void save(const std::string& path) const override;
  void load(const std::string& path, const Vocabulary& vocab) override;

  Vector pooled_actions(const TaskInstance& task) const;

 private:
  bool boosted_;
  int n_neighbors_;
  double boost_;
  Vocabulary vocab_;
  Matrix train_vectors_;  // n_train x action_dim
  Vector train_norms_;
  Matrix train_targets_;  // n_train x K
};

}  // namespace xsess
