#include "xsess/baselines/baselines.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "xsess/models/session_encoding.hpp"
#include "xsess/neural/checkpoint.hpp"

namespace xsess {

using nlohmann::json;

// ---- Random ----

void RandomRecommender::fit(const std::vector<TaskInstance>& train, const Vocabulary& vocab) {
  (void)train;
  k_ = vocab.catalog_size();
}

Vector RandomRecommender::score(const TaskInstance& task) const {
  if (k_ == 0) fail("random: not fitted");
  // Hash the task identity so scores do not depend on evaluation order.
  std::uint64_t h = 1469598103934665603ULL ^ seed_;
  auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 1099511628211ULL;
  };
  for (char c : task.user_id) mix(static_cast<std::uint64_t>(static_cast<unsigned char>(c)));
  mix(static_cast<std::uint64_t>(task.purchase_time));
  Rng rng(h);
  Vector s(k_);
  for (Index i = 0; i < k_; ++i) s[i] = rng.uniform();
  return s;
}

void RandomRecommender::save(const std::string& path) const {
  Vector empty(0);
  ParamRefs refs{param_ref("none", const_cast<Vector&>(empty))};
  refs.clear();
  save_checkpoint(path, "random", json{{"seed", seed_}, {"k", k_}}, refs);
}

void RandomRecommender::load(const std::string& path, const Vocabulary& vocab) {
  const Checkpoint ck = load_checkpoint(path);
  if (ck.model_kind != "random") fail(path + ": not a random-model checkpoint");
  seed_ = ck.meta.at("seed").get<std::uint64_t>();
  k_ = ck.meta.at("k").get<Index>();
  if (k_ != vocab.catalog_size()) fail(path + ": catalog size mismatch");
}

// ---- Popular ----

void PopularRecommender::fit(const std::vector<TaskInstance>& train, const Vocabulary& vocab) {
  if (train.empty()) fail("popular: empty training set");
  counts_ = Vector::Zero(vocab.catalog_size());
  for (const auto& t : train) counts_ += t.target;
}

Vector PopularRecommender::score(const TaskInstance&) const {
  if (counts_.size() == 0) fail("popular: not fitted");
  return counts_;
}

void PopularRecommender::save(const std::string& path) const {
  auto& counts = const_cast<Vector&>(counts_);
  save_checkpoint(path, "popular", json::object(), {param_ref("counts", counts)});
}

void PopularRecommender::load(const std::string& path, const Vocabulary& vocab) {
  const Checkpoint ck = load_checkpoint(path);
  if (ck.model_kind != "popular") fail(path + ": not a popular-model checkpoint");
  counts_ = ck.tensor("counts").col(0);
  if (counts_.size() != vocab.catalog_size()) fail(path + ": catalog size mismatch");
}

// ---- SVD ----

Vector SvdRecommender::expand_portfolio(const IntVector& portfolio, int max_copies) {
  const Index k = portfolio.size();
  Vector row = Vector::Zero(static_cast<Index>(max_copies) * k);
  for (Index item = 0; item < k; ++item) {
    for (int j = 0; j < max_copies; ++j) {
      if (portfolio[item] >= j + 1) row[static_cast<Index>(j) * k + item] = 1.0;
    }
  }
  return row;
}

void SvdRecommender::fit(const std::vector<TaskInstance>& train, const Vocabulary& vocab) {
  k_ = vocab.catalog_size();
  // One row per distinct user; tasks of the same user share a portfolio.
  std::vector<const TaskInstance*> users;
  {
    std::set<std::string> seen;
    for (const auto& t : train) {
      if (seen.insert(t.user_id).second) users.push_back(&t);
    }
  }
  max_copies_ = 1;
  for (const auto* t : users) {
    for (Index i = 0; i < t->portfolio.size(); ++i) {
      max_copies_ = std::max(max_copies_, t->portfolio[i]);
    }
  }
  const Index cols = static_cast<Index>(max_copies_) * k_;
  Matrix X(static_cast<Index>(users.size()), cols);
  for (std::size_t r = 0; r < users.size(); ++r) {
    X.row(static_cast<Index>(r)) = expand_portfolio(users[r]->portfolio, max_copies_).transpose();
  }
  if (X.cwiseAbs().sum() == 0.0) fail("svd: ownership matrix is all zero");

  // Power iteration for the dominant right singular vector.
  Vector v = Vector::Ones(cols) / std::sqrt(static_cast<double>(cols));
  for (Index i = 0; i < cols; ++i) v[i] += 1e-6 * static_cast<double>(i % 7);
  v.normalize();
  for (int it = 0; it < 1000; ++it) {
    Vector w = X.transpose() * (X * v);
    const double norm = w.norm();
    if (norm == 0.0) fail("svd: power iteration collapsed");
    w /= norm;
    const double delta = (w - v).norm();
    v = w;
    if (delta < 1e-13) break;
  }
  right_vector_ = v;
}

Vector SvdRecommender::score(const TaskInstance& task) const {
  if (right_vector_.size() == 0) fail("svd: not fitted");
  const Vector row = expand_portfolio(task.portfolio, max_copies_);
  const Vector recon = right_vector_ * row.dot(right_vector_);
  Vector s = Vector::Constant(k_, -std::numeric_limits<double>::infinity());
  for (Index item = 0; item < k_; ++item) {
    for (int j = 0; j < max_copies_; ++j) {
      s[item] = std::max(s[item], recon[static_cast<Index>(j) * k_ + item]);
    }
  }
  return s;
}

void SvdRecommender::save(const std::string& path) const {
  auto& v = const_cast<Vector&>(right_vector_);
  save_checkpoint(path, "svd", json{{"max_copies", max_copies_}, {"k", k_}},
                  {param_ref("right_vector", v)});
}

void SvdRecommender::load(const std::string& path, const Vocabulary& vocab) {
  const Checkpoint ck = load_checkpoint(path);
  if (ck.model_kind != "svd") fail(path + ": not an svd checkpoint");
  max_copies_ = ck.meta.at("max_copies").get<int>();
  k_ = ck.meta.at("k").get<Index>();
  if (k_ != vocab.catalog_size()) fail(path + ": catalog size mismatch");
  right_vector_ = ck.tensor("right_vector").col(0);
}

// ---- SKNN ----

Vector SknnRecommender::pooled_actions(const TaskInstance& task) const {
  return maxpool(binarize_all_actions(task.sessions, vocab_));
}

void SknnRecommender::fit(const std::vector<TaskInstance>& train, const Vocabulary& vocab) {
  if (train.empty()) fail("sknn: empty training set");
  vocab_ = vocab;
  train_vectors_.resize(static_cast<Index>(train.size()), vocab.action_dim());
  train_targets_.resize(static_cast<Index>(train.size()), vocab.catalog_size());
  for (std::size_t i = 0; i < train.size(); ++i) {
    train_vectors_.row(static_cast<Index>(i)) = pooled_actions(train[i]).transpose();
    train_targets_.row(static_cast<Index>(i)) = train[i].target.transpose();
  }
  train_norms_ = train_vectors_.rowwise().norm();
}

Vector SknnRecommender::score(const TaskInstance& task) const {
  if (train_vectors_.size() == 0) fail("sknn: not fitted");
  const Vector q = pooled_actions(task);
  const double qn = q.norm();
  Vector sims = Vector::Zero(train_vectors_.rows());
  if (qn > 0.0) {
    sims = train_vectors_ * q;
    for (Index i = 0; i < sims.size(); ++i) {
      sims[i] = train_norms_[i] > 0.0 ? sims[i] / (train_norms_[i] * qn) : 0.0;
    }
  }

  // Top-n neighbours, similarity ties broken by training index.
  const Index n = std::min<Index>(n_neighbors_, sims.size());
  std::vector<Index> idx(static_cast<std::size_t>(sims.size()));
  std::iota(idx.begin(), idx.end(), Index{0});
  std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) { return sims[a] > sims[b]; });

  Vector s = Vector::Zero(train_targets_.cols());
  for (Index r = 0; r < n; ++r) {
    const Index i = idx[static_cast<std::size_t>(r)];
    s += sims[i] * train_targets_.row(i).transpose();
  }

  if (boosted_) {
    // Items whose objects the user touched in the recent sessions.
    std::set<int> interacted;
    for (const auto& sess : task.sessions) {
      for (const auto& a : sess.actions) {
        if (auto item = vocab_.item_of_object(a.object)) interacted.insert(*item);
      }
    }
    for (int item : interacted) s[item] += boost_;
  }
  return s;
}

void SknnRecommender::save(const std::string& path) const {
  auto& vecs = const_cast<Matrix&>(train_vectors_);
  auto& tgts = const_cast<Matrix&>(train_targets_);
  json meta{{"n_neighbors", n_neighbors_}, {"boost", boost_}, {"boosted", boosted_}};
  save_checkpoint(path, name(), meta,
                  {param_ref("train_vectors", vecs), param_ref("train_targets", tgts)});
}

void SknnRecommender::load(const std::string& path, const Vocabulary& vocab) {
  const Checkpoint ck = load_checkpoint(path);
  if (ck.model_kind != name()) fail(path + ": not a " + name() + " checkpoint");
  vocab_ = vocab;
  n_neighbors_ = ck.meta.at("n_neighbors").get<int>();
  boost_ = ck.meta.at("boost").get<double>();
  train_vectors_ = ck.tensor("train_vectors");
  train_targets_ = ck.tensor("train_targets");
  if (train_vectors_.cols() != vocab.action_dim() ||
      train_targets_.cols() != vocab.catalog_size()) {
    fail(path + ": checkpoint was built with a different vocabulary");
  }
  train_norms_ = train_vectors_.rowwise().norm();
}

}  // namespace xsess
