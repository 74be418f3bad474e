#include "xsess/baselines/neural_baselines.hpp"

#include "xsess/eval/split.hpp"
#include "xsess/neural/checkpoint.hpp"
#include "xsess/neural/dropout.hpp"

namespace xsess {

using nlohmann::json;

// ---- Demographic ----

Vector DemographicRecommender::features(const TaskInstance& task) {
  Vector x(task.demographics.size() + task.portfolio.size());
  x << task.demographics, task.portfolio.cast<Scalar>();
  return x;
}

namespace {

class FfnnProblem : public TrainableProblem {
 public:
  FfnnProblem(FeedForwardNet& net, std::vector<Vector> train_x, std::vector<Vector> train_y,
              std::vector<Vector> val_x, std::vector<Vector> val_y, double dropout)
      : net_(net),
        grad_(FeedForwardNet::zeros_like(net)),
        train_x_(std::move(train_x)),
        train_y_(std::move(train_y)),
        val_x_(std::move(val_x)),
        val_y_(std::move(val_y)),
        dropout_(dropout),
        ones_(Vector::Ones(net.l1.W.rows())) {}

  Index train_size() const override { return static_cast<Index>(train_x_.size()); }
  Index val_size() const override { return static_cast<Index>(val_x_.size()); }
  ParamRefs param_refs() override { return net_.refs(); }
  ParamRefs grad_refs() override { return grad_.refs(); }
  void zero_grads() override { set_zero(grad_.refs()); }
  double train_loss_backward(Index i, Rng& rng) override {
    const auto ii = static_cast<std::size_t>(i);
    const Vector mask = dropout_mask(net_.l1.W.rows(), dropout_, rng);
    return net_.loss_backward(train_x_[ii], train_y_[ii], mask, grad_);
  }
  double val_loss(Index i) const override {
    const auto ii = static_cast<std::size_t>(i);
    return net_.loss(val_x_[ii], val_y_[ii], ones_);
  }

 private:
  FeedForwardNet& net_;
  FeedForwardNet grad_;
  std::vector<Vector> train_x_, train_y_, val_x_, val_y_;
  double dropout_;
  Vector ones_;
};

}  // namespace

void DemographicRecommender::fit(const std::vector<TaskInstance>& train, const Vocabulary& vocab) {
  const SplitResult split = temporal_split(train, spec_.val_frac);
  std::vector<Vector> train_x, train_y, val_x, val_y;
  for (const auto& t : split.train) {
    train_x.push_back(features(t));
    train_y.push_back(t.target);
  }
  for (const auto& t : split.test) {
    val_x.push_back(features(t));
    val_y.push_back(t.target);
  }
  if (train_x.empty()) fail("demographic: empty training split");

  Rng init_rng(seed_);
  net_ = FeedForwardNet::init(spec_.units, train_x.front().size(), vocab.catalog_size(), init_rng);
  FfnnProblem prob(*net_, std::move(train_x), std::move(train_y), std::move(val_x),
                   std::move(val_y), spec_.dropout);
  TrainConfig cfg;
  cfg.batch_size = spec_.batch_size;
  cfg.max_epochs = spec_.max_epochs;
  cfg.patience = spec_.patience;
  cfg.seed = seed_ + 1;
  cfg.adam = spec_.adam;
  history_ = fit_early_stopping(prob, cfg);
}

Vector DemographicRecommender::score(const TaskInstance& task) const {
  if (!net_) fail("demographic: not fitted");
  return net_->predict(features(task));
}

void DemographicRecommender::save(const std::string& path) const {
  if (!net_) fail("demographic: not fitted");
  json meta{{"units", spec_.units},
            {"input_dim", net_->l1.W.cols()},
            {"k", net_->out.W.rows()},
            {"seed", seed_}};
  save_checkpoint(path, "demographic", meta, const_cast<FeedForwardNet&>(*net_).refs());
}

void DemographicRecommender::load(const std::string& path, const Vocabulary& vocab) {
  const Checkpoint ck = load_checkpoint(path);
  if (ck.model_kind != "demographic") fail(path + ": not a demographic checkpoint");
  spec_.units = ck.meta.at("units").get<int>();
  const auto input_dim = ck.meta.at("input_dim").get<Index>();
  const auto k = ck.meta.at("k").get<Index>();
  if (k != vocab.catalog_size()) fail(path + ": catalog size mismatch");
  Rng dummy(0);
  net_ = FeedForwardNet::init(spec_.units, input_dim, k, dummy);
  restore_params(ck, net_->refs());
}

// ---- GRU4REC ----

std::string Gru4RecRecommender::token_key(const Action& a) const {
  return vocab_.sections.label(a.section) + "\x1f" + vocab_.objects.label(a.object) + "\x1f" +
         vocab_.action_types.label(a.type);
}

void Gru4RecRecommender::rebuild_token_items(const Vocabulary& vocab) {
  token_item_.assign(static_cast<std::size_t>(token_vocab_.size()), -1);
  for (int t = 0; t < token_vocab_.size(); ++t) {
    const std::string& key = token_vocab_.label(t);
    const auto second = key.find('\x1f');
    const auto third = key.find('\x1f', second + 1);
    const std::string object = key.substr(second + 1, third - second - 1);
    if (auto obj_idx = vocab.objects.find(object)) {
      if (auto item = vocab.item_of_object(*obj_idx)) token_item_[static_cast<std::size_t>(t)] = *item;
    }
  }
}

std::vector<int> Gru4RecRecommender::tokens(const TaskInstance& task) const {
  std::vector<int> seq;
  auto add_session = [&](const Session& s) {
    for (const auto& a : s.actions) {
      if (auto idx = token_vocab_.find(token_key(a))) seq.push_back(*idx);
    }
  };
  if (concat_) {
    for (const auto& s : task.sessions) add_session(s);
  } else {
    add_session(task.sessions.back());
  }
  return seq;
}

namespace {

class NextActionProblem : public TrainableProblem {
 public:
  NextActionProblem(NextActionNet& net, std::vector<std::vector<int>> train,
                    std::vector<std::vector<int>> val, double dropout)
      : net_(net),
        grad_(NextActionNet::zeros_like(net)),
        train_(std::move(train)),
        val_(std::move(val)),
        dropout_(dropout) {}

  Index train_size() const override { return static_cast<Index>(train_.size()); }
  Index val_size() const override { return static_cast<Index>(val_.size()); }
  ParamRefs param_refs() override { return net_.refs(); }
  ParamRefs grad_refs() override { return grad_.refs(); }
  void zero_grads() override { set_zero(grad_.refs()); }
  double train_loss_backward(Index i, Rng& rng) override {
    const auto& seq = train_[static_cast<std::size_t>(i)];
    std::vector<Vector> masks(seq.size() - 1);
    for (auto& m : masks) m = dropout_mask(net_.gru.hidden(), dropout_, rng);
    return net_.loss_backward(seq, masks, grad_);
  }
  double val_loss(Index i) const override {
    return net_.loss(val_[static_cast<std::size_t>(i)], {});
  }

 private:
  NextActionNet& net_;
  NextActionNet grad_;
  std::vector<std::vector<int>> train_, val_;
  double dropout_;
};

}  // namespace

void Gru4RecRecommender::fit(const std::vector<TaskInstance>& train, const Vocabulary& vocab) {
  vocab_ = vocab;
  const SplitResult split = temporal_split(train, spec_.val_frac);

  token_vocab_ = LabelMap{};
  for (const auto& t : split.train) {
    for (const auto& s : t.sessions) {
      if (!concat_ && &s != &t.sessions.back()) continue;
      for (const auto& a : s.actions) token_vocab_.add(token_key(a));
    }
  }
  if (token_vocab_.size() == 0) fail("gru4rec: no actions in the training split");
  rebuild_token_items(vocab);

  auto sequences = [&](const std::vector<TaskInstance>& tasks) {
    std::vector<std::vector<int>> out;
    for (const auto& t : tasks) {
      auto seq = tokens(t);
      if (seq.size() >= 2) out.push_back(std::move(seq));  // need a next step to predict
    }
    return out;
  };
  auto train_seqs = sequences(split.train);
  auto val_seqs = sequences(split.test);
  if (train_seqs.empty() || val_seqs.empty()) {
    fail("gru4rec: not enough multi-action sequences to train");
  }

  Rng init_rng(seed_);
  net_ = NextActionNet::init(spec_.units, token_vocab_.size(), init_rng);
  NextActionProblem prob(*net_, std::move(train_seqs), std::move(val_seqs), spec_.dropout);
  TrainConfig cfg;
  cfg.batch_size = spec_.batch_size;
  cfg.max_epochs = spec_.max_epochs;
  cfg.patience = spec_.patience;
  cfg.seed = seed_ + 1;
  cfg.adam = spec_.adam;
  history_ = fit_early_stopping(prob, cfg);
}

Vector Gru4RecRecommender::score(const TaskInstance& task) const {
  if (!net_) fail("gru4rec: not fitted");
  Vector s = Vector::Zero(vocab_.catalog_size());
  const auto seq = tokens(task);
  if (seq.empty()) return s;  // nothing recognisable: neutral scores
  const Vector probs = net_->predict_last(seq);
  for (int t = 0; t < token_vocab_.size(); ++t) {
    const int item = token_item_[static_cast<std::size_t>(t)];
    if (item < 0) continue;
    if (spec_.sum_scores) {
      s[item] += probs[t];
    } else {
      s[item] = std::max(s[item], probs[t]);
    }
  }
  return s;
}

void Gru4RecRecommender::save(const std::string& path) const {
  if (!net_) fail("gru4rec: not fitted");
  json meta{{"units", spec_.units},
            {"concat", concat_},
            {"sum_scores", spec_.sum_scores},
            {"tokens", token_vocab_.labels()},
            {"seed", seed_}};
  save_checkpoint(path, name(), meta, const_cast<NextActionNet&>(*net_).refs());
}

void Gru4RecRecommender::load(const std::string& path, const Vocabulary& vocab) {
  const Checkpoint ck = load_checkpoint(path);
  if (ck.model_kind != name()) fail(path + ": not a " + name() + " checkpoint");
  vocab_ = vocab;
  spec_.units = ck.meta.at("units").get<int>();
  spec_.sum_scores = ck.meta.at("sum_scores").get<bool>();
  token_vocab_ = LabelMap{};
  for (const auto& t : ck.meta.at("tokens")) token_vocab_.add(t.get<std::string>());
  rebuild_token_items(vocab);
  Rng dummy(0);
  net_ = NextActionNet::init(spec_.units, token_vocab_.size(), dummy);
  restore_params(ck, net_->refs());
}

}  // namespace xsess
