#include "xsess/models/cross_sessions.hpp"

#include <map>

#include "xsess/config_util.hpp"
#include "xsess/eval/split.hpp"
#include "xsess/models/session_encoding.hpp"
#include "xsess/neural/checkpoint.hpp"
#include "xsess/neural/dropout.hpp"

namespace xsess {

using nlohmann::json;

void CrossSessionsSpec::apply_defaults() {
  switch (input) {
    case SessionInput::maxpool:
      if (batch_size == 0) batch_size = 32;
      if (units == 0) units = 64;
      if (dropout < 0.0) dropout = 0.3;
      break;
    case SessionInput::concat:
      if (batch_size == 0) batch_size = 128;
      if (units == 0) units = 64;
      if (dropout < 0.0) dropout = 0.3;
      break;
    case SessionInput::autoencoded:
      if (batch_size == 0) batch_size = 32;
      if (units == 0) units = 64;
      if (dropout < 0.0) dropout = 0.4;
      if (ae_units == 0) ae_units = 512;
      if (ae_batch_size == 0) ae_batch_size = 128;
      break;
  }
}

CrossSessionsSpec CrossSessionsSpec::from_config(SessionInput input, bool with_demographics,
                                                 const json& config) {
  CrossSessionsSpec s;
  s.input = input;
  s.with_demographics = with_demographics;
  ConfigReader r(config, "model");
  s.units = r.get<int>("units", 0);
  s.batch_size = r.get<int>("batch_size", 0);
  s.dropout = r.get<double>("dropout", -1.0);
  s.demo_units = r.get<int>("demo_units", 32);
  s.ae_units = r.get<int>("ae_units", 0);
  s.ae_batch_size = r.get<int>("ae_batch_size", 0);
  s.ae_dropout = r.get<double>("ae_dropout", 0.0);
  s.max_epochs = r.get<int>("max_epochs", 500);
  s.patience = r.get<int>("patience", 1);
  s.val_frac = r.get<double>("val_frac", 0.10);
  s.adam.lr = r.get<double>("learning_rate", s.adam.lr);
  r.finish();
  s.apply_defaults();
  return s;
}

namespace {

// Distinct sessions of a task list, keyed to avoid double-counting sessions
// shared by several purchases of one user.
std::vector<Session> unique_sessions(const std::vector<TaskInstance>& tasks) {
  std::map<std::string, const Session*> seen;
  for (const auto& t : tasks) {
    for (const auto& s : t.sessions) seen.emplace(s.key(), &s);
  }
  std::vector<Session> out;
  out.reserve(seen.size());
  for (const auto& [key, s] : seen) out.push_back(*s);
  return out;
}

class AutoencoderProblem : public TrainableProblem {
 public:
  AutoencoderProblem(SessionAutoencoder& net, const std::vector<Session>& train,
                     const std::vector<Session>& val, const Vocabulary& vocab)
      : net_(net), grad_(SessionAutoencoder::zeros_like(net)) {
    auto prep = [&](const std::vector<Session>& ss, std::vector<std::vector<Vector>>& xs,
                    std::vector<std::vector<std::array<int, 3>>>& ys) {
      for (const auto& s : ss) {
        xs.push_back(binarize_session(s, vocab));
        std::vector<std::array<int, 3>> labels;
        for (const auto& a : s.actions) labels.push_back({a.section, a.object, a.type});
        ys.push_back(std::move(labels));
      }
    };
    prep(train, train_x_, train_y_);
    prep(val, val_x_, val_y_);
  }

  Index train_size() const override { return static_cast<Index>(train_x_.size()); }
  Index val_size() const override { return static_cast<Index>(val_x_.size()); }
  ParamRefs param_refs() override { return net_.refs(); }
  ParamRefs grad_refs() override { return grad_.refs(); }
  void zero_grads() override { set_zero(grad_.refs()); }
  double train_loss_backward(Index i, Rng&) override {
    const auto ii = static_cast<std::size_t>(i);
    return net_.loss_backward(train_x_[ii], train_y_[ii], grad_);
  }
  double val_loss(Index i) const override {
    const auto ii = static_cast<std::size_t>(i);
    return net_.loss(val_x_[ii], val_y_[ii]);
  }

 private:
  SessionAutoencoder& net_;
  SessionAutoencoder grad_;
  std::vector<std::vector<Vector>> train_x_, val_x_;
  std::vector<std::vector<std::array<int, 3>>> train_y_, val_y_;
};

class SequenceProblem : public TrainableProblem {
 public:
  SequenceProblem(SequenceNet& net, std::vector<std::vector<Vector>> train_x,
                  std::vector<Vector> train_y, std::vector<std::vector<Vector>> val_x,
                  std::vector<Vector> val_y, double dropout)
      : net_(net),
        grad_(SequenceNet::zeros_like(net)),
        train_x_(std::move(train_x)),
        train_y_(std::move(train_y)),
        val_x_(std::move(val_x)),
        val_y_(std::move(val_y)),
        dropout_(dropout),
        ones_(Vector::Ones(net.gru.hidden())) {}

  Index train_size() const override { return static_cast<Index>(train_x_.size()); }
  Index val_size() const override { return static_cast<Index>(val_x_.size()); }
  ParamRefs param_refs() override { return net_.refs(); }
  ParamRefs grad_refs() override { return grad_.refs(); }
  void zero_grads() override { set_zero(grad_.refs()); }
  double train_loss_backward(Index i, Rng& rng) override {
    const auto ii = static_cast<std::size_t>(i);
    const Vector mask = dropout_mask(net_.gru.hidden(), dropout_, rng);
    return net_.loss_backward(train_x_[ii], train_y_[ii], mask, grad_);
  }
  double val_loss(Index i) const override {
    const auto ii = static_cast<std::size_t>(i);
    return net_.loss(val_x_[ii], val_y_[ii], ones_);
  }

 private:
  SequenceNet& net_;
  SequenceNet grad_;
  std::vector<std::vector<Vector>> train_x_, val_x_;
  std::vector<Vector> train_y_, val_y_;
  double dropout_;
  Vector ones_;
};

class HybridProblem : public TrainableProblem {
 public:
  HybridProblem(HybridNet& net, std::vector<std::vector<Vector>> train_x,
                std::vector<Vector> train_demo, std::vector<Vector> train_y,
                std::vector<std::vector<Vector>> val_x, std::vector<Vector> val_demo,
                std::vector<Vector> val_y, double dropout)
      : net_(net),
        grad_(HybridNet::zeros_like(net)),
        train_x_(std::move(train_x)),
        train_demo_(std::move(train_demo)),
        train_y_(std::move(train_y)),
        val_x_(std::move(val_x)),
        val_demo_(std::move(val_demo)),
        val_y_(std::move(val_y)),
        dropout_(dropout),
        ones_h_(Vector::Ones(net.gru.hidden())),
        ones_d_(Vector::Ones(net.demo.W.rows())) {}

  Index train_size() const override { return static_cast<Index>(train_x_.size()); }
  Index val_size() const override { return static_cast<Index>(val_x_.size()); }
  ParamRefs param_refs() override { return net_.refs(); }
  ParamRefs grad_refs() override { return grad_.refs(); }
  void zero_grads() override { set_zero(grad_.refs()); }
  double train_loss_backward(Index i, Rng& rng) override {
    const auto ii = static_cast<std::size_t>(i);
    const Vector mask_h = dropout_mask(net_.gru.hidden(), dropout_, rng);
    const Vector mask_d = dropout_mask(net_.demo.W.rows(), dropout_, rng);
    return net_.loss_backward(train_x_[ii], train_demo_[ii], train_y_[ii], mask_h, mask_d, grad_);
  }
  double val_loss(Index i) const override {
    const auto ii = static_cast<std::size_t>(i);
    return net_.loss(val_x_[ii], val_demo_[ii], val_y_[ii], ones_h_, ones_d_);
  }

 private:
  HybridNet& net_;
  HybridNet grad_;
  std::vector<std::vector<Vector>> train_x_, val_x_;
  std::vector<Vector> train_demo_, val_demo_;
  std::vector<Vector> train_y_, val_y_;
  double dropout_;
  Vector ones_h_, ones_d_;
};

}  // namespace

std::pair<SessionAutoencoder, TrainHistory> train_autoencoder(
    const std::vector<Session>& train_sessions, const std::vector<Session>& val_sessions,
    const Vocabulary& vocab, int units, int batch_size, int max_epochs, int patience,
    std::uint64_t seed, const AdamConfig& adam) {
  if (train_sessions.empty() || val_sessions.empty()) {
    fail("train_autoencoder: empty session split");
  }
  Rng init_rng(seed);
  const std::vector<Index> blocks{vocab.sections.size(), vocab.objects.size(),
                                  vocab.action_types.size()};
  SessionAutoencoder ae = SessionAutoencoder::init(units, blocks, init_rng);
  AutoencoderProblem prob(ae, train_sessions, val_sessions, vocab);
  TrainConfig cfg;
  cfg.batch_size = batch_size;
  cfg.max_epochs = max_epochs;
  cfg.patience = patience;
  cfg.seed = seed + 1;
  cfg.adam = adam;
  TrainHistory hist = fit_early_stopping(prob, cfg);
  return {std::move(ae), std::move(hist)};
}

CrossSessionsModel::CrossSessionsModel(CrossSessionsSpec spec, std::uint64_t seed)
    : spec_(spec), seed_(seed) {
  spec_.apply_defaults();
}

std::string CrossSessionsModel::name() const {
  std::string base;
  switch (spec_.input) {
    case SessionInput::maxpool: base = "encode"; break;
    case SessionInput::concat: base = "concat"; break;
    case SessionInput::autoencoded: base = "auto"; break;
  }
  return spec_.with_demographics ? "hybrid_" + base : base;
}

std::vector<Vector> CrossSessionsModel::build_inputs(const TaskInstance& task) const {
  if (task.sessions.empty()) fail("cross-sessions model: task without sessions");
  std::vector<Vector> inputs;
  switch (spec_.input) {
    case SessionInput::maxpool:
      for (const auto& s : task.sessions) inputs.push_back(encode_session_maxpool(s, vocab_));
      break;
    case SessionInput::concat:
      inputs = binarize_all_actions(task.sessions, vocab_);
      break;
    case SessionInput::autoencoded:
      if (!ae_) fail("cross-sessions model: autoencoder not trained");
      for (const auto& s : task.sessions) inputs.push_back(ae_->encode(binarize_session(s, vocab_)));
      break;
  }
  return inputs;
}

void CrossSessionsModel::fit(const std::vector<TaskInstance>& train, const Vocabulary& vocab) {
  vocab_ = vocab;
  const SplitResult split = temporal_split(train, spec_.val_frac);

  if (spec_.input == SessionInput::autoencoded && !ae_) {
    auto [ae, hist] = train_autoencoder(unique_sessions(split.train), unique_sessions(split.test),
                                        vocab, spec_.ae_units, spec_.ae_batch_size,
                                        spec_.max_epochs, spec_.patience, seed_ ^ 0xae5e55ULL,
                                        spec_.adam);
    ae_ = std::move(ae);
    ae_history_ = std::move(hist);
  }

  auto gather = [&](const std::vector<TaskInstance>& tasks, std::vector<std::vector<Vector>>& xs,
                    std::vector<Vector>& demos, std::vector<Vector>& ys) {
    for (const auto& t : tasks) {
      xs.push_back(build_inputs(t));
      demos.push_back(t.demographics);
      ys.push_back(t.target);
    }
  };
  std::vector<std::vector<Vector>> train_x, val_x;
  std::vector<Vector> train_demo, val_demo, train_y, val_y;
  gather(split.train, train_x, train_demo, train_y);
  gather(split.test, val_x, val_demo, val_y);

  const Index input_dim = spec_.input == SessionInput::autoencoded
                              ? static_cast<Index>(spec_.ae_units)
                              : static_cast<Index>(vocab.action_dim());
  const Index k = vocab.catalog_size();
  Rng init_rng(seed_);

  TrainConfig cfg;
  cfg.batch_size = spec_.batch_size;
  cfg.max_epochs = spec_.max_epochs;
  cfg.patience = spec_.patience;
  cfg.seed = seed_ + 1;
  cfg.adam = spec_.adam;

  if (spec_.with_demographics) {
    if (train_demo.empty() || train_demo.front().size() == 0) {
      fail("hybrid model: demographics vector missing");
    }
    hybrid_ = HybridNet::init(spec_.units, input_dim, train_demo.front().size(), spec_.demo_units,
                              k, init_rng);
    HybridProblem prob(*hybrid_, std::move(train_x), std::move(train_demo), std::move(train_y),
                       std::move(val_x), std::move(val_demo), std::move(val_y), spec_.dropout);
    history_ = fit_early_stopping(prob, cfg);
  } else {
    net_ = SequenceNet::init(spec_.units, input_dim, k, init_rng);
    SequenceProblem prob(*net_, std::move(train_x), std::move(train_y), std::move(val_x),
                         std::move(val_y), spec_.dropout);
    history_ = fit_early_stopping(prob, cfg);
  }
}

Vector CrossSessionsModel::score(const TaskInstance& task) const {
  const auto inputs = build_inputs(task);
  if (spec_.with_demographics) {
    if (!hybrid_) fail("cross-sessions model: not fitted");
    return hybrid_->predict(inputs, task.demographics);
  }
  if (!net_) fail("cross-sessions model: not fitted");
  return net_->predict(inputs);
}

void CrossSessionsModel::save(const std::string& path) const {
  json meta;
  meta["input"] = spec_.input == SessionInput::maxpool
                      ? "maxpool"
                      : (spec_.input == SessionInput::concat ? "concat" : "autoencoded");
  meta["with_demographics"] = spec_.with_demographics;
  meta["units"] = spec_.units;
  meta["batch_size"] = spec_.batch_size;
  meta["dropout"] = spec_.dropout;
  meta["demo_units"] = spec_.demo_units;
  meta["ae_units"] = spec_.ae_units;
  meta["seed"] = seed_;
  meta["action_dim"] = vocab_.action_dim();
  meta["catalog_size"] = vocab_.catalog_size();

  ParamRefs refs;
  auto add = [&](ParamRefs more, const std::string& prefix) {
    for (auto& r : more) {
      r.name = prefix + r.name;
      refs.push_back(r);
    }
  };
  if (ae_) add(const_cast<SessionAutoencoder&>(*ae_).refs(), "ae.");
  if (net_) add(const_cast<SequenceNet&>(*net_).refs(), "net.");
  if (hybrid_) add(const_cast<HybridNet&>(*hybrid_).refs(), "net.");
  save_checkpoint(path, name(), meta, refs);
}

void CrossSessionsModel::load(const std::string& path, const Vocabulary& vocab) {
  const Checkpoint ck = load_checkpoint(path);
  if (ck.model_kind != name()) {
    fail(path + ": checkpoint holds model '" + ck.model_kind + "', expected '" + name() + "'");
  }
  vocab_ = vocab;
  spec_.units = ck.meta.at("units").get<int>();
  spec_.demo_units = ck.meta.at("demo_units").get<int>();
  spec_.ae_units = ck.meta.at("ae_units").get<int>();
  if (ck.meta.at("action_dim").get<int>() != vocab.action_dim() ||
      ck.meta.at("catalog_size").get<int>() != vocab.catalog_size()) {
    fail(path + ": checkpoint was trained with a different vocabulary");
  }

  const Index input_dim = spec_.input == SessionInput::autoencoded
                              ? static_cast<Index>(spec_.ae_units)
                              : static_cast<Index>(vocab.action_dim());
  const Index k = vocab.catalog_size();
  Rng dummy(0);
  ParamRefs refs;
  auto add = [&](ParamRefs more, const std::string& prefix) {
    for (auto& r : more) {
      r.name = prefix + r.name;
      refs.push_back(r);
    }
  };
  if (spec_.input == SessionInput::autoencoded) {
    const std::vector<Index> blocks{vocab.sections.size(), vocab.objects.size(),
                                    vocab.action_types.size()};
    ae_ = SessionAutoencoder::init(spec_.ae_units, blocks, dummy);
    add(ae_->refs(), "ae.");
  }
  if (spec_.with_demographics) {
    const Index demo_dim = ck.tensor("net.demo.W").cols();
    hybrid_ = HybridNet::init(spec_.units, input_dim, demo_dim, spec_.demo_units, k, dummy);
    add(hybrid_->refs(), "net.");
  } else {
    net_ = SequenceNet::init(spec_.units, input_dim, k, dummy);
    add(net_->refs(), "net.");
  }
  restore_params(ck, refs);
}

}  // namespace xsess
