#include "xsess/recommender.hpp"

#include "xsess/baselines/baselines.hpp"
#include "xsess/baselines/neural_baselines.hpp"
#include "xsess/config_util.hpp"
#include "xsess/models/cross_sessions.hpp"
#include "xsess/neural/checkpoint.hpp"

namespace xsess {

using nlohmann::json;

namespace {

DemographicRecommender::Spec demographic_spec(const json& config) {
  DemographicRecommender::Spec s;
  ConfigReader r(config, "model");
  s.units = r.get<int>("units", s.units);
  s.batch_size = r.get<int>("batch_size", s.batch_size);
  s.dropout = r.get<double>("dropout", s.dropout);
  s.max_epochs = r.get<int>("max_epochs", s.max_epochs);
  s.patience = r.get<int>("patience", s.patience);
  s.val_frac = r.get<double>("val_frac", s.val_frac);
  s.adam.lr = r.get<double>("learning_rate", s.adam.lr);
  r.finish();
  return s;
}

Gru4RecRecommender::Spec gru4rec_spec(const json& config) {
  Gru4RecRecommender::Spec s;
  ConfigReader r(config, "model");
  s.units = r.get<int>("units", s.units);
  s.batch_size = r.get<int>("batch_size", s.batch_size);
  s.dropout = r.get<double>("dropout", s.dropout);
  s.max_epochs = r.get<int>("max_epochs", s.max_epochs);
  s.patience = r.get<int>("patience", s.patience);
  s.val_frac = r.get<double>("val_frac", s.val_frac);
  s.sum_scores = r.get<std::string>("item_score", "max") == "sum";
  s.adam.lr = r.get<double>("learning_rate", s.adam.lr);
  r.finish();
  return s;
}

std::unique_ptr<Recommender> make_sknn(bool boosted, const json& config) {
  ConfigReader r(config, "model");
  const int n = r.get<int>("n_neighbors", 30);
  const double boost = r.get<double>("boost", 0.5);
  r.finish();
  return std::make_unique<SknnRecommender>(boosted, n, boost);
}

void expect_empty(const json& config) {
  ConfigReader r(config, "model");
  r.finish();
}

}  // namespace

const std::vector<std::string>& recommender_names() {
  static const std::vector<std::string> names = {
      "random",  "popular",       "svd",    "demographic",   "gru4rec",
      "gru4rec_concat", "sknn_e", "sknn_eb", "encode",        "concat",
      "auto",    "hybrid_encode", "hybrid_concat", "hybrid_auto"};
  return names;
}

std::unique_ptr<Recommender> make_recommender(const std::string& name, const json& config,
                                              std::uint64_t seed) {
  auto cross = [&](SessionInput input, bool demo) {
    return std::make_unique<CrossSessionsModel>(
        CrossSessionsSpec::from_config(input, demo, config), seed);
  };
  if (name == "random") {
    expect_empty(config);
    return std::make_unique<RandomRecommender>(seed);
  }
  if (name == "popular") {
    expect_empty(config);
    return std::make_unique<PopularRecommender>();
  }
  if (name == "svd") {
    expect_empty(config);
    return std::make_unique<SvdRecommender>();
  }
  if (name == "demographic") {
    return std::make_unique<DemographicRecommender>(demographic_spec(config), seed);
  }
  if (name == "gru4rec") {
    return std::make_unique<Gru4RecRecommender>(false, gru4rec_spec(config), seed);
  }
  if (name == "gru4rec_concat") {
    return std::make_unique<Gru4RecRecommender>(true, gru4rec_spec(config), seed);
  }
  if (name == "sknn_e") return make_sknn(false, config);
  if (name == "sknn_eb") return make_sknn(true, config);
  if (name == "encode") return cross(SessionInput::maxpool, false);
  if (name == "concat") return cross(SessionInput::concat, false);
  if (name == "auto") return cross(SessionInput::autoencoded, false);
  if (name == "hybrid_encode") return cross(SessionInput::maxpool, true);
  if (name == "hybrid_concat") return cross(SessionInput::concat, true);
  if (name == "hybrid_auto") return cross(SessionInput::autoencoded, true);
  fail("unknown model '" + name + "'");
}

std::unique_ptr<Recommender> load_recommender(const std::string& path, const Vocabulary& vocab) {
  const Checkpoint ck = load_checkpoint(path);
  auto model = make_recommender(ck.model_kind, json(nullptr),
                                ck.meta.contains("seed") ? ck.meta.at("seed").get<std::uint64_t>() : 0);
  model->load(path, vocab);
  return model;
}

}  // namespace xsess
