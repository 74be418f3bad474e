#pragma once

#include <optional>

#include "xsess/models/nets.hpp"
#include "xsess/models/trainer.hpp"
#include "xsess/recommender.hpp"

namespace xsess {

enum class SessionInput { maxpool, concat, autoencoded };

// Hyperparameters; zeros mean "use this variant's published defaults".
struct CrossSessionsSpec {
  SessionInput input = SessionInput::maxpool;
  bool with_demographics = false;
  int units = 0;
  int batch_size = 0;
  double dropout = -1.0;
  int demo_units = 32;
  int ae_units = 0;       // autoencoder width (autoencoded input only)
  int ae_batch_size = 0;
  double ae_dropout = 0.0;
  int max_epochs = 500;
  int patience = 1;
  double val_frac = 0.10;
  AdamConfig adam;

  void apply_defaults();
  static CrossSessionsSpec from_config(SessionInput input, bool with_demographics,
                                       const nlohmann::json& config);
};

// Trains the session autoencoder on the given sessions (validation on
// `val_sessions`) and returns the fitted model plus its history.
std::pair<SessionAutoencoder, TrainHistory> train_autoencoder(
    const std::vector<Session>& train_sessions, const std::vector<Session>& val_sessions,
    const Vocabulary& vocab, int units, int batch_size, int max_epochs, int patience,
    std::uint64_t seed, const AdamConfig& adam = {});

// The multi-session purchase models: GRU over per-session inputs (max-pool
// encodings, the flat action sequence, or autoencoder codes), optionally
// merged with a demographic branch.
class CrossSessionsModel : public Recommender {
 public:
  CrossSessionsModel(CrossSessionsSpec spec, std::uint64_t seed);

  std::string name() const override;
  void fit(const std::vector<TaskInstance>& train, const Vocabulary& vocab) override;
  Vector score(const TaskInstance& task) const override;
  void save(const std::string& path) const override;
  void load(const std::string& path, const Vocabulary& vocab) override;

  // Session inputs as consumed by the GRU, exposed for tests/analyses.
  std::vector<Vector> build_inputs(const TaskInstance& task) const;

  const TrainHistory& history() const { return history_; }
  const TrainHistory& ae_history() const { return ae_history_; }
  const CrossSessionsSpec& spec() const { return spec_; }

  // Use an already-trained autoencoder instead of pre-training one in fit().
  void set_autoencoder(SessionAutoencoder ae) { ae_ = std::move(ae); }
  const std::optional<SessionAutoencoder>& autoencoder() const { return ae_; }

 private:
  CrossSessionsSpec spec_;
  std::uint64_t seed_;
  Vocabulary vocab_;
  std::optional<SequenceNet> net_;
  std::optional<HybridNet> hybrid_;
  std::optional<SessionAutoencoder> ae_;
  TrainHistory history_;
  TrainHistory ae_history_;
};

}  // namespace xsess
