#pragma once

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "xsess/sessionize/tasks.hpp"

namespace xsess {

// Common surface of every model: fit on training tasks, then produce one
// real-valued score per catalog item (higher = more recommended). Scoring
// must be deterministic once fitted.
class Recommender {
 public:
  virtual std::string name() const = 0;
  virtual void fit(const std::vector<TaskInstance>& train, const Vocabulary& vocab) = 0;
  virtual Vector score(const TaskInstance& task) const = 0;
  virtual void save(const std::string& path) const = 0;
  virtual void load(const std::string& path, const Vocabulary& vocab) = 0;
  virtual ~Recommender() = default;
};

// Models by CLI name: random, popular, svd, demographic, gru4rec,
// gru4rec_concat, sknn_e, sknn_eb, encode, concat, auto, and the
// hybrid_{encode,concat,auto} variants. `config` holds hyperparameter
// overrides; unknown keys are rejected.
std::unique_ptr<Recommender> make_recommender(const std::string& name,
                                              const nlohmann::json& config, std::uint64_t seed);

const std::vector<std::string>& recommender_names();

// Reads a checkpoint's model kind and dispatches to the right recommender.
std::unique_ptr<Recommender> load_recommender(const std::string& path, const Vocabulary& vocab);

}  // namespace xsess
