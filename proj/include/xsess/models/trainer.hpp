#pragma once

#include <cstdint>
#include <vector>

#include "xsess/neural/adam.hpp"
#include "xsess/rng.hpp"

namespace xsess {

struct TrainConfig {
  int batch_size = 32;
  int max_epochs = 500;
  int patience = 1;  // epochs without validation improvement before stopping
  std::uint64_t seed = 0;
  AdamConfig adam;
};

struct TrainHistory {
  std::vector<double> train_loss;  // mean per-example loss per epoch
  std::vector<double> val_loss;
  int best_epoch = 0;  // 1-based; 0 means training never ran
  double best_val = 0.0;
};

// What a model must expose to be trained: indexed examples, a parameter
// layout, and per-example loss/gradient evaluation. Gradients accumulate
// (sum semantics); the trainer scales them to a batch mean.
class TrainableProblem {
 public:
  virtual Index train_size() const = 0;
  virtual Index val_size() const = 0;
  virtual ParamRefs param_refs() = 0;
  virtual ParamRefs grad_refs() = 0;
  virtual void zero_grads() = 0;
  // Adds this example's gradients and returns its loss; `rng` drives dropout.
  virtual double train_loss_backward(Index i, Rng& rng) = 0;
  virtual double val_loss(Index i) const = 0;
  virtual ~TrainableProblem() = default;
};

// Mini-batch Adam with best-epoch restore. After each epoch the validation
// loss is evaluated; when it fails to improve for `patience` consecutive
// epochs, training stops and the best epoch's parameters are restored.
TrainHistory fit_early_stopping(TrainableProblem& prob, const TrainConfig& cfg);

}  // namespace xsess
