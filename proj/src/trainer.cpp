#include "xsess/models/trainer.hpp"

#include <limits>
#include <numeric>

namespace xsess {

TrainHistory fit_early_stopping(TrainableProblem& prob, const TrainConfig& cfg) {
  if (prob.train_size() == 0 || prob.val_size() == 0) {
    fail("fit_early_stopping: empty training or validation split");
  }
  if (cfg.batch_size < 1) fail("fit_early_stopping: batch_size must be >= 1");

  ParamRefs params = prob.param_refs();
  ParamRefs grads = prob.grad_refs();
  Adam adam(cfg.adam);
  Rng rng(cfg.seed);

  std::vector<Index> order(static_cast<std::size_t>(prob.train_size()));
  std::iota(order.begin(), order.end(), Index{0});

  TrainHistory hist;
  Vector best_params;
  double best_val = std::numeric_limits<double>::infinity();
  int since_best = 0;

  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    rng.shuffle(order);
    double train_sum = 0.0;
    for (std::size_t at = 0; at < order.size(); at += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t end = std::min(at + static_cast<std::size_t>(cfg.batch_size), order.size());
      prob.zero_grads();
      for (std::size_t i = at; i < end; ++i) {
        train_sum += prob.train_loss_backward(order[i], rng);
      }
      const std::string bad = first_nonfinite(grads);
      if (!bad.empty()) fail("training diverged: non-finite gradient in '" + bad + "'");
      const double scale = 1.0 / static_cast<double>(end - at);
      for (const auto& g : grads) g.flat() *= scale;
      adam.step(params, grads);
    }

    double val_sum = 0.0;
    for (Index i = 0; i < prob.val_size(); ++i) val_sum += prob.val_loss(i);
    const double val = val_sum / static_cast<double>(prob.val_size());
    hist.train_loss.push_back(train_sum / static_cast<double>(prob.train_size()));
    hist.val_loss.push_back(val);

    if (val < best_val) {
      best_val = val;
      best_params = flatten(params);
      hist.best_epoch = epoch;
      since_best = 0;
    } else if (++since_best >= cfg.patience) {
      break;
    }
  }

  if (best_params.size() > 0) unflatten(best_params, params);
  hist.best_val = best_val;
  return hist;
}

}  // namespace xsess
