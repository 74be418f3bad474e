#pragma once

#include <cmath>

#include "xsess/neural/params.hpp"

namespace xsess {

// TensorFlow-default hyperparameters.
struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-7;
};

// Bias-corrected Adam over a fixed parameter layout.
class Adam {
 public:
  explicit Adam(AdamConfig cfg = {}) : cfg_(cfg) {}

  const AdamConfig& config() const { return cfg_; }
  long step_count() const { return step_; }

  // Applies one update; `params` and `grads` must share shapes and order.
  void step(const ParamRefs& params, const ParamRefs& grads) {
    const Index n = param_count(params);
    if (m_.size() != n) {
      m_ = Vector::Zero(n);
      v_ = Vector::Zero(n);
      step_ = 0;
    }
    ++step_;
    const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(step_));
    const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(step_));
    Index at = 0;
    for (std::size_t i = 0; i < params.size(); ++i) {
      auto theta = params[i].flat();
      const auto g = grads[i].flat();
      auto m = m_.segment(at, params[i].size());
      auto v = v_.segment(at, params[i].size());
      m = cfg_.beta1 * m + (1.0 - cfg_.beta1) * g;
      v = cfg_.beta2 * v + (1.0 - cfg_.beta2) * g.cwiseProduct(g);
      theta.array() -=
          cfg_.lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + cfg_.epsilon);
      at += params[i].size();
    }
  }

 private:
  AdamConfig cfg_;
  Vector m_, v_;
  long step_ = 0;
};

}  // namespace xsess
