#pragma once

#include <string>

#include "xsess/neural/params.hpp"
#include "xsess/rng.hpp"

namespace xsess {

enum class Act { identity, relu, sigmoid, tanh, softmax };

Act act_from_string(const std::string& name);
std::string act_to_string(Act a);

struct DenseParams {
  Matrix W;  // out x in
  Vector b;
  Act act = Act::identity;

  static DenseParams glorot(Index out, Index in, Act act, Rng& rng);
  static DenseParams zeros(Index out, Index in, Act act);
  ParamRefs refs(const std::string& prefix);
  void set_zero();
};

struct DenseCache {
  Vector x;    // input
  Vector pre;  // W x + b
  Vector y;    // act(pre)
};

Vector dense_forward(const DenseParams& p, const Vector& x);
DenseCache dense_forward_cached(const DenseParams& p, const Vector& x);

// Accumulates dW/db into `grad` and returns dL/dx.
Vector dense_backward(const DenseParams& p, const DenseCache& cache, const Vector& dy,
                      DenseParams& grad);

// Glorot-uniform fan-in/fan-out initialization for a weight matrix.
Matrix glorot_uniform(Index out, Index in, Rng& rng);

}  // namespace xsess
