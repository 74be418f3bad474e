#pragma once

#include <string>
#include <vector>

#include "xsess/neural/params.hpp"
#include "xsess/rng.hpp"

namespace xsess {

// Update/reset/candidate gate weights of a single GRU layer. Biases are
// zero-initialized so the bias-free update rule is the starting point.
struct GruParams {
  Matrix Wz, Uz;  // update gate: hidden x input, hidden x hidden
  Matrix Wr, Ur;  // reset gate
  Matrix Wh, Uh;  // candidate
  Vector bz, br, bh;

  Index hidden() const { return Wz.rows(); }
  Index input() const { return Wz.cols(); }

  static GruParams glorot(Index hidden, Index input, Rng& rng);
  static GruParams zeros(Index hidden, Index input);
  ParamRefs refs(const std::string& prefix);
  void set_zero();
};

// One time step's cached activations, enough to run the step backwards.
struct GruStepCache {
  Vector s;       // input
  Vector h_prev;
  Vector z, r, hhat, h;
};

//   z = sigmoid(Wz s + Uz h_prev + bz)
//   r = sigmoid(Wr s + Ur h_prev + br)
//   hhat = tanh(Wh s + Uh (r .* h_prev) + bh)
//   h = (1 - z) .* h_prev + z .* hhat
Vector gru_step(const GruParams& p, const Vector& s, const Vector& h_prev);
GruStepCache gru_step_cached(const GruParams& p, const Vector& s, const Vector& h_prev);

// Accumulates parameter gradients into `grad`; returns dL/dh_prev and dL/ds.
struct GruStepGrads {
  Vector dh_prev;
  Vector ds;
};
GruStepGrads gru_step_backward(const GruParams& p, const GruStepCache& c, const Vector& dh,
                               GruParams& grad);

// Runs the GRU over a sequence from a zero initial state, returning all
// step caches (last cache holds the final hidden state).
std::vector<GruStepCache> gru_run(const GruParams& p, const std::vector<Vector>& inputs);

// Backpropagation through time over `caches`. `dh_steps[t]` is the loss
// gradient injected at step t's hidden state (empty vectors allowed for
// "no direct loss at this step"). Returns dL/ds per step.
std::vector<Vector> gru_backward(const GruParams& p, const std::vector<GruStepCache>& caches,
                                 const std::vector<Vector>& dh_steps, GruParams& grad);

}  // namespace xsess
