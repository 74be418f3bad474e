#pragma once

#include <vector>

#include "xsess/neural/dense.hpp"
#include "xsess/neural/gru.hpp"

namespace xsess {

// GRU over a sequence, then dense(ReLU), then a per-item sigmoid head.
// The caller supplies the dropout mask applied to the final hidden state
// (all-ones for inference), which keeps every loss evaluation deterministic.
struct SequenceNet {
  GruParams gru;
  DenseParams fc;   // relu, hidden -> hidden
  DenseParams out;  // identity, hidden -> K (sigmoid applied on top)

  static SequenceNet init(Index hidden, Index input, Index k, Rng& rng);
  static SequenceNet zeros_like(const SequenceNet& o);
  ParamRefs refs();

  Vector predict(const std::vector<Vector>& inputs) const;  // probabilities in (0,1)
  double loss(const std::vector<Vector>& inputs, const Vector& target, const Vector& mask) const;
  double loss_backward(const std::vector<Vector>& inputs, const Vector& target,
                       const Vector& mask, SequenceNet& grad) const;
};

// Same GRU trunk, but the final hidden state is concatenated with a dense
// ReLU transform of the demographics vector before the output layer.
struct HybridNet {
  GruParams gru;
  DenseParams demo;  // relu, demo_dim -> demo_units
  DenseParams out;   // identity, hidden + demo_units -> K

  static HybridNet init(Index hidden, Index input, Index demo_dim, Index demo_units, Index k,
                        Rng& rng);
  static HybridNet zeros_like(const HybridNet& o);
  ParamRefs refs();

  Vector predict(const std::vector<Vector>& inputs, const Vector& x) const;
  double loss(const std::vector<Vector>& inputs, const Vector& x, const Vector& target,
              const Vector& mask_h, const Vector& mask_d) const;
  double loss_backward(const std::vector<Vector>& inputs, const Vector& x, const Vector& target,
                       const Vector& mask_h, const Vector& mask_d, HybridNet& grad) const;
};

// Two dense ReLU layers and a per-item sigmoid head over a flat feature
// vector (the demographic baseline).
struct FeedForwardNet {
  DenseParams l1, l2;  // relu
  DenseParams out;     // identity -> sigmoid

  static FeedForwardNet init(Index units, Index input, Index k, Rng& rng);
  static FeedForwardNet zeros_like(const FeedForwardNet& o);
  ParamRefs refs();

  Vector predict(const Vector& x) const;
  double loss(const Vector& x, const Vector& target, const Vector& mask) const;
  double loss_backward(const Vector& x, const Vector& target, const Vector& mask,
                       FeedForwardNet& grad) const;
};

// Next-step prediction over a token sequence: at every step t the softmax
// head scores token t+1. Scoring returns the final step's distribution.
struct NextActionNet {
  GruParams gru;
  DenseParams fc;   // relu
  DenseParams out;  // identity -> per-step softmax

  static NextActionNet init(Index hidden, Index vocab, Rng& rng);
  static NextActionNet zeros_like(const NextActionNet& o);
  ParamRefs refs();

  Vector predict_last(const std::vector<int>& tokens) const;
  // masks[t] is the dropout mask for step t's hidden state; pass {} to skip.
  double loss(const std::vector<int>& tokens, const std::vector<Vector>& masks) const;
  double loss_backward(const std::vector<int>& tokens, const std::vector<Vector>& masks,
                       NextActionNet& grad) const;
};

// Sequence-to-sequence session autoencoder. The encoder GRU reads the
// binarized actions; the decoder GRU receives the encoding at every step
// and reconstructs each action's three label blocks with softmax heads.
struct SessionAutoencoder {
  GruParams enc;      // units x action_dim
  GruParams dec;      // units x units (input is the encoding)
  DenseParams recon;  // identity, units -> action_dim

  std::vector<Index> block_sizes;  // [sections, objects, action_types]

  static SessionAutoencoder init(Index units, const std::vector<Index>& blocks, Rng& rng);
  static SessionAutoencoder zeros_like(const SessionAutoencoder& o);
  ParamRefs refs();

  Vector encode(const std::vector<Vector>& actions) const;  // final encoder state
  // Per-step reconstruction logits, for accuracy checks.
  std::vector<Vector> reconstruct(const std::vector<Vector>& actions) const;
  double loss(const std::vector<Vector>& actions, const std::vector<std::array<int, 3>>& labels) const;
  double loss_backward(const std::vector<Vector>& actions,
                       const std::vector<std::array<int, 3>>& labels,
                       SessionAutoencoder& grad) const;
};

}  // namespace xsess
