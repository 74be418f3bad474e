#pragma once

#include <array>

#include "xsess/types.hpp"

namespace xsess {

// Predicted probabilities are clamped to [1e-7, 1 - 1e-7] before the logs.
constexpr double kProbClamp = 1e-7;

// Multi-label binary cross entropy summed over the catalog.
double bce_multilabel_loss(const Vector& p_hat, const Vector& p);
// dL/dp_hat of the clamped loss (zero where the clamp is active).
Vector bce_multilabel_grad(const Vector& p_hat, const Vector& p);

// Categorical cross entropy over consecutive logit blocks, one softmax per
// block; `targets` holds the true class inside each block.
double cce_blocks_loss(const Vector& logits, const std::vector<Index>& block_sizes,
                       const std::vector<int>& targets);
// dL/dlogits = per block: softmax(block) - onehot(target).
Vector cce_blocks_grad(const Vector& logits, const std::vector<Index>& block_sizes,
                       const std::vector<int>& targets);

}  // namespace xsess
