#include "xsess/neural/losses.hpp"

#include <cmath>

namespace xsess {

double bce_multilabel_loss(const Vector& p_hat, const Vector& p) {
  if (p_hat.size() != p.size()) fail("bce_multilabel_loss: length mismatch");
  double loss = 0.0;
  for (Index k = 0; k < p.size(); ++k) {
    const double q = std::clamp(p_hat[k], kProbClamp, 1.0 - kProbClamp);
    loss -= p[k] * std::log(q) + (1.0 - p[k]) * std::log(1.0 - q);
  }
  return loss;
}

Vector bce_multilabel_grad(const Vector& p_hat, const Vector& p) {
  if (p_hat.size() != p.size()) fail("bce_multilabel_grad: length mismatch");
  Vector g = Vector::Zero(p.size());
  for (Index k = 0; k < p.size(); ++k) {
    if (p_hat[k] <= kProbClamp || p_hat[k] >= 1.0 - kProbClamp) continue;  // clamped: flat
    g[k] = (p_hat[k] - p[k]) / (p_hat[k] * (1.0 - p_hat[k]));
  }
  return g;
}

namespace {

void check_blocks(const Vector& logits, const std::vector<Index>& block_sizes,
                  const std::vector<int>& targets) {
  if (block_sizes.size() != targets.size()) fail("cce_blocks: block/target count mismatch");
  Index total = 0;
  for (std::size_t i = 0; i < block_sizes.size(); ++i) {
    if (targets[i] < 0 || targets[i] >= block_sizes[i]) {
      fail("cce_blocks: target index out of range in block " + std::to_string(i));
    }
    total += block_sizes[i];
  }
  if (total != logits.size()) fail("cce_blocks: logits length does not match blocks");
}

}  // namespace

double cce_blocks_loss(const Vector& logits, const std::vector<Index>& block_sizes,
                       const std::vector<int>& targets) {
  check_blocks(logits, block_sizes, targets);
  double loss = 0.0;
  Index at = 0;
  for (std::size_t i = 0; i < block_sizes.size(); ++i) {
    const auto block = logits.segment(at, block_sizes[i]);
    const double m = block.maxCoeff();
    const double lse = m + std::log((block.array() - m).exp().sum());
    loss += lse - block[targets[i]];
    at += block_sizes[i];
  }
  return loss;
}

Vector cce_blocks_grad(const Vector& logits, const std::vector<Index>& block_sizes,
                       const std::vector<int>& targets) {
  check_blocks(logits, block_sizes, targets);
  Vector g(logits.size());
  Index at = 0;
  for (std::size_t i = 0; i < block_sizes.size(); ++i) {
    const auto block = logits.segment(at, block_sizes[i]);
    const double m = block.maxCoeff();
    Vector e = (block.array() - m).exp().matrix();
    g.segment(at, block_sizes[i]) = e / e.sum();
    g[at + targets[i]] -= 1.0;
    at += block_sizes[i];
  }
  return g;
}

}  // namespace xsess
