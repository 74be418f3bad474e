#pragma once

#include "xsess/rng.hpp"
#include "xsess/types.hpp"

namespace xsess {

// Inverted-dropout mask: 0 with probability `rate`, else 1/(1-rate).
inline Vector dropout_mask(Index n, double rate, Rng& rng) {
  if (!(rate >= 0.0 && rate < 1.0)) fail("dropout: rate must lie in [0, 1)");
  if (rate == 0.0) return Vector::Ones(n);
  Vector mask(n);
  const double keep = 1.0 / (1.0 - rate);
  for (Index i = 0; i < n; ++i) mask[i] = rng.uniform() < rate ? 0.0 : keep;
  return mask;
}

// Training: drop and rescale; inference: identity.
inline Vector dropout_apply(const Vector& x, double rate, Rng& rng, bool train) {
  if (!(rate >= 0.0 && rate < 1.0)) fail("dropout: rate must lie in [0, 1)");
  if (!train || rate == 0.0) return x;
  return x.cwiseProduct(dropout_mask(x.size(), rate, rng));
}

}  // namespace xsess
