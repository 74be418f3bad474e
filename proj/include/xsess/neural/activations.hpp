#pragma once

#include <cmath>

#include "xsess/types.hpp"

namespace xsess {

inline Vector sigmoid(const Vector& x) {
  return (1.0 / (1.0 + (-x.array()).exp())).matrix();
}

inline Vector tanh_vec(const Vector& x) { return x.array().tanh().matrix(); }

inline Vector relu(const Vector& x) { return x.cwiseMax(0.0); }

inline Vector softmax(const Vector& x) {
  const double m = x.maxCoeff();
  Vector e = (x.array() - m).exp().matrix();
  return e / e.sum();
}

// Derivatives expressed through the activation value.
inline Vector dsigmoid_from_y(const Vector& y) {
  return (y.array() * (1.0 - y.array())).matrix();
}
inline Vector dtanh_from_y(const Vector& y) { return (1.0 - y.array().square()).matrix(); }
inline Vector drelu_from_x(const Vector& x) {
  return (x.array() > 0.0).cast<Scalar>().matrix();
}

}  // namespace xsess
