#include "xsess/neural/dense.hpp"

#include <cmath>

#include "xsess/neural/activations.hpp"

namespace xsess {

Act act_from_string(const std::string& name) {
  if (name == "identity") return Act::identity;
  if (name == "relu") return Act::relu;
  if (name == "sigmoid") return Act::sigmoid;
  if (name == "tanh") return Act::tanh;
  if (name == "softmax") return Act::softmax;
  fail("unknown activation '" + name + "'");
}

std::string act_to_string(Act a) {
  switch (a) {
    case Act::identity: return "identity";
    case Act::relu: return "relu";
    case Act::sigmoid: return "sigmoid";
    case Act::tanh: return "tanh";
    case Act::softmax: return "softmax";
  }
  fail("bad activation tag");
}

Matrix glorot_uniform(Index out, Index in, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
  Matrix W(out, in);
  for (Index j = 0; j < in; ++j) {
    for (Index i = 0; i < out; ++i) W(i, j) = rng.uniform(-limit, limit);
  }
  return W;
}

DenseParams DenseParams::glorot(Index out, Index in, Act act, Rng& rng) {
  return {glorot_uniform(out, in, rng), Vector::Zero(out), act};
}

DenseParams DenseParams::zeros(Index out, Index in, Act act) {
  return {Matrix::Zero(out, in), Vector::Zero(out), act};
}

ParamRefs DenseParams::refs(const std::string& prefix) {
  return {param_ref(prefix + ".W", W), param_ref(prefix + ".b", b)};
}

void DenseParams::set_zero() {
  W.setZero();
  b.setZero();
}

namespace {

Vector apply_act(Act act, const Vector& pre) {
  switch (act) {
    case Act::identity: return pre;
    case Act::relu: return relu(pre);
    case Act::sigmoid: return sigmoid(pre);
    case Act::tanh: return tanh_vec(pre);
    case Act::softmax: return softmax(pre);
  }
  fail("bad activation tag");
}

}  // namespace

Vector dense_forward(const DenseParams& p, const Vector& x) {
  if (x.size() != p.W.cols()) {
    fail("dense_forward: input size " + std::to_string(x.size()) + " does not match weights (" +
         std::to_string(p.W.rows()) + "x" + std::to_string(p.W.cols()) + ")");
  }
  return apply_act(p.act, p.W * x + p.b);
}

DenseCache dense_forward_cached(const DenseParams& p, const Vector& x) {
  DenseCache c;
  c.x = x;
  if (x.size() != p.W.cols()) {
    fail("dense_forward: input size " + std::to_string(x.size()) + " does not match weights (" +
         std::to_string(p.W.rows()) + "x" + std::to_string(p.W.cols()) + ")");
  }
  c.pre = p.W * x + p.b;
  c.y = apply_act(p.act, c.pre);
  return c;
}

Vector dense_backward(const DenseParams& p, const DenseCache& cache, const Vector& dy,
                      DenseParams& grad) {
  Vector dpre;
  switch (p.act) {
    case Act::identity:
      dpre = dy;
      break;
    case Act::relu:
      dpre = dy.cwiseProduct(drelu_from_x(cache.pre));
      break;
    case Act::sigmoid:
      dpre = dy.cwiseProduct(dsigmoid_from_y(cache.y));
      break;
    case Act::tanh:
      dpre = dy.cwiseProduct(dtanh_from_y(cache.y));
      break;
    case Act::softmax: {
      // Full Jacobian: dpre = (diag(y) - y y^T) dy.
      const double dot = cache.y.dot(dy);
      dpre = cache.y.cwiseProduct(dy) - cache.y * dot;
      break;
    }
  }
  grad.W.noalias() += dpre * cache.x.transpose();
  grad.b += dpre;
  return p.W.transpose() * dpre;
}

}  // namespace xsess
