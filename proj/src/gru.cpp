#include "xsess/neural/gru.hpp"

#include "xsess/neural/activations.hpp"
#include "xsess/neural/dense.hpp"

namespace xsess {

GruParams GruParams::glorot(Index hidden, Index input, Rng& rng) {
  GruParams p;
  p.Wz = glorot_uniform(hidden, input, rng);
  p.Uz = glorot_uniform(hidden, hidden, rng);
  p.Wr = glorot_uniform(hidden, input, rng);
  p.Ur = glorot_uniform(hidden, hidden, rng);
  p.Wh = glorot_uniform(hidden, input, rng);
  p.Uh = glorot_uniform(hidden, hidden, rng);
  p.bz = Vector::Zero(hidden);
  p.br = Vector::Zero(hidden);
  p.bh = Vector::Zero(hidden);
  return p;
}

GruParams GruParams::zeros(Index hidden, Index input) {
  GruParams p;
  p.Wz = Matrix::Zero(hidden, input);
  p.Uz = Matrix::Zero(hidden, hidden);
  p.Wr = Matrix::Zero(hidden, input);
  p.Ur = Matrix::Zero(hidden, hidden);
  p.Wh = Matrix::Zero(hidden, input);
  p.Uh = Matrix::Zero(hidden, hidden);
  p.bz = Vector::Zero(hidden);
  p.br = Vector::Zero(hidden);
  p.bh = Vector::Zero(hidden);
  return p;
}

ParamRefs GruParams::refs(const std::string& prefix) {
  return {param_ref(prefix + ".Wz", Wz), param_ref(prefix + ".Uz", Uz),
          param_ref(prefix + ".Wr", Wr), param_ref(prefix + ".Ur", Ur),
          param_ref(prefix + ".Wh", Wh), param_ref(prefix + ".Uh", Uh),
          param_ref(prefix + ".bz", bz), param_ref(prefix + ".br", br),
          param_ref(prefix + ".bh", bh)};
}

void GruParams::set_zero() {
  Wz.setZero();
  Uz.setZero();
  Wr.setZero();
  Ur.setZero();
  Wh.setZero();
  Uh.setZero();
  bz.setZero();
  br.setZero();
  bh.setZero();
}

namespace {

void check_dims(const GruParams& p, const Vector& s, const Vector& h_prev) {
  if (s.size() != p.input() || h_prev.size() != p.hidden()) {
    fail("gru_step: dimension mismatch (input " + std::to_string(s.size()) + " vs " +
         std::to_string(p.input()) + ", hidden " + std::to_string(h_prev.size()) + " vs " +
         std::to_string(p.hidden()) + ")");
  }
}

}  // namespace

Vector gru_step(const GruParams& p, const Vector& s, const Vector& h_prev) {
  check_dims(p, s, h_prev);
  const Vector z = sigmoid(p.Wz * s + p.Uz * h_prev + p.bz);
  const Vector r = sigmoid(p.Wr * s + p.Ur * h_prev + p.br);
  const Vector hhat = tanh_vec(p.Wh * s + p.Uh * r.cwiseProduct(h_prev) + p.bh);
  return (1.0 - z.array()).matrix().cwiseProduct(h_prev) + z.cwiseProduct(hhat);
}

GruStepCache gru_step_cached(const GruParams& p, const Vector& s, const Vector& h_prev) {
  check_dims(p, s, h_prev);
  GruStepCache c;
  c.s = s;
  c.h_prev = h_prev;
  c.z = sigmoid(p.Wz * s + p.Uz * h_prev + p.bz);
  c.r = sigmoid(p.Wr * s + p.Ur * h_prev + p.br);
  c.hhat = tanh_vec(p.Wh * s + p.Uh * c.r.cwiseProduct(h_prev) + p.bh);
  c.h = (1.0 - c.z.array()).matrix().cwiseProduct(h_prev) + c.z.cwiseProduct(c.hhat);
  return c;
}

GruStepGrads gru_step_backward(const GruParams& p, const GruStepCache& c, const Vector& dh,
                               GruParams& grad) {
  // h = (1-z) .* h_prev + z .* hhat
  const Vector dz = dh.cwiseProduct(c.hhat - c.h_prev);
  const Vector dhhat = dh.cwiseProduct(c.z);
  Vector dh_prev = dh.cwiseProduct((1.0 - c.z.array()).matrix());

  // hhat = tanh(Wh s + Uh (r .* h_prev) + bh)
  const Vector dpre_h = dhhat.cwiseProduct(dtanh_from_y(c.hhat));
  const Vector rh = c.r.cwiseProduct(c.h_prev);
  grad.Wh.noalias() += dpre_h * c.s.transpose();
  grad.Uh.noalias() += dpre_h * rh.transpose();
  grad.bh += dpre_h;
  const Vector drh = p.Uh.transpose() * dpre_h;
  const Vector dr = drh.cwiseProduct(c.h_prev);
  dh_prev += drh.cwiseProduct(c.r);

  // gates
  const Vector dpre_z = dz.cwiseProduct(dsigmoid_from_y(c.z));
  const Vector dpre_r = dr.cwiseProduct(dsigmoid_from_y(c.r));
  grad.Wz.noalias() += dpre_z * c.s.transpose();
  grad.Uz.noalias() += dpre_z * c.h_prev.transpose();
  grad.bz += dpre_z;
  grad.Wr.noalias() += dpre_r * c.s.transpose();
  grad.Ur.noalias() += dpre_r * c.h_prev.transpose();
  grad.br += dpre_r;
  dh_prev.noalias() += p.Uz.transpose() * dpre_z;
  dh_prev.noalias() += p.Ur.transpose() * dpre_r;

  GruStepGrads out;
  out.ds = p.Wz.transpose() * dpre_z + p.Wr.transpose() * dpre_r + p.Wh.transpose() * dpre_h;
  out.dh_prev = std::move(dh_prev);
  return out;
}

std::vector<GruStepCache> gru_run(const GruParams& p, const std::vector<Vector>& inputs) {
  std::vector<GruStepCache> caches;
  caches.reserve(inputs.size());
  Vector h = Vector::Zero(p.hidden());
  for (const auto& s : inputs) {
    caches.push_back(gru_step_cached(p, s, h));
    h = caches.back().h;
  }
  return caches;
}

std::vector<Vector> gru_backward(const GruParams& p, const std::vector<GruStepCache>& caches,
                                 const std::vector<Vector>& dh_steps, GruParams& grad) {
  std::vector<Vector> ds(caches.size());
  Vector carry = Vector::Zero(p.hidden());
  for (std::size_t t = caches.size(); t-- > 0;) {
    Vector dh = carry;
    if (t < dh_steps.size() && dh_steps[t].size() > 0) dh += dh_steps[t];
    auto g = gru_step_backward(p, caches[t], dh, grad);
    ds[t] = std::move(g.ds);
    carry = std::move(g.dh_prev);
  }
  return ds;
}

}  // namespace xsess
