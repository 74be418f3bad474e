#include "xsess/models/nets.hpp"

#include "xsess/neural/activations.hpp"
#include "xsess/neural/losses.hpp"

namespace xsess {

// ---- SequenceNet ----

SequenceNet SequenceNet::init(Index hidden, Index input, Index k, Rng& rng) {
  SequenceNet n;
  n.gru = GruParams::glorot(hidden, input, rng);
  n.fc = DenseParams::glorot(hidden, hidden, Act::relu, rng);
  n.out = DenseParams::glorot(k, hidden, Act::identity, rng);
  return n;
}

SequenceNet SequenceNet::zeros_like(const SequenceNet& o) {
  SequenceNet n;
  n.gru = GruParams::zeros(o.gru.hidden(), o.gru.input());
  n.fc = DenseParams::zeros(o.fc.W.rows(), o.fc.W.cols(), Act::relu);
  n.out = DenseParams::zeros(o.out.W.rows(), o.out.W.cols(), Act::identity);
  return n;
}

ParamRefs SequenceNet::refs() {
  ParamRefs r = gru.refs("gru");
  for (auto& x : fc.refs("fc")) r.push_back(x);
  for (auto& x : out.refs("out")) r.push_back(x);
  return r;
}

Vector SequenceNet::predict(const std::vector<Vector>& inputs) const {
  if (inputs.empty()) fail("SequenceNet: empty input sequence");
  Vector h = Vector::Zero(gru.hidden());
  for (const auto& s : inputs) h = gru_step(gru, s, h);
  return sigmoid(dense_forward(out, dense_forward(fc, h)));
}

double SequenceNet::loss(const std::vector<Vector>& inputs, const Vector& target,
                         const Vector& mask) const {
  if (inputs.empty()) fail("SequenceNet: empty input sequence");
  Vector h = Vector::Zero(gru.hidden());
  for (const auto& s : inputs) h = gru_step(gru, s, h);
  const Vector p_hat = sigmoid(dense_forward(out, dense_forward(fc, h.cwiseProduct(mask))));
  return bce_multilabel_loss(p_hat, target);
}

double SequenceNet::loss_backward(const std::vector<Vector>& inputs, const Vector& target,
                                  const Vector& mask, SequenceNet& grad) const {
  const auto caches = gru_run(gru, inputs);
  const Vector hd = caches.back().h.cwiseProduct(mask);
  const DenseCache fc_c = dense_forward_cached(fc, hd);
  const DenseCache out_c = dense_forward_cached(out, fc_c.y);
  const Vector p_hat = sigmoid(out_c.y);
  const double loss = bce_multilabel_loss(p_hat, target);

  const Vector dp = bce_multilabel_grad(p_hat, target);
  const Vector dlogits = dp.cwiseProduct(dsigmoid_from_y(p_hat));
  const Vector dfc = dense_backward(out, out_c, dlogits, grad.out);
  const Vector dhd = dense_backward(fc, fc_c, dfc, grad.fc);

  std::vector<Vector> dh_steps(caches.size());
  dh_steps.back() = dhd.cwiseProduct(mask);
  gru_backward(gru, caches, dh_steps, grad.gru);
  return loss;
}

// ---- HybridNet ----

HybridNet HybridNet::init(Index hidden, Index input, Index demo_dim, Index demo_units, Index k,
                          Rng& rng) {
  HybridNet n;
  n.gru = GruParams::glorot(hidden, input, rng);
  n.demo = DenseParams::glorot(demo_units, demo_dim, Act::relu, rng);
  n.out = DenseParams::glorot(k, hidden + demo_units, Act::identity, rng);
  return n;
}

HybridNet HybridNet::zeros_like(const HybridNet& o) {
  HybridNet n;
  n.gru = GruParams::zeros(o.gru.hidden(), o.gru.input());
  n.demo = DenseParams::zeros(o.demo.W.rows(), o.demo.W.cols(), Act::relu);
  n.out = DenseParams::zeros(o.out.W.rows(), o.out.W.cols(), Act::identity);
  return n;
}

ParamRefs HybridNet::refs() {
  ParamRefs r = gru.refs("gru");
  for (auto& x : demo.refs("demo")) r.push_back(x);
  for (auto& x : out.refs("out")) r.push_back(x);
  return r;
}

Vector HybridNet::predict(const std::vector<Vector>& inputs, const Vector& x) const {
  Vector h = Vector::Zero(gru.hidden());
  for (const auto& s : inputs) h = gru_step(gru, s, h);
  const Vector d = dense_forward(demo, x);
  Vector u(h.size() + d.size());
  u << h, d;
  return sigmoid(dense_forward(out, u));
}

double HybridNet::loss(const std::vector<Vector>& inputs, const Vector& x, const Vector& target,
                       const Vector& mask_h, const Vector& mask_d) const {
  Vector h = Vector::Zero(gru.hidden());
  for (const auto& s : inputs) h = gru_step(gru, s, h);
  const Vector d = dense_forward(demo, x);
  Vector u(h.size() + d.size());
  u << h.cwiseProduct(mask_h), d.cwiseProduct(mask_d);
  return bce_multilabel_loss(sigmoid(dense_forward(out, u)), target);
}

double HybridNet::loss_backward(const std::vector<Vector>& inputs, const Vector& x,
                                const Vector& target, const Vector& mask_h, const Vector& mask_d,
                                HybridNet& grad) const {
  const auto caches = gru_run(gru, inputs);
  const DenseCache demo_c = dense_forward_cached(demo, x);
  Vector u(gru.hidden() + demo_c.y.size());
  u << caches.back().h.cwiseProduct(mask_h), demo_c.y.cwiseProduct(mask_d);
  const DenseCache out_c = dense_forward_cached(out, u);
  const Vector p_hat = sigmoid(out_c.y);
  const double loss = bce_multilabel_loss(p_hat, target);

  const Vector dlogits =
      bce_multilabel_grad(p_hat, target).cwiseProduct(dsigmoid_from_y(p_hat));
  const Vector du = dense_backward(out, out_c, dlogits, grad.out);
  const Vector dh = du.head(gru.hidden()).cwiseProduct(mask_h);
  const Vector dd = du.tail(demo_c.y.size()).cwiseProduct(mask_d);
  dense_backward(demo, demo_c, dd, grad.demo);

  std::vector<Vector> dh_steps(caches.size());
  dh_steps.back() = dh;
  gru_backward(gru, caches, dh_steps, grad.gru);
  return loss;
}

// ---- FeedForwardNet ----

FeedForwardNet FeedForwardNet::init(Index units, Index input, Index k, Rng& rng) {
  FeedForwardNet n;
  n.l1 = DenseParams::glorot(units, input, Act::relu, rng);
  n.l2 = DenseParams::glorot(units, units, Act::relu, rng);
  n.out = DenseParams::glorot(k, units, Act::identity, rng);
  return n;
}

FeedForwardNet FeedForwardNet::zeros_like(const FeedForwardNet& o) {
  FeedForwardNet n;
  n.l1 = DenseParams::zeros(o.l1.W.rows(), o.l1.W.cols(), Act::relu);
  n.l2 = DenseParams::zeros(o.l2.W.rows(), o.l2.W.cols(), Act::relu);
  n.out = DenseParams::zeros(o.out.W.rows(), o.out.W.cols(), Act::identity);
  return n;
}

ParamRefs FeedForwardNet::refs() {
  ParamRefs r = l1.refs("l1");
  for (auto& x : l2.refs("l2")) r.push_back(x);
  for (auto& x : out.refs("out")) r.push_back(x);
  return r;
}

Vector FeedForwardNet::predict(const Vector& x) const {
  return sigmoid(dense_forward(out, dense_forward(l2, dense_forward(l1, x))));
}

double FeedForwardNet::loss(const Vector& x, const Vector& target, const Vector& mask) const {
  const Vector h1 = dense_forward(l1, x).cwiseProduct(mask);
  return bce_multilabel_loss(sigmoid(dense_forward(out, dense_forward(l2, h1))), target);
}

double FeedForwardNet::loss_backward(const Vector& x, const Vector& target, const Vector& mask,
                                     FeedForwardNet& grad) const {
  const DenseCache c1 = dense_forward_cached(l1, x);
  const Vector h1 = c1.y.cwiseProduct(mask);
  const DenseCache c2 = dense_forward_cached(l2, h1);
  const DenseCache c3 = dense_forward_cached(out, c2.y);
  const Vector p_hat = sigmoid(c3.y);
  const double loss = bce_multilabel_loss(p_hat, target);

  const Vector dlogits =
      bce_multilabel_grad(p_hat, target).cwiseProduct(dsigmoid_from_y(p_hat));
  const Vector dh2 = dense_backward(out, c3, dlogits, grad.out);
  const Vector dh1 = dense_backward(l2, c2, dh2, grad.l2);
  dense_backward(l1, c1, dh1.cwiseProduct(mask), grad.l1);
  return loss;
}

// ---- NextActionNet ----

NextActionNet NextActionNet::init(Index hidden, Index vocab, Rng& rng) {
  NextActionNet n;
  n.gru = GruParams::glorot(hidden, vocab, rng);
  n.fc = DenseParams::glorot(hidden, hidden, Act::relu, rng);
  n.out = DenseParams::glorot(vocab, hidden, Act::identity, rng);
  return n;
}

NextActionNet NextActionNet::zeros_like(const NextActionNet& o) {
  NextActionNet n;
  n.gru = GruParams::zeros(o.gru.hidden(), o.gru.input());
  n.fc = DenseParams::zeros(o.fc.W.rows(), o.fc.W.cols(), Act::relu);
  n.out = DenseParams::zeros(o.out.W.rows(), o.out.W.cols(), Act::identity);
  return n;
}

ParamRefs NextActionNet::refs() {
  ParamRefs r = gru.refs("gru");
  for (auto& x : fc.refs("fc")) r.push_back(x);
  for (auto& x : out.refs("out")) r.push_back(x);
  return r;
}

namespace {
Vector onehot(Index n, int k) {
  Vector v = Vector::Zero(n);
  v[k] = 1.0;
  return v;
}
}  // namespace

Vector NextActionNet::predict_last(const std::vector<int>& tokens) const {
  if (tokens.empty()) fail("NextActionNet: empty token sequence");
  const Index v = gru.input();
  Vector h = Vector::Zero(gru.hidden());
  for (int t : tokens) h = gru_step(gru, onehot(v, t), h);
  return softmax(dense_forward(out, dense_forward(fc, h)));
}

double NextActionNet::loss(const std::vector<int>& tokens, const std::vector<Vector>& masks) const {
  if (tokens.size() < 2) fail("NextActionNet: need at least 2 tokens to predict the next one");
  const Index v = gru.input();
  const std::vector<Index> block{v};
  Vector h = Vector::Zero(gru.hidden());
  double loss = 0.0;
  for (std::size_t t = 0; t + 1 < tokens.size(); ++t) {
    h = gru_step(gru, onehot(v, tokens[t]), h);
    Vector hd = masks.empty() ? h : h.cwiseProduct(masks[t]);
    loss += cce_blocks_loss(dense_forward(out, dense_forward(fc, hd)), block, {tokens[t + 1]});
  }
  return loss;
}

double NextActionNet::loss_backward(const std::vector<int>& tokens,
                                    const std::vector<Vector>& masks, NextActionNet& grad) const {
  if (tokens.size() < 2) fail("NextActionNet: need at least 2 tokens to predict the next one");
  const Index v = gru.input();
  const std::vector<Index> block{v};
  std::vector<Vector> inputs;
  inputs.reserve(tokens.size() - 1);
  for (std::size_t t = 0; t + 1 < tokens.size(); ++t) inputs.push_back(onehot(v, tokens[t]));
  const auto caches = gru_run(gru, inputs);

  double loss = 0.0;
  std::vector<Vector> dh_steps(caches.size());
  std::vector<DenseCache> fc_caches(caches.size());
  std::vector<DenseCache> out_caches(caches.size());
  for (std::size_t t = 0; t < caches.size(); ++t) {
    const Vector hd = masks.empty() ? caches[t].h : caches[t].h.cwiseProduct(masks[t]);
    fc_caches[t] = dense_forward_cached(fc, hd);
    out_caches[t] = dense_forward_cached(out, fc_caches[t].y);
    loss += cce_blocks_loss(out_caches[t].y, block, {tokens[t + 1]});
    const Vector dlogits = cce_blocks_grad(out_caches[t].y, block, {tokens[t + 1]});
    const Vector dfc = dense_backward(out, out_caches[t], dlogits, grad.out);
    Vector dhd = dense_backward(fc, fc_caches[t], dfc, grad.fc);
    dh_steps[t] = masks.empty() ? dhd : dhd.cwiseProduct(masks[t]);
  }
  gru_backward(gru, caches, dh_steps, grad.gru);
  return loss;
}

// ---- SessionAutoencoder ----

SessionAutoencoder SessionAutoencoder::init(Index units, const std::vector<Index>& blocks,
                                            Rng& rng) {
  Index dim = 0;
  for (Index b : blocks) dim += b;
  SessionAutoencoder n;
  n.enc = GruParams::glorot(units, dim, rng);
  n.dec = GruParams::glorot(units, units, rng);
  n.recon = DenseParams::glorot(dim, units, Act::identity, rng);
  n.block_sizes = blocks;
  return n;
}

SessionAutoencoder SessionAutoencoder::zeros_like(const SessionAutoencoder& o) {
  SessionAutoencoder n;
  n.enc = GruParams::zeros(o.enc.hidden(), o.enc.input());
  n.dec = GruParams::zeros(o.dec.hidden(), o.dec.input());
  n.recon = DenseParams::zeros(o.recon.W.rows(), o.recon.W.cols(), Act::identity);
  n.block_sizes = o.block_sizes;
  return n;
}

ParamRefs SessionAutoencoder::refs() {
  ParamRefs r = enc.refs("enc");
  for (auto& x : dec.refs("dec")) r.push_back(x);
  for (auto& x : recon.refs("recon")) r.push_back(x);
  return r;
}

Vector SessionAutoencoder::encode(const std::vector<Vector>& actions) const {
  if (actions.empty()) fail("SessionAutoencoder: empty session");
  Vector h = Vector::Zero(enc.hidden());
  for (const auto& a : actions) h = gru_step(enc, a, h);
  return h;
}

std::vector<Vector> SessionAutoencoder::reconstruct(const std::vector<Vector>& actions) const {
  const Vector code = encode(actions);
  std::vector<Vector> logits;
  logits.reserve(actions.size());
  Vector h = Vector::Zero(dec.hidden());
  for (std::size_t t = 0; t < actions.size(); ++t) {
    h = gru_step(dec, code, h);
    logits.push_back(dense_forward(recon, h));
  }
  return logits;
}

double SessionAutoencoder::loss(const std::vector<Vector>& actions,
                                const std::vector<std::array<int, 3>>& labels) const {
  const auto logits = reconstruct(actions);
  double loss = 0.0;
  for (std::size_t t = 0; t < logits.size(); ++t) {
    loss += cce_blocks_loss(logits[t], block_sizes,
                            {labels[t][0], labels[t][1], labels[t][2]});
  }
  return loss;
}

double SessionAutoencoder::loss_backward(const std::vector<Vector>& actions,
                                         const std::vector<std::array<int, 3>>& labels,
                                         SessionAutoencoder& grad) const {
  if (actions.size() != labels.size()) fail("SessionAutoencoder: actions/labels mismatch");
  // Encoder pass.
  const auto enc_caches = gru_run(enc, actions);
  const Vector code = enc_caches.back().h;
  // Decoder pass feeds the encoding at every step.
  const std::vector<Vector> dec_inputs(actions.size(), code);
  const auto dec_caches = gru_run(dec, dec_inputs);

  double loss = 0.0;
  std::vector<Vector> dh_steps(dec_caches.size());
  for (std::size_t t = 0; t < dec_caches.size(); ++t) {
    const DenseCache rc = dense_forward_cached(recon, dec_caches[t].h);
    const std::vector<int> tgt{labels[t][0], labels[t][1], labels[t][2]};
    loss += cce_blocks_loss(rc.y, block_sizes, tgt);
    dh_steps[t] = dense_backward(recon, rc, cce_blocks_grad(rc.y, block_sizes, tgt), grad.recon);
  }
  const auto dcode_steps = gru_backward(dec, dec_caches, dh_steps, grad.dec);

  // The encoding feeds every decoder step; its gradients add up.
  Vector dcode = Vector::Zero(code.size());
  for (const auto& d : dcode_steps) dcode += d;
  std::vector<Vector> enc_dh(enc_caches.size());
  enc_dh.back() = dcode;
  gru_backward(enc, enc_caches, enc_dh, grad.enc);
  return loss;
}

}  // namespace xsess
