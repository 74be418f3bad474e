#include "xsess/models/session_encoding.hpp"

namespace xsess {

Vector maxpool(const std::vector<Vector>& xs) {
  if (xs.empty()) fail("maxpool: empty input");
  Vector out = xs.front();
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (xs[i].size() != out.size()) fail("maxpool: length mismatch");
    out = out.cwiseMax(xs[i]);
  }
  return out;
}

std::vector<Vector> maxpool_backward(const std::vector<Vector>& xs, const Vector& dy) {
  if (xs.empty()) fail("maxpool_backward: empty input");
  std::vector<Vector> grads(xs.size(), Vector::Zero(xs.front().size()));
  for (Index j = 0; j < dy.size(); ++j) {
    std::size_t arg = 0;
    for (std::size_t i = 1; i < xs.size(); ++i) {
      if (xs[i][j] > xs[arg][j]) arg = i;  // strict: ties keep the lowest index
    }
    grads[arg][j] = dy[j];
  }
  return grads;
}

Vector encode_session_maxpool(const Session& s, const Vocabulary& v) {
  if (s.actions.empty()) fail("encode_session_maxpool: empty session");
  Vector out = Vector::Zero(v.action_dim());
  for (const auto& a : s.actions) {
    out = out.cwiseMax(binarize_action(a, v));
  }
  return out;
}

std::vector<Vector> binarize_session(const Session& s, const Vocabulary& v) {
  std::vector<Vector> xs;
  xs.reserve(s.actions.size());
  for (const auto& a : s.actions) xs.push_back(binarize_action(a, v));
  return xs;
}

std::vector<Vector> binarize_all_actions(const std::vector<Session>& sessions,
                                         const Vocabulary& v) {
  std::vector<Vector> xs;
  for (const auto& s : sessions) {
    for (const auto& a : s.actions) xs.push_back(binarize_action(a, v));
  }
  return xs;
}

}  // namespace xsess
