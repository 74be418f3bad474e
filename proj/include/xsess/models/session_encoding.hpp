#pragma once

#include <vector>

#include "xsess/core/data.hpp"

namespace xsess {

// Element-wise maximum over the given vectors.
Vector maxpool(const std::vector<Vector>& xs);

// Routes each output gradient entry to the element-wise argmax; ties go to
// the lowest index.
std::vector<Vector> maxpool_backward(const std::vector<Vector>& xs, const Vector& dy);

// Eq.-style session encoding: the element-wise max (i.e. OR) of the
// session's binarized action vectors.
Vector encode_session_maxpool(const Session& s, const Vocabulary& v);

// Binarized action vectors of a session, in order.
std::vector<Vector> binarize_session(const Session& s, const Vocabulary& v);

// All action vectors across a task's sessions, chronological.
std::vector<Vector> binarize_all_actions(const std::vector<Session>& sessions,
                                         const Vocabulary& v);

}  // namespace xsess
