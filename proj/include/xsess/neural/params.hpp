#pragma once

#include <string>
#include <vector>

#include "xsess/types.hpp"

namespace xsess {

// A named view over one parameter tensor's storage. Matrices and vectors
// both expose contiguous column-major storage, so a raw view covers both.
struct ParamRef {
  std::string name;
  Scalar* data = nullptr;
  Index rows = 0;
  Index cols = 0;

  Index size() const { return rows * cols; }
  Eigen::Map<Matrix> map() const { return {data, rows, cols}; }
  Eigen::Map<Vector> flat() const { return {data, size()}; }
};

using ParamRefs = std::vector<ParamRef>;

inline ParamRef param_ref(std::string name, Matrix& m) {
  return {std::move(name), m.data(), m.rows(), m.cols()};
}
inline ParamRef param_ref(std::string name, Vector& v) {
  return {std::move(name), v.data(), v.size(), 1};
}

inline Index param_count(const ParamRefs& refs) {
  Index n = 0;
  for (const auto& r : refs) n += r.size();
  return n;
}

inline Vector flatten(const ParamRefs& refs) {
  Vector out(param_count(refs));
  Index at = 0;
  for (const auto& r : refs) {
    out.segment(at, r.size()) = r.flat();
    at += r.size();
  }
  return out;
}

inline void unflatten(const Vector& theta, const ParamRefs& refs) {
  Index at = 0;
  for (const auto& r : refs) {
    r.flat() = theta.segment(at, r.size());
    at += r.size();
  }
}

inline void set_zero(const ParamRefs& refs) {
  for (const auto& r : refs) r.flat().setZero();
}

// First parameter whose gradient is non-finite, for error messages.
inline std::string first_nonfinite(const ParamRefs& refs) {
  for (const auto& r : refs) {
    if (!r.flat().allFinite()) return r.name;
  }
  return {};
}

}  // namespace xsess
