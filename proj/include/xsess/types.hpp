#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace xsess {

using Scalar = double;
using Index = Eigen::Index;

template <class T = Scalar>
using MatrixT = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <class T = Scalar>
using VectorT = Eigen::Matrix<T, Eigen::Dynamic, 1>;

using Matrix = MatrixT<>;
using Vector = VectorT<>;
using IntVector = VectorT<int>;

// Timestamps are seconds since the Unix epoch.
using Timestamp = std::int64_t;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

[[noreturn]] inline void fail(const std::string& msg) { throw Error(msg); }

}  // namespace xsess
