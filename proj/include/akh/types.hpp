#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace akh {

using cd = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using Mask = std::uint32_t;

inline constexpr cd kI{0.0, 1.0};

/// Spectral norm of a dense matrix (largest singular value).
double op_norm(const CMat& m);
double op_norm(const RMat& m);
template <class Derived>
double op_norm(const Eigen::MatrixBase<Derived>& m) {
  return op_norm(typename Derived::PlainObject(m));
}

}  // namespace akh
