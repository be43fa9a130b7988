#pragma once

#include "akh/types.hpp"

namespace akh::linalg {

struct KernelResult {
  CMat basis;            // orthonormal columns spanning the numerical kernel
  double threshold = 0;  // singular values below this count as zero
  double sigma_max = 0;
  double gap = 0;        // smallest singular value kept above threshold (0 if none)
};

/// Numerical kernel of a (possibly rectangular) matrix: singular values below
/// tol * max(sigma_max, 1).
KernelResult kernel(const CMat& a, double tol);

/// Orthonormalize the columns of v with respect to <x, y> = y^H G x, dropping
/// dependent columns.
CMat orthonormalize(const CMat& v, const CMat& g, double tol = 1e-12);

/// Compensated (Neumaier) sum.
class KahanSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace akh::linalg
