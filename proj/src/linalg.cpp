#include "akh/linalg.hpp"

#include <algorithm>

namespace akh::linalg {

KernelResult kernel(const CMat& a, double tol) {
  KernelResult out;
  const Eigen::Index cols = a.cols();
  if (cols == 0) {
    out.basis = CMat(0, 0);
    return out;
  }
  if (a.rows() == 0) {
    out.basis = CMat::Identity(cols, cols);
    return out;
  }
  // square up so that V is always cols x cols
  CMat work = a;
  if (a.rows() < cols) {
    work = CMat::Zero(cols, cols);
    work.topRows(a.rows()) = a;
  }
  Eigen::BDCSVD<CMat> svd(work, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  out.sigma_max = s.size() ? s(0) : 0.0;
  out.threshold = tol * std::max(out.sigma_max, 1.0);
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) > out.threshold) ++rank;
  out.gap = rank > 0 ? s(rank - 1) : 0.0;
  out.basis = svd.matrixV().rightCols(cols - rank);
  return out;
}

CMat orthonormalize(const CMat& v, const CMat& g, double tol) {
  CMat out(v.rows(), 0);
  for (Eigen::Index c = 0; c < v.cols(); ++c) {
    CVec x = v.col(c);
    double n0 = std::sqrt(std::abs(x.dot(g * x)));
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index k = 0; k < out.cols(); ++k) x -= out.col(k).dot(g * x) * out.col(k);
    double nrm = std::sqrt(std::abs(x.dot(g * x)));
    if (nrm <= tol * std::max(n0, 1.0)) continue;
    out.conservativeResize(Eigen::NoChange, out.cols() + 1);
    out.col(out.cols() - 1) = x / nrm;
  }
  return out;
}

}  // namespace akh::linalg
