#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "akh/bigraded_algebra.hpp"

namespace akh::ops {

using algebra::Bidegree;
using algebra::FormSpace;

/// Linear operator on the bigraded algebra of one FormSpace, with total degree
/// and (when homogeneous) its bidegree shift.
class GradedOperator {
 public:
  GradedOperator() = default;
  GradedOperator(std::shared_ptr<const FormSpace> space, CMat m, int degree, std::optional<Bidegree> shift);

  static GradedOperator identity(std::shared_ptr<const FormSpace> space);
  static GradedOperator zero(std::shared_ptr<const FormSpace> space, int degree, std::optional<Bidegree> shift);

  const CMat& matrix() const { return m_; }
  int degree() const { return degree_; }
  std::optional<Bidegree> shift() const { return shift_; }
  const FormSpace& space() const { return *space_; }
  std::shared_ptr<const FormSpace> space_ptr() const { return space_; }

  /// Matrix from block `from` to block `to`.
  CMat block(Bidegree from, Bidegree to) const;
  /// Block from (p,q) to (p,q)+shift; requires a shift. Empty rows when the
  /// target lies outside the range.
  CMat block(int p, int q) const;
  /// Bidegree-homogeneous piece of this operator with the given shift.
  GradedOperator component(Bidegree shift) const;

  CVec apply(const CVec& v) const { return m_ * v; }

  GradedOperator operator+(const GradedOperator& o) const;
  GradedOperator operator-(const GradedOperator& o) const;
  GradedOperator operator*(const GradedOperator& o) const;
  GradedOperator operator*(cd s) const;
  GradedOperator operator-() const { return *this * cd(-1.0); }

 private:
  void check_same_space(const GradedOperator& o, const char* what) const;

  std::shared_ptr<const FormSpace> space_;
  CMat m_;
  int degree_ = 0;
  std::optional<Bidegree> shift_;
};

GradedOperator operator*(cd s, const GradedOperator& a);

/// Adjoint for the pairing <a, b> = b^H G a.
GradedOperator adjoint_of(const GradedOperator& t, const CMat& gram);
/// [A, B] = AB - (-1)^{deg A deg B} BA.
GradedOperator graded_commutator(const GradedOperator& a, const GradedOperator& b);
/// T T* + T* T.
GradedOperator laplacian_of(const GradedOperator& t, const CMat& gram);

using DegreeSelector = std::variant<Bidegree, int>;

struct HarmonicBasis {
  DegreeSelector selector = 0;
  CMat basis;  // columns over the whole space, orthonormal in the pairing
  double tol = 0.0;
  double threshold = 0.0;
  double gap = 0.0;
  bool ill_separated = false;
  std::string warning;
  int dim() const { return static_cast<int>(basis.cols()); }
};

std::vector<int> selector_indices(const FormSpace& space, const DegreeSelector& sel);

/// Kernel of delta restricted to the selected subspace.
HarmonicBasis harmonic_space(const GradedOperator& delta, const DegreeSelector& sel, const CMat& gram,
                             double tol = 1e-9);
/// Kernel of the sum of the given operators on one bidegree.
HarmonicBasis joint_harmonic_space(const std::vector<GradedOperator>& deltas, Bidegree b, const CMat& gram,
                                   double tol = 1e-9);
/// Intersection of kernels computed from the stacked operators.
HarmonicBasis kernel_intersection(const std::vector<GradedOperator>& ops, Bidegree b, const CMat& gram,
                                  double tol = 1e-9);

/// Largest principal angle residual: how far the columns of a are from span(b).
double subspace_distance(const CMat& a, const CMat& b, const CMat& gram);

enum class DLambdaRoute { Inverse, Conjugated };
/// d^Lambda = (-1)^{k+1} * J^{-1} d * J^{-1} on k-forms, or the equal form - * J^{-1} d J *.
GradedOperator d_lambda_operator(const GradedOperator& d, const CMat& star, const CMat& j,
                                 DLambdaRoute route = DLambdaRoute::Inverse);

/// Minimal-norm solution of d beta = alpha.
CVec solve_d_minnorm(const CVec& alpha, const GradedOperator& d, const CMat& gram, double tol = 1e-10);

}  // namespace akh::ops
