#pragma once

#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "akh/errors.hpp"
#include "akh/types.hpp"

namespace akh::algebra {

/// Strictly increasing list of 1-based labels.
using MultiIndex = std::vector<int>;

struct Bidegree {
  int p = 0;
  int q = 0;
  int total() const { return p + q; }
  auto operator<=>(const Bidegree&) const = default;
};

/// Basis of the bigraded exterior algebra of C^n. Generators are ordered
/// dz_1..dz_n, dzbar_1..dzbar_n; dz^I ^ dzbar^J has mask I | (J << n).
/// Blocks are ordered by (p,q) lexicographically, and within a block by (I,J).
class FormSpace {
 public:
  explicit FormSpace(int n);
  static std::shared_ptr<const FormSpace> get(int n);

  int n() const { return n_; }
  int dim() const { return static_cast<int>(masks_.size()); }
  int block_offset(int p, int q) const;
  int block_dim(int p, int q) const;
  int block_offset(Bidegree b) const { return block_offset(b.p, b.q); }
  int block_dim(Bidegree b) const { return block_dim(b.p, b.q); }
  bool in_range(int p, int q) const { return p >= 0 && q >= 0 && p <= n_ && q <= n_; }

  Mask mask(int index) const { return masks_[index]; }
  int index(Mask m) const { return index_of_mask_[m]; }
  Bidegree bidegree(int index) const;
  int degree(int index) const { return bidegree(index).total(); }
  MultiIndex holo(int index) const;
  MultiIndex antiholo(int index) const;
  std::vector<Bidegree> blocks() const;
  std::vector<Bidegree> blocks_of_degree(int k) const;
  /// Indices of all basis elements of total degree k, in space order.
  std::vector<int> degree_indices(int k) const;
  /// Index of the conjugate basis element and the sign of conj(e_x).
  int conj_index(int index) const { return conj_index_[index]; }
  double conj_sign(int index) const { return conj_sign_[index]; }

 private:
  int n_;
  std::vector<Mask> masks_;
  std::vector<int> index_of_mask_;
  std::vector<int> offsets_;
  std::vector<int> conj_index_;
  std::vector<double> conj_sign_;
};

std::vector<std::pair<MultiIndex, MultiIndex>> basis_enumerate(int n, int p, int q);

/// Element of the bigraded algebra, stored densely over the whole space.
class BigradedForm {
 public:
  BigradedForm() = default;
  explicit BigradedForm(int n);
  BigradedForm(int n, CVec coeffs);
  BigradedForm(int n, const std::map<std::pair<int, int>, CVec>& blocks);

  static BigradedForm basis(int n, const MultiIndex& I, const MultiIndex& J, cd coeff = 1.0);

  int n() const { return n_; }
  const FormSpace& space() const { return *space_; }
  const CVec& coeffs() const { return coeffs_; }
  CVec& coeffs() { return coeffs_; }
  CVec block(int p, int q) const;
  void set_block(int p, int q, const CVec& v);
  BigradedForm projected(int p, int q) const;
  /// Bidegrees whose block is nonzero above tol.
  std::vector<Bidegree> support(double tol = 0.0) const;
  cd coefficient(const MultiIndex& I, const MultiIndex& J) const;

  BigradedForm operator+(const BigradedForm& o) const;
  BigradedForm operator-(const BigradedForm& o) const;
  BigradedForm operator*(cd s) const;
  double max_abs() const { return coeffs_.size() ? coeffs_.cwiseAbs().maxCoeff() : 0.0; }

 private:
  int n_ = 0;
  std::shared_ptr<const FormSpace> space_;
  CVec coeffs_;
};

/// Hermitian structure on the (1,0)-coframe: <dz_i, dz_j> = h(i,j).
/// volume scales the global L2 pairing of invariant forms.
struct HermitianFrame {
  int n = 0;
  CMat h;
  double volume = 1.0;

  static HermitianFrame orthonormal(int n, double volume = 1.0);
  void validate() const;
};

/// Matrices of the frame-dependent operators over a FormSpace.
class FrameAlgebra {
 public:
  explicit FrameAlgebra(const HermitianFrame& frame);

  const FormSpace& space() const { return *space_; }
  std::shared_ptr<const FormSpace> space_ptr() const { return space_; }
  const HermitianFrame& frame() const { return frame_; }
  /// gram()(y, x) = <e_x, e_y>, so <a, b> = b^H G a.
  const CMat& gram() const { return gram_; }
  const CMat& gram_inverse() const { return gram_inv_; }
  const CVec& kahler() const { return omega_; }
  const CVec& volume_form() const { return dv_; }
  const CMat& lefschetz() const { return l_; }
  const CMat& dual_lefschetz() const { return lambda_; }
  /// Lambda computed as (-1)^k * L * on k-forms.
  const CMat& dual_lefschetz_star_route() const { return lambda_star_; }
  const CMat& star() const { return star_; }
  const CMat& j_op() const { return j_; }
  CMat wedge_matrix(const CVec& form) const;
  CMat adjoint(const CMat& t) const { return gram_inv_ * t.adjoint() * gram_; }
  cd inner(const CVec& a, const CVec& b) const { return b.dot(gram_ * a); }
  CVec conjugate(const CVec& a) const;

 private:
  HermitianFrame frame_;
  std::shared_ptr<const FormSpace> space_;
  CMat gram_, gram_inv_, l_, lambda_, lambda_star_, star_, j_;
  CVec omega_, dv_;
};

BigradedForm wedge(const BigradedForm& a, const BigradedForm& b);
BigradedForm apply_J(const BigradedForm& a);
BigradedForm conjugate(const BigradedForm& a);
cd inner_product(const BigradedForm& a, const BigradedForm& b, const HermitianFrame& frame);
BigradedForm kahler_form(const HermitianFrame& frame);
BigradedForm volume_form(const HermitianFrame& frame);
BigradedForm hodge_star(const BigradedForm& a, const HermitianFrame& frame);
BigradedForm lefschetz(const BigradedForm& a, const HermitianFrame& frame);

enum class LambdaRoute { Adjoint, Star };
BigradedForm dual_lefschetz(const BigradedForm& a, const HermitianFrame& frame,
                            LambdaRoute route = LambdaRoute::Adjoint);

struct PrimitiveComponent {
  int j = 0;
  BigradedForm beta;  // primitive, bidegree (p-j, q-j)
};

/// a = sum_j L^j beta_j with beta_j primitive. a must be pure of one bidegree.
std::vector<PrimitiveComponent> primitive_decompose(const BigradedForm& a, const HermitianFrame& frame,
                                                    double tol = 1e-10);

enum class XiRoute { Direct, Eigen };
/// [Xi(r), Lambda] a for a real (1,1)-form r.
BigradedForm xi_lambda_commutator(const BigradedForm& r, const BigradedForm& a, const HermitianFrame& frame,
                                  XiRoute route = XiRoute::Direct);

/// Hermitian matrix R with r = i sum R_jk dz_j ^ dzbar_k; throws if r is not a real (1,1)-form.
CMat real_11_matrix(const BigradedForm& r, double tol = 1e-12);

}  // namespace akh::algebra
