#include "akh/bigraded_algebra.hpp"

#include <array>
#include <mutex>

#include "akh/exterior.hpp"
#include "akh/linalg.hpp"

namespace akh::algebra {

namespace {

constexpr int kMaxN = 4;

MultiIndex labels(Mask m, int shift, int n) {
  MultiIndex out;
  for (int k = 0; k < n; ++k)
    if (m & (Mask{1} << (k + shift))) out.push_back(k + 1);
  return out;
}

Mask mask_from(const MultiIndex& idx, int n, int shift, const char* what) {
  Mask m = 0;
  int prev = 0;
  for (int v : idx) {
    if (v < 1 || v > n) throw ArgumentError(std::string(what) + ": label out of range");
    if (v <= prev) throw ArgumentError(std::string(what) + ": multi-index must be strictly increasing");
    prev = v;
    m |= Mask{1} << (v - 1 + shift);
  }
  return m;
}

cd ipow(int e) {
  static const std::array<cd, 4> powers = {cd(1, 0), cd(0, 1), cd(-1, 0), cd(0, -1)};
  return powers[((e % 4) + 4) % 4];
}

}  // namespace

FormSpace::FormSpace(int n) : n_(n) {
  if (n < 1 || n > kMaxN) throw DimensionError("FormSpace: n must lie in [1, 4]");
  const int dim = 1 << (2 * n);
  index_of_mask_.assign(dim, -1);
  offsets_.assign((n + 1) * (n + 1) + 1, 0);
  for (int p = 0; p <= n; ++p)
    for (int q = 0; q <= n; ++q) {
      offsets_[p * (n + 1) + q] = static_cast<int>(masks_.size());
      for (Mask I : ext::subsets(n, p))
        for (Mask J : ext::subsets(n, q)) {
          index_of_mask_[I | (J << n)] = static_cast<int>(masks_.size());
          masks_.push_back(I | (J << n));
        }
    }
  offsets_.back() = dim;
  conj_index_.resize(dim);
  conj_sign_.resize(dim);
  const Mask low = (Mask{1} << n) - 1;
  for (int x = 0; x < dim; ++x) {
    Mask I = masks_[x] & low, J = masks_[x] >> n;
    conj_index_[x] = index_of_mask_[J | (I << n)];
    conj_sign_[x] = ((ext::popcount(I) * ext::popcount(J)) & 1) ? -1.0 : 1.0;
  }
}

std::shared_ptr<const FormSpace> FormSpace::get(int n) {
  static std::mutex mu;
  static std::array<std::shared_ptr<const FormSpace>, kMaxN + 1> cache;
  if (n < 1 || n > kMaxN) throw DimensionError("FormSpace: n must lie in [1, 4]");
  std::lock_guard<std::mutex> lock(mu);
  if (!cache[n]) cache[n] = std::make_shared<const FormSpace>(n);
  return cache[n];
}

int FormSpace::block_offset(int p, int q) const {
  if (!in_range(p, q)) throw DegreeRangeError("bidegree out of range");
  return offsets_[p * (n_ + 1) + q];
}

int FormSpace::block_dim(int p, int q) const {
  if (!in_range(p, q)) throw DegreeRangeError("bidegree out of range");
  int idx = p * (n_ + 1) + q;
  return offsets_[idx + 1] - offsets_[idx];
}

Bidegree FormSpace::bidegree(int index) const {
  Mask m = masks_[index];
  Mask low = (Mask{1} << n_) - 1;
  return {ext::popcount(m & low), ext::popcount(m >> n_)};
}

MultiIndex FormSpace::holo(int index) const { return labels(masks_[index], 0, n_); }
MultiIndex FormSpace::antiholo(int index) const { return labels(masks_[index], n_, n_); }

std::vector<Bidegree> FormSpace::blocks() const {
  std::vector<Bidegree> out;
  for (int p = 0; p <= n_; ++p)
    for (int q = 0; q <= n_; ++q) out.push_back({p, q});
  return out;
}

std::vector<Bidegree> FormSpace::blocks_of_degree(int k) const {
  std::vector<Bidegree> out;
  for (int p = 0; p <= n_; ++p)
    if (k - p >= 0 && k - p <= n_) out.push_back({p, k - p});
  return out;
}

std::vector<int> FormSpace::degree_indices(int k) const {
  std::vector<int> out;
  for (int x = 0; x < dim(); ++x)
    if (degree(x) == k) out.push_back(x);
  return out;
}

std::vector<std::pair<MultiIndex, MultiIndex>> basis_enumerate(int n, int p, int q) {
  if (n < 1) throw DimensionError("basis_enumerate: n must be positive");
  if (p < 0 || q < 0 || p > n || q > n) throw DegreeRangeError("basis_enumerate: bidegree out of range");
  std::vector<std::pair<MultiIndex, MultiIndex>> out;
  for (Mask I : ext::subsets(n, p))
    for (Mask J : ext::subsets(n, q)) out.emplace_back(labels(I, 0, n), labels(J, 0, n));
  return out;
}

// BigradedForm

BigradedForm::BigradedForm(int n) : n_(n), space_(FormSpace::get(n)), coeffs_(CVec::Zero(space_->dim())) {}

BigradedForm::BigradedForm(int n, CVec coeffs) : n_(n), space_(FormSpace::get(n)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != space_->dim()) throw DimensionError("BigradedForm: coefficient vector has wrong size");
}

BigradedForm::BigradedForm(int n, const std::map<std::pair<int, int>, CVec>& blocks) : BigradedForm(n) {
  for (const auto& [pq, v] : blocks) set_block(pq.first, pq.second, v);
}

BigradedForm BigradedForm::basis(int n, const MultiIndex& I, const MultiIndex& J, cd coeff) {
  BigradedForm f(n);
  Mask m = mask_from(I, n, 0, "basis") | mask_from(J, n, n, "basis");
  f.coeffs_(f.space_->index(m)) = coeff;
  return f;
}

CVec BigradedForm::block(int p, int q) const {
  return coeffs_.segment(space_->block_offset(p, q), space_->block_dim(p, q));
}

void BigradedForm::set_block(int p, int q, const CVec& v) {
  int off = space_->block_offset(p, q), len = space_->block_dim(p, q);
  if (v.size() != len) throw DimensionError("BigradedForm: block vector has wrong size");
  coeffs_.segment(off, len) = v;
}

BigradedForm BigradedForm::projected(int p, int q) const {
  BigradedForm out(n_);
  out.set_block(p, q, block(p, q));
  return out;
}

std::vector<Bidegree> BigradedForm::support(double tol) const {
  std::vector<Bidegree> out;
  for (auto b : space_->blocks()) {
    CVec v = block(b.p, b.q);
    if (v.size() && v.cwiseAbs().maxCoeff() > tol) out.push_back(b);
  }
  return out;
}

cd BigradedForm::coefficient(const MultiIndex& I, const MultiIndex& J) const {
  Mask m = mask_from(I, n_, 0, "coefficient") | mask_from(J, n_, n_, "coefficient");
  return coeffs_(space_->index(m));
}

BigradedForm BigradedForm::operator+(const BigradedForm& o) const {
  if (o.n_ != n_) throw DimensionError("BigradedForm: dimension mismatch");
  return BigradedForm(n_, CVec(coeffs_ + o.coeffs_));
}

BigradedForm BigradedForm::operator-(const BigradedForm& o) const {
  if (o.n_ != n_) throw DimensionError("BigradedForm: dimension mismatch");
  return BigradedForm(n_, CVec(coeffs_ - o.coeffs_));
}

BigradedForm BigradedForm::operator*(cd s) const { return BigradedForm(n_, CVec(coeffs_ * s)); }

// HermitianFrame

HermitianFrame HermitianFrame::orthonormal(int n, double volume) {
  return HermitianFrame{n, CMat::Identity(n, n), volume};
}

void HermitianFrame::validate() const {
  if (n < 1) throw DimensionError("HermitianFrame: n must be positive");
  if (h.rows() != n || h.cols() != n) throw DimensionError("HermitianFrame: h must be n x n");
  if (!(volume > 0.0)) throw FrameError("HermitianFrame: volume scale must be positive");
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) throw FrameError("HermitianFrame: h is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMat> es(h);
  if (es.eigenvalues().minCoeff() <= 1e-14 * scale) throw FrameError("HermitianFrame: h is not positive definite");
}

// FrameAlgebra

FrameAlgebra::FrameAlgebra(const HermitianFrame& frame) : frame_(frame) {
  frame_.validate();
  const int n = frame_.n;
  space_ = FormSpace::get(n);
  const FormSpace& S = *space_;
  const int dim = S.dim();
  const CMat& h = frame_.h;
  const CMat hc = h.conjugate();

  auto sub_det = [](const CMat& m, const MultiIndex& r, const MultiIndex& c) -> cd {
    if (r.empty()) return 1.0;
    CMat s(r.size(), c.size());
    for (std::size_t i = 0; i < r.size(); ++i)
      for (std::size_t j = 0; j < c.size(); ++j) s(i, j) = m(r[i] - 1, c[j] - 1);
    return s.determinant();
  };

  gram_ = CMat::Zero(dim, dim);
  for (auto b : S.blocks()) {
    int off = S.block_offset(b), len = S.block_dim(b);
    for (int x = off; x < off + len; ++x)
      for (int y = off; y < off + len; ++y)
        gram_(y, x) = sub_det(h, S.holo(x), S.holo(y)) * sub_det(hc, S.antiholo(x), S.antiholo(y));
  }
  gram_inv_ = gram_.inverse();

  // omega = i sum M_jk dz_j ^ dzbar_k with M = conj(h^{-1})
  const CMat M = h.inverse().conjugate();
  omega_ = CVec::Zero(dim);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      Mask m = (Mask{1} << j) | (Mask{1} << (n + k));
      omega_(S.index(m)) += kI * M(j, k);
    }
  l_ = wedge_matrix(omega_);
  lambda_ = adjoint(l_);

  // dV = omega^n / n!
  CVec pw = CVec::Zero(dim);
  pw(S.index(0)) = 1.0;
  double fact = 1.0;
  for (int k = 1; k <= n; ++k) {
    pw = l_ * pw;
    fact *= k;
  }
  dv_ = pw / fact;
  const int top = S.index((Mask{1} << (2 * n)) - 1);
  const cd v = dv_(top);

  // e_x ^ *e_y = <e_x, conj(e_y)> dV
  CMat W = CMat::Zero(dim, dim), R = CMat::Zero(dim, dim);
  const Mask full = (Mask{1} << (2 * n)) - 1;
  for (int x = 0; x < dim; ++x) {
    Mask comp = full & ~S.mask(x);
    W(x, S.index(comp)) = static_cast<double>(ext::wedge_sign(S.mask(x), comp));
  }
  for (int y = 0; y < dim; ++y)
    for (int x = 0; x < dim; ++x) R(x, y) = S.conj_sign(y) * gram_(S.conj_index(y), x);
  star_ = v * (W.transpose() * R);

  lambda_star_ = CMat::Zero(dim, dim);
  CMat sls = star_ * l_ * star_;
  for (int x = 0; x < dim; ++x) {
    double sign = (S.degree(x) & 1) ? -1.0 : 1.0;
    lambda_star_.col(x) = sign * sls.col(x);
  }

  j_ = CMat::Zero(dim, dim);
  for (int x = 0; x < dim; ++x) {
    auto b = S.bidegree(x);
    j_(x, x) = ipow(b.q - b.p);
  }
}

CMat FrameAlgebra::wedge_matrix(const CVec& form) const {
  const FormSpace& S = *space_;
  const int dim = S.dim();
  CMat out = CMat::Zero(dim, dim);
  for (int a = 0; a < dim; ++a) {
    if (form(a) == cd(0.0)) continue;
    for (int b = 0; b < dim; ++b) {
      int s = ext::wedge_sign(S.mask(a), S.mask(b));
      if (s) out(S.index(S.mask(a) | S.mask(b)), b) += static_cast<double>(s) * form(a);
    }
  }
  return out;
}

CVec FrameAlgebra::conjugate(const CVec& a) const {
  CVec out = CVec::Zero(a.size());
  for (int x = 0; x < a.size(); ++x) out(space_->conj_index(x)) += space_->conj_sign(x) * std::conj(a(x));
  return out;
}

// free functions

namespace {

void check_frame(const BigradedForm& a, const HermitianFrame& frame) {
  if (a.n() != frame.n) throw DimensionError("form and frame dimensions differ");
}

CVec mask_vector(const BigradedForm& a) {
  CVec out = CVec::Zero(a.coeffs().size());
  for (int x = 0; x < a.coeffs().size(); ++x) out(a.space().mask(x)) = a.coeffs()(x);
  return out;
}

BigradedForm from_mask_vector(int n, const CVec& v) {
  BigradedForm out(n);
  for (int x = 0; x < v.size(); ++x) out.coeffs()(x) = v(out.space().mask(x));
  return out;
}

}  // namespace

BigradedForm wedge(const BigradedForm& a, const BigradedForm& b) {
  if (a.n() != b.n()) throw DimensionError("wedge: dimension mismatch");
  return from_mask_vector(a.n(), ext::wedge(mask_vector(a), mask_vector(b)));
}

BigradedForm apply_J(const BigradedForm& a) {
  BigradedForm out = a;
  for (int x = 0; x < a.coeffs().size(); ++x) {
    auto b = a.space().bidegree(x);
    out.coeffs()(x) *= ipow(b.q - b.p);
  }
  return out;
}

BigradedForm conjugate(const BigradedForm& a) {
  const FormSpace& S = a.space();
  BigradedForm out(a.n());
  for (int x = 0; x < S.dim(); ++x) out.coeffs()(S.conj_index(x)) += S.conj_sign(x) * std::conj(a.coeffs()(x));
  return out;
}

cd inner_product(const BigradedForm& a, const BigradedForm& b, const HermitianFrame& frame) {
  check_frame(a, frame);
  check_frame(b, frame);
  FrameAlgebra fa(frame);
  return fa.inner(a.coeffs(), b.coeffs());
}

BigradedForm kahler_form(const HermitianFrame& frame) {
  FrameAlgebra fa(frame);
  return BigradedForm(frame.n, fa.kahler());
}

BigradedForm volume_form(const HermitianFrame& frame) {
  FrameAlgebra fa(frame);
  return BigradedForm(frame.n, fa.volume_form());
}

BigradedForm hodge_star(const BigradedForm& a, const HermitianFrame& frame) {
  check_frame(a, frame);
  FrameAlgebra fa(frame);
  return BigradedForm(a.n(), CVec(fa.star() * a.coeffs()));
}

BigradedForm lefschetz(const BigradedForm& a, const HermitianFrame& frame) {
  check_frame(a, frame);
  FrameAlgebra fa(frame);
  return BigradedForm(a.n(), CVec(fa.lefschetz() * a.coeffs()));
}

BigradedForm dual_lefschetz(const BigradedForm& a, const HermitianFrame& frame, LambdaRoute route) {
  check_frame(a, frame);
  FrameAlgebra fa(frame);
  const CMat& m = route == LambdaRoute::Adjoint ? fa.dual_lefschetz() : fa.dual_lefschetz_star_route();
  return BigradedForm(a.n(), CVec(m * a.coeffs()));
}

std::vector<PrimitiveComponent> primitive_decompose(const BigradedForm& a, const HermitianFrame& frame, double tol) {
  check_frame(a, frame);
  auto supp = a.support(0.0);
  if (supp.size() > 1) throw ArgumentError("primitive_decompose: form must have a single bidegree");
  std::vector<PrimitiveComponent> out;
  if (supp.empty()) return out;
  const int p = supp[0].p, q = supp[0].q, n = a.n();
  FrameAlgebra fa(frame);
  const FormSpace& S = fa.space();
  const CMat& G = fa.gram();
  const double anorm = std::sqrt(std::abs(fa.inner(a.coeffs(), a.coeffs())));

  CVec rest = a.coeffs();
  for (int j = 0; j <= std::min(p, q); ++j) {
    const int pp = p - j, qq = q - j;
    if (pp + qq > n || j > n - (pp + qq)) continue;  // L^j kills primitive forms there
    // primitive forms in (pp, qq): kernel of Lambda restricted to that block
    const int off = S.block_offset(pp, qq), len = S.block_dim(pp, qq);
    CMat lam_block;
    if (pp > 0 && qq > 0) {
      int toff = S.block_offset(pp - 1, qq - 1), tlen = S.block_dim(pp - 1, qq - 1);
      lam_block = fa.dual_lefschetz().block(toff, off, tlen, len);
    } else {
      lam_block = CMat::Zero(0, len);
    }
    CMat K = linalg::kernel(lam_block, 1e-10).basis;
    if (K.cols() == 0) continue;
    CMat Kfull = CMat::Zero(S.dim(), K.cols());
    Kfull.middleRows(off, len) = K;
    CMat V = Kfull;
    for (int t = 0; t < j; ++t) V = fa.lefschetz() * V;
    CMat VGV = V.adjoint() * G * V;
    Eigen::CompleteOrthogonalDecomposition<CMat> cod(VGV);
    CVec c = cod.solve(V.adjoint() * G * a.coeffs());
    CVec beta = Kfull * c;
    rest -= V * c;
    BigradedForm b(n, beta);
    if (b.max_abs() > tol * std::max(anorm, 1e-300)) out.push_back({j, b});
  }
  double resid = std::sqrt(std::abs(fa.inner(rest, rest)));
  if (resid > tol * std::max(anorm, 1.0)) throw DecompositionError("primitive_decompose: reconstruction residual too large (" + std::to_string(resid) + ", bidegree " + std::to_string(p) + "," + std::to_string(q) + ")");
  return out;
}

CMat real_11_matrix(const BigradedForm& r, double tol) {
  const int n = r.n();
  const double scale = std::max(1.0, r.max_abs());
  for (auto b : r.support(tol * scale))
    if (!(b.p == 1 && b.q == 1)) throw ArgumentError("xi_lambda_commutator: r must be a (1,1)-form");
  CMat R(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) R(j, k) = -kI * r.coefficient({j + 1}, {k + 1});
  if ((R - R.adjoint()).cwiseAbs().maxCoeff() > tol * scale) throw ArgumentError("xi_lambda_commutator: r is not real");
  return R;
}

BigradedForm xi_lambda_commutator(const BigradedForm& r, const BigradedForm& a, const HermitianFrame& frame,
                                  XiRoute route) {
  check_frame(a, frame);
  check_frame(r, frame);
  CMat R = real_11_matrix(r);
  FrameAlgebra fa(frame);
  const int n = frame.n;
  if (route == XiRoute::Direct) {
    CMat Xi = fa.wedge_matrix(r.coeffs());
    CMat comm = Xi * fa.dual_lefschetz() - fa.dual_lefschetz() * Xi;
    return BigradedForm(n, CVec(comm * a.coeffs()));
  }
  // simultaneous diagonalization: R y = e M y with Y^H M Y = I
  const CMat M = frame.h.inverse().conjugate();
  CMat Rh = 0.5 * (R + R.adjoint()), Mh = 0.5 * (M + M.adjoint());
  Eigen::GeneralizedSelfAdjointEigenSolver<CMat> es(Rh, Mh);
  const RVec e = es.eigenvalues();
  const CMat C = es.eigenvectors().conjugate();  // dz = C dw
  CMat Sub = CMat::Zero(2 * n, 2 * n);
  Sub.topLeftCorner(n, n) = C;
  Sub.bottomRightCorner(n, n) = C.conjugate();
  CMat to_w = ext::induced_map(Sub);
  CMat from_w = to_w.inverse();
  CVec mv = mask_vector(a);
  CVec w = to_w * mv;
  const double esum = e.sum();
  for (int m = 0; m < w.size(); ++m) {
    double f = -esum;
    for (int k : ext::bits(static_cast<Mask>(m))) f += e(k % n);
    w(m) *= f;
  }
  return from_mask_vector(n, from_w * w);
}

}  // namespace akh::algebra
