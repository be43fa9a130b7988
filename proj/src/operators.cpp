#include "akh/operators.hpp"

#include "akh/linalg.hpp"

namespace akh::ops {

GradedOperator::GradedOperator(std::shared_ptr<const FormSpace> space, CMat m, int degree,
                               std::optional<Bidegree> shift)
    : space_(std::move(space)), m_(std::move(m)), degree_(degree), shift_(shift) {
  if (!space_) throw ArgumentError("GradedOperator: missing form space");
  if (m_.rows() != space_->dim() || m_.cols() != space_->dim())
    throw DimensionError("GradedOperator: matrix size does not match the form space");
  if (shift_ && shift_->total() != degree_) throw ArgumentError("GradedOperator: shift and degree disagree");
}

GradedOperator GradedOperator::identity(std::shared_ptr<const FormSpace> space) {
  const int d = space->dim();
  return GradedOperator(std::move(space), CMat::Identity(d, d), 0, Bidegree{0, 0});
}

GradedOperator GradedOperator::zero(std::shared_ptr<const FormSpace> space, int degree,
                                    std::optional<Bidegree> shift) {
  const int d = space->dim();
  return GradedOperator(std::move(space), CMat::Zero(d, d), degree, shift);
}

CMat GradedOperator::block(Bidegree from, Bidegree to) const {
  const int coff = space_->block_offset(from), clen = space_->block_dim(from);
  if (!space_->in_range(to.p, to.q)) return CMat(0, clen);
  return m_.block(space_->block_offset(to), coff, space_->block_dim(to), clen);
}

CMat GradedOperator::block(int p, int q) const {
  if (!shift_) throw CompositionError("GradedOperator: block(p,q) needs a bidegree shift");
  return block(Bidegree{p, q}, Bidegree{p + shift_->p, q + shift_->q});
}

GradedOperator GradedOperator::component(Bidegree shift) const {
  if (shift.total() != degree_) throw CompositionError("GradedOperator: component shift has the wrong degree");
  CMat out = CMat::Zero(m_.rows(), m_.cols());
  for (auto b : space_->blocks()) {
    Bidegree t{b.p + shift.p, b.q + shift.q};
    if (!space_->in_range(t.p, t.q)) continue;
    int r = space_->block_offset(t), c = space_->block_offset(b);
    int rl = space_->block_dim(t), cl = space_->block_dim(b);
    out.block(r, c, rl, cl) = m_.block(r, c, rl, cl);
  }
  return GradedOperator(space_, std::move(out), degree_, shift);
}

void GradedOperator::check_same_space(const GradedOperator& o, const char* what) const {
  if (!space_ || !o.space_ || space_->n() != o.space_->n())
    throw CompositionError(std::string(what) + ": operators act on different spaces");
}

GradedOperator GradedOperator::operator+(const GradedOperator& o) const {
  check_same_space(o, "sum");
  if (degree_ != o.degree_) throw CompositionError("sum: operators have different degrees");
  std::optional<Bidegree> s = (shift_ && o.shift_ && *shift_ == *o.shift_) ? shift_ : std::nullopt;
  return GradedOperator(space_, m_ + o.m_, degree_, s);
}

GradedOperator GradedOperator::operator-(const GradedOperator& o) const { return *this + (o * cd(-1.0)); }

GradedOperator GradedOperator::operator*(const GradedOperator& o) const {
  check_same_space(o, "composition");
  std::optional<Bidegree> s;
  if (shift_ && o.shift_) s = Bidegree{shift_->p + o.shift_->p, shift_->q + o.shift_->q};
  return GradedOperator(space_, m_ * o.m_, degree_ + o.degree_, s);
}

GradedOperator GradedOperator::operator*(cd s) const { return GradedOperator(space_, m_ * s, degree_, shift_); }

GradedOperator operator*(cd s, const GradedOperator& a) { return a * s; }

GradedOperator adjoint_of(const GradedOperator& t, const CMat& gram) {
  if (gram.rows() != t.matrix().rows()) throw DimensionError("adjoint_of: pairing size mismatch");
  CMat m = gram.inverse() * t.matrix().adjoint() * gram;
  std::optional<Bidegree> s;
  if (t.shift()) s = Bidegree{-t.shift()->p, -t.shift()->q};
  return GradedOperator(t.space_ptr(), std::move(m), -t.degree(), s);
}

GradedOperator graded_commutator(const GradedOperator& a, const GradedOperator& b) {
  const bool odd = ((a.degree() * b.degree()) % 2) != 0;
  GradedOperator ab = a * b, ba = b * a;
  return odd ? ab + ba : ab - ba;
}

GradedOperator laplacian_of(const GradedOperator& t, const CMat& gram) {
  GradedOperator ts = adjoint_of(t, gram);
  return t * ts + ts * t;
}

std::vector<int> selector_indices(const FormSpace& space, const DegreeSelector& sel) {
  std::vector<int> idx;
  if (std::holds_alternative<Bidegree>(sel)) {
    auto b = std::get<Bidegree>(sel);
    int off = space.block_offset(b), len = space.block_dim(b);
    for (int i = 0; i < len; ++i) idx.push_back(off + i);
  } else {
    int k = std::get<int>(sel);
    if (k < 0 || k > 2 * space.n()) throw DegreeRangeError("harmonic_space: degree out of range");
    idx = space.degree_indices(k);
  }
  return idx;
}

namespace {

HarmonicBasis kernel_on(const CMat& columns, const std::vector<int>& idx, int dim, const CMat& gram,
                        const DegreeSelector& sel, double tol) {
  HarmonicBasis out;
  out.selector = sel;
  out.tol = tol;
  auto k = linalg::kernel(columns, tol);
  out.threshold = k.threshold;
  out.gap = k.gap;
  CMat full = CMat::Zero(dim, k.basis.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) full.row(idx[i]) = k.basis.row(i);
  out.basis = linalg::orthonormalize(full, gram);
  const int d_lo = static_cast<int>(linalg::kernel(columns, tol * 10).basis.cols());
  const int d_hi = static_cast<int>(linalg::kernel(columns, tol / 10).basis.cols());
  if (d_lo != out.dim() || d_hi != out.dim()) {
    out.ill_separated = true;
    out.warning = "ill-separated kernel: dimension changes under a tenfold tolerance change";
  } else if (out.gap > 0 && out.gap < 10 * out.threshold) {
    out.ill_separated = true;
    out.warning = "ill-separated kernel: spectral gap below ten times the threshold";
  }
  return out;
}

}  // namespace

HarmonicBasis harmonic_space(const GradedOperator& delta, const DegreeSelector& sel, const CMat& gram, double tol) {
  auto idx = selector_indices(delta.space(), sel);
  CMat cols(delta.matrix().rows(), idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) cols.col(i) = delta.matrix().col(idx[i]);
  return kernel_on(cols, idx, delta.space().dim(), gram, sel, tol);
}

HarmonicBasis joint_harmonic_space(const std::vector<GradedOperator>& deltas, Bidegree b, const CMat& gram,
                                   double tol) {
  if (deltas.empty()) throw ArgumentError("joint_harmonic_space: no operators given");
  GradedOperator sum = deltas[0];
  for (std::size_t i = 1; i < deltas.size(); ++i) sum = sum + deltas[i];
  return harmonic_space(sum, b, gram, tol);
}

HarmonicBasis kernel_intersection(const std::vector<GradedOperator>& ops, Bidegree b, const CMat& gram, double tol) {
  if (ops.empty()) throw ArgumentError("kernel_intersection: no operators given");
  const auto& space = ops[0].space();
  auto idx = selector_indices(space, b);
  const int dim = space.dim();
  CMat stacked(dim * static_cast<int>(ops.size()), idx.size());
  for (std::size_t o = 0; o < ops.size(); ++o)
    for (std::size_t i = 0; i < idx.size(); ++i) stacked.block(o * dim, i, dim, 1) = ops[o].matrix().col(idx[i]);
  return kernel_on(stacked, idx, dim, gram, b, tol);
}

double subspace_distance(const CMat& a, const CMat& b, const CMat& gram) {
  if (a.cols() == 0) return 0.0;
  CMat ob = linalg::orthonormalize(b, gram);
  double worst = 0.0;
  for (Eigen::Index c = 0; c < a.cols(); ++c) {
    CVec x = a.col(c);
    double nx = std::sqrt(std::abs(x.dot(gram * x)));
    if (nx == 0) continue;
    CVec r = x;
    for (Eigen::Index k = 0; k < ob.cols(); ++k) r -= ob.col(k).dot(gram * x) * ob.col(k);
    worst = std::max(worst, std::sqrt(std::abs(r.dot(gram * r))) / nx);
  }
  return worst;
}

GradedOperator d_lambda_operator(const GradedOperator& d, const CMat& star, const CMat& j, DLambdaRoute route) {
  const auto& S = d.space();
  CMat jinv = j.inverse();
  CMat m;
  if (route == DLambdaRoute::Inverse) {
    m = star * jinv * d.matrix() * star * jinv;
    for (int x = 0; x < S.dim(); ++x)
      if ((S.degree(x) + 1) % 2) m.col(x) *= -1.0;
  } else {
    m = -(star * jinv * d.matrix() * j * star);
  }
  return GradedOperator(d.space_ptr(), std::move(m), -1, std::nullopt);
}

CVec solve_d_minnorm(const CVec& alpha, const GradedOperator& d, const CMat& gram, double tol) {
  if (alpha.size() != d.space().dim()) throw DimensionError("solve_d_minnorm: size mismatch");
  const double anorm = std::sqrt(std::abs(alpha.dot(gram * alpha)));
  if (anorm == 0.0) return CVec::Zero(alpha.size());
  Eigen::LLT<CMat> llt(gram);
  CMat R = llt.matrixU();
  CMat Rinv = R.inverse();
  Eigen::CompleteOrthogonalDecomposition<CMat> cod(d.matrix() * Rinv);
  cod.setThreshold(1e-12);
  CVec beta = Rinv * cod.solve(alpha);
  CVec res = d.matrix() * beta - alpha;
  const double rnorm = std::sqrt(std::abs(res.dot(gram * res)));
  if (rnorm > tol * std::max(1.0, anorm))
    throw InconsistentRhsError("inconsistent right-hand side: alpha is not in the range of d (best residual " +
                               std::to_string(rnorm) + ")");
  return beta;
}

}  // namespace akh::ops
