#include "akh/lie_model.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "akh/catalog.hpp"
#include "akh/exterior.hpp"

namespace akh::lie {

RVec LieModel::bracket(const RVec& x, const RVec& y) const {
  RVec out(dim);
  for (int k = 0; k < dim; ++k) out(k) = x.dot(c[k] * y);
  return out;
}

// ---------------------------------------------------------------- parsing

namespace {

double as_number(const toml::node& node, const std::string& where) {
  if (auto v = node.value<double>()) return *v;
  throw ParseError(where + ": expected a number");
}

int as_index(const toml::node& node, const std::string& where, int dim) {
  double v = as_number(node, where);
  if (v != std::floor(v) || v < 1 || v > dim) throw ParseError(where + ": expected an integer label in 1.." + std::to_string(dim));
  return static_cast<int>(v);
}

void reject_unknown(const toml::table& t, const std::vector<std::string>& allowed, const std::string& where) {
  for (auto&& [k, v] : t) {
    (void)v;
    if (std::find(allowed.begin(), allowed.end(), std::string(k.str())) == allowed.end())
      throw ParseError(where + ": unknown key '" + std::string(k.str()) + "'");
  }
}

const toml::table& require_table(const toml::table& t, const char* key) {
  auto* sub = t[key].as_table();
  if (!sub) throw ParseError(std::string("missing table [") + key + "]");
  return *sub;
}

RMat read_square(const toml::node& node, int dim, const std::string& where) {
  RMat m(dim, dim);
  auto* arr = node.as_array();
  if (!arr) throw ParseError(where + ": expected an array");
  if (static_cast<int>(arr->size()) == dim * dim && !(*arr)[0].is_array()) {
    for (int i = 0; i < dim * dim; ++i) m(i / dim, i % dim) = as_number((*arr)[i], where);
    return m;
  }
  if (static_cast<int>(arr->size()) != dim) throw ParseError(where + ": expected " + std::to_string(dim) + " rows");
  for (int r = 0; r < dim; ++r) {
    auto* row = (*arr)[r].as_array();
    if (!row || static_cast<int>(row->size()) != dim)
      throw ParseError(where + ": row " + std::to_string(r + 1) + " must have " + std::to_string(dim) + " entries");
    for (int c = 0; c < dim; ++c) m(r, c) = as_number((*row)[c], where);
  }
  return m;
}

}  // namespace

LieModel parse_model(const std::string& text, const std::string& source) {
  toml::table root;
  try {
    root = toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << "cannot parse " << source << ": " << e.description();
    throw ParseError(os.str());
  }
  reject_unknown(root, {"model", "structure", "metric", "acs"}, "top level");
  const auto& model = require_table(root, "model");
  reject_unknown(model, {"name", "dim"}, "[model]");
  LieModel m;
  if (auto nm = model["name"].value<std::string>())
    m.name = *nm;
  else
    throw ParseError("[model]: missing string 'name'");
  if (!model["dim"]) throw ParseError("[model]: missing 'dim'");
  double dimv = as_number(*model["dim"].node(), "[model].dim");
  if (dimv != std::floor(dimv) || dimv < 2 || static_cast<int>(dimv) % 2 || dimv > 8)
    throw ParseError("[model].dim must be an even integer between 2 and 8");
  m.dim = static_cast<int>(dimv);
  m.n = m.dim / 2;

  m.c.assign(m.dim, RMat::Zero(m.dim, m.dim));
  if (auto* st = root["structure"].as_table()) {
    reject_unknown(*st, {"dcoeffs"}, "[structure]");
    if (auto* arr = (*st)["dcoeffs"].as_array()) {
      for (std::size_t t = 0; t < arr->size(); ++t) {
        const std::string where = "[structure].dcoeffs[" + std::to_string(t) + "]";
        auto* row = (*arr)[t].as_array();
        if (!row || row->size() != 4) throw ParseError(where + ": expected [k, i, j, coeff]");
        int k = as_index((*row)[0], where, m.dim), i = as_index((*row)[1], where, m.dim),
            j = as_index((*row)[2], where, m.dim);
        double coeff = as_number((*row)[3], where);
        if (i >= j) throw ParseError(where + ": need i < j");
        // d eps^k = coeff eps^i ^ eps^j  <=>  c^k_ij = -coeff
        m.c[k - 1](i - 1, j - 1) += -coeff;
        m.c[k - 1](j - 1, i - 1) += coeff;
      }
    } else if ((*st)["dcoeffs"]) {
      throw ParseError("[structure].dcoeffs must be an array");
    }
  }

  const auto& metric = require_table(root, "metric");
  reject_unknown(metric, {"g"}, "[metric]");
  if (!metric["g"]) throw ParseError("[metric]: missing 'g'");
  if (auto s = metric["g"].value<std::string>()) {
    if (*s != "identity") throw ParseError("[metric].g: the only named metric is \"identity\"");
    m.g = RMat::Identity(m.dim, m.dim);
  } else {
    m.g = read_square(*metric["g"].node(), m.dim, "[metric].g");
  }
  const auto& acs = require_table(root, "acs");
  reject_unknown(acs, {"J"}, "[acs]");
  if (!acs["J"]) throw ParseError("[acs]: missing 'J'");
  m.J = read_square(*acs["J"].node(), m.dim, "[acs].J");
  m.omega = m.J.transpose() * m.g;
  validate(m);
  return m;
}

std::vector<std::string> catalog_names() { return {"torus4", "kodaira-thurston", "nilpotent6"}; }

bool is_catalog_name(const std::string& name) {
  auto names = catalog_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

const std::string& catalog_source(const std::string& name) {
  static const std::map<std::string, std::string> sources = {
      {"torus4", catalog::kTorus4},
      {"kodaira-thurston", catalog::kKodairaThurston},
      {"nilpotent6", catalog::kNilpotent6},
  };
  auto it = sources.find(name);
  if (it == sources.end()) throw ArgumentError("unknown catalog model '" + name + "'");
  return it->second;
}

LieModel load_model(const std::string& name_or_path) {
  std::ifstream in(name_or_path);
  if (in) {
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_model(ss.str(), name_or_path);
  }
  if (is_catalog_name(name_or_path)) return parse_model(catalog_source(name_or_path), name_or_path);
  throw ArgumentError("no model file or catalog entry named '" + name_or_path + "'");
}

// ------------------------------------------------------------- validation

double jacobi_residual(const LieModel& m) {
  double worst = 0;
  const int d = m.dim;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int e = 0; e < d; ++e) {
        RVec x = RVec::Unit(d, a), y = RVec::Unit(d, b), z = RVec::Unit(d, e);
        RVec s = m.bracket(m.bracket(x, y), z) + m.bracket(m.bracket(y, z), x) + m.bracket(m.bracket(z, x), y);
        worst = std::max(worst, s.cwiseAbs().maxCoeff());
      }
  return worst;
}

double domega_residual(const LieModel& m) {
  double worst = 0;
  const int d = m.dim;
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b)
      for (int e = b + 1; e < d; ++e) {
        RVec x = RVec::Unit(d, a), y = RVec::Unit(d, b), z = RVec::Unit(d, e);
        auto w = [&](const RVec& u, const RVec& v) { return u.dot(m.omega * v); };
        double val = -w(m.bracket(x, y), z) - w(m.bracket(y, z), x) - w(m.bracket(z, x), y);
        worst = std::max(worst, std::abs(val));
      }
  return worst;
}

void validate(const LieModel& m) {
  const int d = m.dim;
  if (m.g.rows() != d || m.J.rows() != d || static_cast<int>(m.c.size()) != d)
    throw ValidationError("shape", "matrix sizes do not match dim");
  const double jac = jacobi_residual(m);
  if (jac > 1e-12) throw ValidationError("jacobi", "Jacobi identity fails (residual " + std::to_string(jac) + ")");
  const double jj = (m.J * m.J + RMat::Identity(d, d)).cwiseAbs().maxCoeff();
  if (jj > 1e-12) throw ValidationError("complex-structure", "J^2 != -id (residual " + std::to_string(jj) + ")");
  if ((m.g - m.g.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw ValidationError("metric", "metric is not symmetric");
  Eigen::SelfAdjointEigenSolver<RMat> es(m.g);
  if (es.eigenvalues().minCoeff() <= 0) throw ValidationError("metric", "metric is not positive definite");
  const double comp = (m.J.transpose() * m.g * m.J - m.g).cwiseAbs().maxCoeff();
  if (comp > 1e-12) throw ValidationError("compatibility", "J^T g J != g (residual " + std::to_string(comp) + ")");
  const double skew = (m.omega + m.omega.transpose()).cwiseAbs().maxCoeff();
  if (skew > 1e-12) throw ValidationError("compatibility", "omega is not antisymmetric");
  const double dw = domega_residual(m);
  if (dw > 1e-12) throw ValidationError("closedness", "d omega != 0 (residual " + std::to_string(dw) + ")");
  if (std::abs(m.omega.determinant()) < 1e-12) throw ValidationError("nondegeneracy", "omega is degenerate");
}

bool is_unimodular(const LieModel& m, double tol) {
  for (int i = 0; i < m.dim; ++i) {
    double tr = 0;
    for (int k = 0; k < m.dim; ++k) tr += m.c[k](i, k);
    if (std::abs(tr) > tol) return false;
  }
  return true;
}

// ----------------------------------------------------------- CE complex

RMat ce_differential_real(const LieModel& m) {
  const int d = m.dim;
  std::vector<CVec> images(d, CVec::Zero(1 << d));
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) images[k]((Mask{1} << i) | (Mask{1} << j)) = -m.c[k](i, j);
  return ext::odd_derivation(images, d).real();
}

CMat unitary_coframe(const RMat& J, const RMat& g, std::vector<int>* pivots, const std::vector<int>* fixed_pivots) {
  const int d = static_cast<int>(J.rows()), n = d / 2;
  const CMat P = 0.5 * (CMat::Identity(d, d) - kI * J.transpose().cast<cd>());
  const CMat ginv = g.inverse().cast<cd>();
  auto inner = [&](const CVec& a, const CVec& b) -> cd { return a.transpose() * ginv * b.conjugate(); };
  auto residual_of = [&](CVec v, const std::vector<CVec>& acc) {
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : acc) v -= inner(v, u) * u;
    return v;
  };
  std::vector<int> chosen;
  if (fixed_pivots) {
    chosen = *fixed_pivots;
  } else {
    std::vector<CVec> acc;
    for (int step = 0; step < n; ++step) {
      int best = -1;
      double best_norm = -1;
      for (int k = 0; k < d; ++k) {
        if (std::find(chosen.begin(), chosen.end(), k) != chosen.end()) continue;
        double nr = std::sqrt(std::abs(inner(residual_of(P.col(k), acc), residual_of(P.col(k), acc))));
        if (nr > best_norm * (1 + 1e-9)) {
          best = k;
          best_norm = nr;
        }
      }
      if (best < 0 || best_norm < 1e-8) throw ValidationError("complex-structure", "cannot build a (1,0)-coframe");
      chosen.push_back(best);
      CVec r = residual_of(P.col(best), acc);
      acc.push_back(r / std::sqrt(std::abs(inner(r, r))));
    }
    std::sort(chosen.begin(), chosen.end());
  }
  std::vector<CVec> acc;
  for (int k : chosen) {
    CVec r = residual_of(P.col(k), acc);
    double nr = std::sqrt(std::abs(inner(r, r)));
    if (nr < 1e-3 * std::sqrt(std::abs(inner(P.col(k), P.col(k)))))
      throw ValidationError("complex-structure", "degenerate (1,0)-coframe for the fixed pivots");
    acc.push_back(r / nr);
  }
  if (pivots) *pivots = chosen;
  CMat T(d, d);
  for (int a = 0; a < n; ++a) {
    T.row(a) = acc[a].transpose();
    T.row(n + a) = acc[a].conjugate().transpose();
  }
  return T;
}

CVec InvariantComplex::from_real_form(const RVec& mask_coeffs) const { return from_real * mask_coeffs.cast<cd>(); }

InvariantComplex build_complex(const LieModel& m) {
  InvariantComplex cx;
  const int n = m.n;
  cx.space = algebra::FormSpace::get(n);
  cx.algebra = std::make_shared<const algebra::FrameAlgebra>(algebra::HermitianFrame::orthonormal(n));
  const auto& S = *cx.space;
  const int dim = S.dim();
  cx.coframe = unitary_coframe(m.J, m.g);
  CMat phi = ext::induced_map(cx.coframe);
  cx.to_real = CMat(dim, dim);
  for (int i = 0; i < dim; ++i) cx.to_real.col(i) = phi.col(S.mask(i));
  cx.from_real = cx.to_real.inverse();
  CMat greal = ext::induced_map(m.g.inverse().cast<cd>());
  cx.gram = cx.to_real.adjoint() * greal * cx.to_real;
  if ((cx.gram - CMat::Identity(dim, dim)).cwiseAbs().maxCoeff() > 1e-10)
    throw InconsistentModelError("coframe is not unitary");
  cx.real_d = ce_differential_real(m);
  cx.d = GradedOperator(cx.space, cx.to_bigraded(cx.real_d.cast<cd>()), 1, std::nullopt);
  auto split = split_differential(cx);
  cx.mu = split.mu;
  cx.del = split.del;
  cx.delbar = split.delbar;
  cx.mubar = split.mubar;

  // omega from the model must be i sum dz ^ dzbar in this frame
  CVec wreal = CVec::Zero(dim);
  for (int i = 0; i < m.dim; ++i)
    for (int j = i + 1; j < m.dim; ++j) wreal((Mask{1} << i) | (Mask{1} << j)) = m.omega(i, j);
  CVec wbig = cx.from_real * wreal;
  if ((wbig - cx.algebra->kahler()).cwiseAbs().maxCoeff() > 1e-10)
    throw InconsistentModelError("omega is not the Kahler form of the unitary coframe");

  const auto& fa = *cx.algebra;
  cx.L = GradedOperator(cx.space, fa.lefschetz(), 2, algebra::Bidegree{1, 1});
  cx.Lambda = GradedOperator(cx.space, fa.dual_lefschetz(), -2, algebra::Bidegree{-1, -1});
  cx.star = GradedOperator(cx.space, fa.star(), 0, std::nullopt);
  cx.J = GradedOperator(cx.space, fa.j_op(), 0, algebra::Bidegree{0, 0});
  cx.id = GradedOperator::identity(cx.space);
  cx.conj_matrix = CMat::Zero(dim, dim);
  for (int x = 0; x < dim; ++x) cx.conj_matrix(S.conj_index(x), x) = S.conj_sign(x);
  return cx;
}

SplitDifferential split_differential(const InvariantComplex& cx) {
  return {cx.d.component({2, -1}), cx.d.component({1, 0}), cx.d.component({0, 1}), cx.d.component({-1, 2})};
}

// -------------------------------------------------------------- Nijenhuis

RVec nijenhuis(const LieModel& m, const RVec& x, const RVec& y) {
  const RVec jx = m.J * x, jy = m.J * y;
  return m.bracket(x, y) + m.J * m.bracket(x, jy) + m.J * m.bracket(jx, y) - m.bracket(jx, jy);
}

NijenhuisData nijenhuis_tensor(const LieModel& m, const InvariantComplex& cx) {
  NijenhuisData out;
  const int d = m.dim;
  out.N.assign(d, RMat::Zero(d, d));
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      RVec v = nijenhuis(m, RVec::Unit(d, a), RVec::Unit(d, b));
      for (int c = 0; c < d; ++c) out.N[c](a, b) = v(c);
    }
  const RMat ginv = m.g.inverse();
  double sq = 0;
  for (int a = 0; a < d; ++a)
    for (int a2 = 0; a2 < d; ++a2)
      for (int b = 0; b < d; ++b)
        for (int b2 = 0; b2 < d; ++b2) {
          if (ginv(a, a2) == 0 || ginv(b, b2) == 0) continue;
          RVec u(d), v(d);
          for (int c = 0; c < d; ++c) {
            u(c) = out.N[c](a, b);
            v(c) = out.N[c](a2, b2);
          }
          sq += ginv(a, a2) * ginv(b, b2) * u.dot(m.g * v);
        }
  out.norm_sq = sq;
  std::vector<CVec> images(d, CVec::Zero(1 << d));
  for (int c = 0; c < d; ++c)
    for (int a = 0; a < d; ++a)
      for (int b = a + 1; b < d; ++b) images[c]((Mask{1} << a) | (Mask{1} << b)) = out.N[c](a, b);
  out.dual_real = ext::odd_derivation(images, d);
  out.dual = GradedOperator(cx.space, cx.to_bigraded(out.dual_real), 1, std::nullopt);
  out.sup = op_norm(CMat((cx.mu + cx.mubar).matrix()));
  return out;
}

// -------------------------------------------------------------- curvature

CurvatureData levi_civita(const LieModel& m) {
  CurvatureData out;
  const int d = m.dim;
  const RMat ginv = m.g.inverse();
  out.nabla.assign(d, RMat::Zero(d, d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      RVec x = RVec::Unit(d, i), y = RVec::Unit(d, j);
      RVec low(d);  // g(nabla_x y, e_l)
      for (int l = 0; l < d; ++l) {
        RVec z = RVec::Unit(d, l);
        low(l) = 0.5 * (m.bracket(x, y).dot(m.g * z) - m.bracket(y, z).dot(m.g * x) + m.bracket(z, x).dot(m.g * y));
      }
      out.nabla[i].col(j) = ginv * low;
    }
  double tors = 0, met = 0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      RVec t = out.nabla[i].col(j) - out.nabla[j].col(i) - m.bracket(RVec::Unit(d, i), RVec::Unit(d, j));
      tors = std::max(tors, t.cwiseAbs().maxCoeff());
    }
  for (int i = 0; i < d; ++i) {
    RMat a = m.g * out.nabla[i];
    met = std::max(met, (a + a.transpose()).cwiseAbs().maxCoeff());
  }
  out.torsion_residual = tors;
  out.metric_residual = met;

  out.curv.assign(d * d, RMat::Zero(d, d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      RMat r = out.nabla[i] * out.nabla[j] - out.nabla[j] * out.nabla[i];
      RVec br = m.bracket(RVec::Unit(d, i), RVec::Unit(d, j));
      for (int k = 0; k < d; ++k) r -= br(k) * out.nabla[k];
      out.curv[i * d + j] = r;
    }
  out.nabla_j.resize(d);
  for (int i = 0; i < d; ++i) out.nabla_j[i] = out.nabla[i] * m.J - m.J * out.nabla[i];
  return out;
}

namespace {

// Rm(i,j,k,l) = g(R(e_i,e_j)e_k, e_l)
double rm(const LieModel& m, const CurvatureData& c, int i, int j, int k, int l) {
  const int d = m.dim;
  return (c.curv[i * d + j].col(k)).dot(m.g.col(l));
}

CMat curvature_of(const LieModel& m, const CurvatureData& c, const CVec& x, const CVec& y) {
  const int d = m.dim;
  CMat r = CMat::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      cd w = x(i) * y(j);
      if (w != cd(0.0)) r += w * c.curv[i * d + j].cast<cd>();
    }
  return r;
}

}  // namespace

cd curvature_form(const LieModel& m, const CurvatureData& c, const CVec& x, const CVec& y, const CVec& z,
                  const CVec& w) {
  CVec rw = curvature_of(m, c, x, y) * w;
  return (rw.transpose() * m.g.cast<cd>() * z)(0);
}

double sectional_curvature(const LieModel& m, const CurvatureData& c, const RVec& x, const RVec& y) {
  const CVec xc = x.cast<cd>(), yc = y.cast<cd>();
  double num = std::real(curvature_form(m, c, xc, yc, xc, yc));
  double den = x.dot(m.g * x) * y.dot(m.g * y) - std::pow(x.dot(m.g * y), 2);
  return num / den;
}

double complex_sectional_curvature(const LieModel& m, const CurvatureData& c, const CVec& x, const CVec& y) {
  const CMat g = m.g.cast<cd>();
  auto gb = [&](const CVec& a, const CVec& b) -> cd { return (a.transpose() * g * b)(0); };
  const CVec xb = x.conjugate(), yb = y.conjugate();
  cd num = curvature_form(m, c, x, y, xb, yb);
  cd den = gb(x, xb) * gb(y, yb) - gb(x, yb) * gb(y, xb);
  return std::real(num / den);
}

CurvatureData curvature_report(const LieModel& m, int samples, std::uint64_t seed) {
  if (samples < 1) throw ArgumentError("curvature_report: samples must be positive");
  CurvatureData out = levi_civita(m);
  const int d = m.dim;
  double sym = 0, bianchi = 0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          double v = rm(m, out, i, j, k, l);
          sym = std::max(sym, std::abs(v + rm(m, out, j, i, k, l)));
          sym = std::max(sym, std::abs(v + rm(m, out, i, j, l, k)));
          sym = std::max(sym, std::abs(v - rm(m, out, k, l, i, j)));
          bianchi = std::max(bianchi, std::abs(v + rm(m, out, j, k, i, l) + rm(m, out, k, i, j, l)));
        }
  out.symmetry_residual = sym;
  out.bianchi_residual = bianchi;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  auto rvec = [&] {
    RVec v(d);
    for (int i = 0; i < d; ++i) v(i) = nd(rng);
    return v;
  };
  auto area2 = [&](const RVec& x, const RVec& y) {
    return x.dot(m.g * x) * y.dot(m.g * y) - std::pow(x.dot(m.g * y), 2);
  };
  out.k_min = 1e300;
  out.k_max = -1e300;
  // coordinate planes first, then random planes
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      double s = sectional_curvature(m, out, RVec::Unit(d, i), RVec::Unit(d, j));
      out.k_min = std::min(out.k_min, s);
      out.k_max = std::max(out.k_max, s);
    }
  for (int t = 0; t < samples; ++t) {
    RVec x, y;
    do {
      x = rvec();
      y = rvec();
    } while (area2(x, y) < 1e-12);
    double s = sectional_curvature(m, out, x, y);
    out.k_min = std::min(out.k_min, s);
    out.k_max = std::max(out.k_max, s);
  }
  out.kc_min = 1e300;
  out.kc_max = -1e300;
  const CMat g = m.g.cast<cd>();
  for (int t = 0; t < samples; ++t) {
    const bool real_case = (t % 2) == 0;
    CVec x, y;
    RVec xr, a, b;
    double den;
    do {
      xr = rvec();
      a = rvec();
      b = rvec();
      x = real_case ? CVec(xr.cast<cd>()) : CVec(xr.cast<cd>() + kI * rvec().cast<cd>());
      y = a.cast<cd>() + kI * b.cast<cd>();
      CVec xb = x.conjugate(), yb = y.conjugate();
      auto gb = [&](const CVec& u, const CVec& v) -> cd { return (u.transpose() * g * v)(0); };
      den = std::real(gb(x, xb) * gb(y, yb) - gb(x, yb) * gb(y, xb));
    } while (den < 1e-12);
    double kc = complex_sectional_curvature(m, out, x, y);
    out.kc_min = std::min(out.kc_min, kc);
    out.kc_max = std::max(out.kc_max, kc);
    if (real_case) {
      const CVec xc = xr.cast<cd>(), ac = a.cast<cd>(), bc = b.cast<cd>();
      double split = std::real(curvature_form(m, out, xc, ac, xc, ac)) + std::real(curvature_form(m, out, xc, bc, xc, bc));
      double whole = std::real(curvature_form(m, out, x, y, x.conjugate(), y.conjugate()));
      out.real_plane_residual = std::max(out.real_plane_residual, std::abs(split - whole) / std::max(1.0, std::abs(whole)));
    }
  }
  out.samples = samples;
  return out;
}

NablaJReport nabla_j_identity_check(const LieModel& m, const CurvatureData& curv) {
  NablaJReport r;
  const int d = m.dim, n = m.n;
  const RMat ginv = m.g.inverse();
  double nj = 0;
  for (int i = 0; i < d; ++i)
    for (int i2 = 0; i2 < d; ++i2) {
      if (ginv(i, i2) == 0) continue;
      RMat M = curv.nabla_j[i].transpose() * m.g * curv.nabla_j[i2];
      nj += ginv(i, i2) * ginv.cwiseProduct(M).sum();
    }
  r.nabla_j_sq = nj;

  double nsq = 0, triple = 0;
  std::vector<RVec> N(d * d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) N[a * d + b] = nijenhuis(m, RVec::Unit(d, a), RVec::Unit(d, b));
  for (int a = 0; a < d; ++a)
    for (int a2 = 0; a2 < d; ++a2)
      for (int b = 0; b < d; ++b)
        for (int b2 = 0; b2 < d; ++b2)
          if (ginv(a, a2) != 0 && ginv(b, b2) != 0)
            nsq += ginv(a, a2) * ginv(b, b2) * N[a * d + b].dot(m.g * N[a2 * d + b2]);
  r.quarter_n_sq = 0.25 * nsq;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int z = 0; z < d; ++z) {
        double lhs = N[a * d + b].dot(m.g * (m.J * RVec::Unit(d, z)));
        double rhs = -2.0 * (curv.nabla_j[z] * RVec::Unit(d, a)).dot(m.g * RVec::Unit(d, b));
        triple = std::max(triple, std::abs(lhs - rhs));
      }
  r.triple_residual = triple;
  r.residual_nj = std::abs(r.nabla_j_sq - r.quarter_n_sq);

  // curvature sum over a unitary (1,0)-frame: vectors dual to the coframe
  CMat T = unitary_coframe(m.J, m.g);
  CMat Tinv = T.inverse();
  cd sum = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      CVec zi = Tinv.col(i), zj = Tinv.col(j);
      sum += curvature_form(m, curv, zi, zj, zi.conjugate(), zj.conjugate());
    }
  r.curvature_sum = -8.0 * std::real(sum);
  r.residual_curvature = std::abs(r.nabla_j_sq - r.curvature_sum);

  if (curv.k_max < 0) {
    r.pinched = true;
    r.K = -curv.k_max;
    r.delta = curv.k_min / curv.k_max;
    r.pinching_bound = 10.0 * n * n * r.delta * r.K;
  }
  return r;
}

WeitzenbockData weitzenbock_one_forms(const LieModel& m, const InvariantComplex& cx, const CurvatureData& curv) {
  if (!is_unimodular(m)) throw PreconditionError("Weitzenbock check needs a unimodular Lie algebra");
  WeitzenbockData w;
  const int d = m.dim;
  const RMat ginv = m.g.inverse();
  // Hodge Laplacian on invariant 1-forms, real coefficients
  CMat lap_big = cx.laplacian(cx.d).matrix();
  CMat lap_real = cx.to_real * lap_big * cx.from_real;
  w.laplacian = RMat(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) w.laplacian(i, j) = std::real(lap_real(Mask{1} << i, Mask{1} << j));

  std::vector<RMat> A(d);
  for (int i = 0; i < d; ++i) A[i] = -curv.nabla[i].transpose();
  w.rough = RMat::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      if (ginv(i, j) == 0) continue;
      RMat Av = RMat::Zero(d, d);
      RVec v = curv.nabla[i].col(j);
      for (int k = 0; k < d; ++k) Av += v(k) * A[k];
      w.rough -= ginv(i, j) * (A[i] * A[j] - Av);
    }
  RMat ric = RMat::Zero(d, d);  // Ric(e_j, e_l)
  for (int j = 0; j < d; ++j)
    for (int l = 0; l < d; ++l)
      for (int k = 0; k < d; ++k) ric(j, l) += curv.curv[k * d + j](k, l);
  w.ricci = (ginv * ric).transpose();
  w.residual = (w.laplacian - w.rough - w.ricci).cwiseAbs().maxCoeff();
  return w;
}

}  // namespace akh::lie
