#pragma once

#include <array>
#include <random>
#include <string>
#include <vector>

#include "akh/bigraded_algebra.hpp"
#include "akh/operators.hpp"

namespace akh::lie {

using ops::GradedOperator;

/// Left-invariant almost Hermitian structure on a Lie algebra with basis e_1..e_dim.
struct LieModel {
  std::string name;
  int dim = 0;
  int n = 0;
  /// c[k](i, j): [e_i, e_j] = sum_k c[k](i, j) e_k
  std::vector<RMat> c;
  RMat g;
  RMat J;      // J(:, i) = J e_i
  RMat omega;  // omega(i, j) = g(J e_i, e_j)

  RVec bracket(const RVec& x, const RVec& y) const;
};

/// Parse and validate a model description (TOML).
LieModel parse_model(const std::string& toml_text, const std::string& source = "<string>");
/// Catalog name or path to a TOML file.
LieModel load_model(const std::string& name_or_path);
std::vector<std::string> catalog_names();
const std::string& catalog_source(const std::string& name);
bool is_catalog_name(const std::string& name);

/// Check every invariant; throws ValidationError naming the first violation.
void validate(const LieModel& m);
double jacobi_residual(const LieModel& m);
double domega_residual(const LieModel& m);

/// Unitary (1,0)-coframe: rows of T are dz_1..dz_n then their conjugates, as
/// combinations of the dual basis eps^k.
CMat unitary_coframe(const RMat& J, const RMat& g, std::vector<int>* pivots = nullptr,
                     const std::vector<int>* fixed_pivots = nullptr);

/// Exact operators of the invariant complex in the unitary bigraded basis.
struct InvariantComplex {
  std::shared_ptr<const algebra::FormSpace> space;
  std::shared_ptr<const algebra::FrameAlgebra> algebra;  // orthonormal frame
  CMat coframe;           // T
  CMat to_real;           // bigraded coefficients -> real mask coefficients
  CMat from_real;         // inverse of to_real
  CMat gram;              // pairing in the bigraded basis (identity up to rounding)
  RMat real_d;            // CE differential on mask-indexed real forms
  GradedOperator d, mu, del, delbar, mubar;
  GradedOperator L, Lambda, star, J, id;
  CMat conj_matrix;       // linear part of conjugation: conj(a) = P * conj(a_vec)

  GradedOperator adjoint(const GradedOperator& t) const { return ops::adjoint_of(t, gram); }
  GradedOperator laplacian(const GradedOperator& t) const { return ops::laplacian_of(t, gram); }
  CVec conjugate(const CVec& a) const { return conj_matrix * a.conjugate(); }
  CVec from_real_form(const RVec& mask_coeffs) const;
  /// Map a real mask-indexed operator into the bigraded basis.
  CMat to_bigraded(const CMat& real_op) const { return from_real * real_op * to_real; }
};

InvariantComplex build_complex(const LieModel& m);

/// CE differential on mask-indexed real forms (size 2^dim).
RMat ce_differential_real(const LieModel& m);

struct SplitDifferential {
  GradedOperator mu, del, delbar, mubar;
};
SplitDifferential split_differential(const InvariantComplex& cx);

struct NijenhuisData {
  std::vector<RMat> N;  // N[c](a, b) = eps^c(N_J(e_a, e_b))
  double norm_sq = 0;   // |N_J|^2 summed over ordered pairs in g
  double sup = 0;       // operator norm of mu + mubar
  CMat dual_real;       // derivation dual on real forms
  GradedOperator dual;  // same, bigraded
};
NijenhuisData nijenhuis_tensor(const LieModel& m, const InvariantComplex& cx);
RVec nijenhuis(const LieModel& m, const RVec& x, const RVec& y);

struct CurvatureData {
  std::vector<RMat> nabla;  // nabla[i](k, j): component k of nabla_{e_i} e_j
  std::vector<RMat> curv;   // curv[i*dim+j] = R(e_i, e_j) as a matrix
  std::vector<RMat> nabla_j;  // (nabla_{e_i} J)
  double torsion_residual = 0;
  double metric_residual = 0;
  double symmetry_residual = 0;
  double bianchi_residual = 0;
  double k_min = 0, k_max = 0;    // sampled sectional curvature
  double kc_min = 0, kc_max = 0;  // sampled complex sectional curvature
  double real_plane_residual = 0;  // split of K^C on planes containing a real vector
  int samples = 0;
};

CurvatureData levi_civita(const LieModel& m);
/// Riemann tensor, symmetries, and sampled curvature ranges.
CurvatureData curvature_report(const LieModel& m, int samples, std::uint64_t seed = 12345);

/// g(R(x, y) w, z), complex-bilinear.
cd curvature_form(const LieModel& m, const CurvatureData& cd_, const CVec& x, const CVec& y, const CVec& z,
                  const CVec& w);
double sectional_curvature(const LieModel& m, const CurvatureData& cd_, const RVec& x, const RVec& y);
double complex_sectional_curvature(const LieModel& m, const CurvatureData& cd_, const CVec& x, const CVec& y);

struct NablaJReport {
  double nabla_j_sq = 0;
  double quarter_n_sq = 0;
  double curvature_sum = 0;
  double residual_nj = 0;        // | |nabla J|^2 - |N|^2 / 4 |
  double residual_curvature = 0;  // | |nabla J|^2 - curvature sum |
  double triple_residual = 0;    // max | g(N(X,Y),JZ) + 2 g((nabla_Z J)X, Y) |
  bool pinched = false;
  double K = 0, delta = 0;
  double pinching_bound = 0;  // 10 n^2 delta K
};
NablaJReport nabla_j_identity_check(const LieModel& m, const CurvatureData& curv);

struct WeitzenbockData {
  RMat laplacian, rough, ricci;  // acting on coefficient columns of real 1-forms
  double residual = 0;
};
WeitzenbockData weitzenbock_one_forms(const LieModel& m, const InvariantComplex& cx, const CurvatureData& curv);
bool is_unimodular(const LieModel& m, double tol = 1e-12);

}  // namespace akh::lie
