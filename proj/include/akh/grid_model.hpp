#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "akh/bigraded_algebra.hpp"
#include "akh/types.hpp"

// Periodic central-difference calculus on T^4 (n = 2) with varying almost
// Kahler structure. Forms are stored per degree, point-major, with
// coefficients in the pointwise unitary bigraded basis.
namespace akh::grid {

using algebra::Bidegree;

struct JPerturbation {
  std::array<int, 2> axis_pair{2, 3};  // 1-based rotation plane
  double amplitude = 0.0;
  int mode = 1;
  int axis = 1;  // 1-based coordinate the angle depends on
};

struct OmegaPerturbation {
  double amplitude = 0.0;
  int mode = 1;
  std::string kind = "exact";  // "exact": omega0 + d(theta_omega); "raw": adds a non-closed term
};

/// f = offset + amplitude * sin(2 pi mode x_axis); (A, B) are the declared
/// gradient-domination constants |df|^2 <= A + B f.
struct FunctionRecipe {
  double offset = 2.0;
  double amplitude = 0.0;
  int mode = 1;
  int axis = 2;
  double A = 0.0;
  double B = 0.0;
};

/// theta = sum_a amplitudes[a] sin(2 pi mode x_{a+1 mod 4}) dx^a.
struct ThetaRecipe {
  std::array<double, 4> amplitudes{};
  int mode = 1;
};

struct GridRecipe {
  std::string name;
  int N = 8;
  std::optional<JPerturbation> j;
  std::optional<OmegaPerturbation> omega;
  std::optional<FunctionRecipe> f;
  std::optional<ThetaRecipe> theta;

  /// Largest trigonometric mode among the generating fields.
  int band() const;
  bool constant_structure() const;
};

GridRecipe parse_recipe(const std::string& toml_text, const std::string& source = "<string>");
/// Catalog name or path to a TOML file.
GridRecipe load_recipe(const std::string& name_or_path);
std::vector<std::string> recipe_catalog_names();
bool is_recipe_catalog_name(const std::string& name);
const std::string& recipe_catalog_source(const std::string& name);
/// True when the text parses as TOML with a [grid] table.
bool looks_like_recipe(const std::string& toml_text);

/// Structure data at one field sample.
struct FieldPoint {
  RMat J, g, omega;  // 4x4 real; omega = J^T g
  CMat T, Tinv;      // unitary coframe rows dz_1, dz_2, conjugates
  double vol = 1.0;  // sqrt(det g)
  std::array<CMat, 5> phi;           // degree k: real coefficients <- bigraded
  std::array<CMat, 5> phi_inv;       // bigraded <- real
  std::array<CMat, 5> phi_inv_h;     // vol * phi_inv^H (adjoint, first half)
  std::array<CMat, 5> phi_h_by_vol;  // phi^H / vol (adjoint, second half)
};

class GridModel {
 public:
  GridRecipe recipe;
  int N = 0;
  double h = 0.0;
  std::size_t points = 0;
  std::vector<int> active_axes;  // 0-based axes the structure depends on
  std::vector<FieldPoint> fields;

  std::size_t field_index(std::size_t point) const;
  const FieldPoint& at(std::size_t point) const { return fields[field_index(point)]; }
  std::array<int, 4> coords(std::size_t point) const;
  std::size_t point_of(const std::array<int, 4>& c) const;
  std::size_t stride(int axis) const;
  std::size_t neighbor(std::size_t point, int axis, int step) const;
  bool constant_structure() const { return active_axes.empty(); }

  /// Pointwise validation residuals (max over points).
  double j_square_residual = 0, compatibility_residual = 0, omega_residual = 0, closedness_residual = 0;
  double min_metric_eigenvalue = 0;
};

/// Build and validate. n_override > 0 replaces the recipe's N.
GridModel build_grid(const GridRecipe& recipe, int n_override = 0);

/// Number of coefficients of a k-form (n = 2): C(4, k).
int comps(int k);
/// Bidegree of component i of degree k in the bigraded order.
Bidegree comp_bidegree(int k, int i);

struct GridForm {
  int N = 0;
  std::size_t points = 0;
  std::array<std::vector<cd>, 5> deg;  // empty vector means zero

  bool has(int k) const { return !deg[k].empty(); }
  cd* ptr(int k, std::size_t point) { return deg[k].data() + point * comps(k); }
  const cd* ptr(int k, std::size_t point) const { return deg[k].data() + point * comps(k); }
  std::vector<cd>& ensure(int k);
};

GridForm zero_form(const GridModel& gm);
GridForm operator+(const GridForm& a, const GridForm& b);
GridForm operator-(const GridForm& a, const GridForm& b);
GridForm operator*(cd s, const GridForm& a);
void axpy(cd s, const GridForm& x, GridForm& y);
GridForm project(const GridForm& a, Bidegree b);
GridForm project_degree(const GridForm& a, int k);
bool block_is_zero(const GridForm& a, Bidegree b);

/// Global pairing h^4 sum vol <a, b>_x (conjugate-linear in b).
cd inner(const GridModel& gm, const GridForm& a, const GridForm& b);
double norm(const GridModel& gm, const GridForm& a);
/// max_x |a(x)|.
double sup_norm(const GridModel& gm, const GridForm& a);
/// Pointwise |a(x)|^2 as a real function sampled on the grid.
std::vector<double> pointwise_norm_sq(const GridModel& gm, const GridForm& a);

/// Exterior derivative via central differences of the real coefficients.
GridForm d(const GridModel& gm, const GridForm& a);
/// Adjoint of d for the global pairing.
GridForm d_star(const GridModel& gm, const GridForm& a);
/// Component of d with the given bidegree shift: sum_b P_{b+s} d P_b.
GridForm piece(const GridModel& gm, Bidegree shift, const GridForm& a);
/// Adjoint of piece(shift).
GridForm piece_adjoint(const GridModel& gm, Bidegree shift, const GridForm& a);

/// Constant matrix over the n = 2 form space applied at every point (the
/// pointwise frame is unitary, so L, Lambda, star and J are constant).
GridForm apply_pointwise(const GridModel& gm, const CMat& m, const GridForm& a);
/// Pointwise wedge product.
GridForm wedge(const GridModel& gm, const GridForm& a, const GridForm& b);

/// Form from real coordinate coefficients: value(k_index, x) over subsets(4, k).
GridForm from_real_coefficients(const GridModel& gm, int k,
                                const std::function<cd(int, const std::array<double, 4>&)>& value);
/// Real coordinate coefficients of a degree-k form.
std::vector<cd> to_real_coefficients(const GridModel& gm, const GridForm& a, int k);

/// Seeded smooth trigonometric k-form (complex coefficients; each term has wave
/// vector in {-1,0,1}^4 with at most two nonzero entries);
/// the same seed gives the same continuum form at every N.
GridForm trig_form(const GridModel& gm, int k, std::uint64_t seed);
/// Recipe function f as a 0-form; throws if the recipe has none.
GridForm function_field(const GridModel& gm);
/// Recipe 1-form theta; zero if the recipe has none.
GridForm theta_field(const GridModel& gm);

/// Derivation dual of N_J on forms, with N_J from central differences of the J field.
GridForm nijenhuis_dual(const GridModel& gm, const GridForm& a);

/// Harmonic dimensions of a constant-structure grid from the Fourier symbols of
/// the difference operators.
struct FourierHarmonicDims {
  std::array<int, 5> betti_raw{}, betti_resolved{};
  // indexed by p * 3 + q
  std::array<int, 9> del_raw{}, del_resolved{}, delbar_raw{}, delbar_resolved{}, joint_raw{}, joint_resolved{};
  double min_nonzero_eigenvalue = 0;
};
FourierHarmonicDims fourier_harmonic_dims(const GridModel& gm, double tol = 1e-6);

}  // namespace akh::grid
