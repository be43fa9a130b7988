#include <doctest.h>

#include <cmath>
#include <numbers>

#include "akh/errors.hpp"
#include "akh/exterior.hpp"
#include "akh/grid_model.hpp"

using namespace akh;
using namespace akh::grid;

namespace {

GridRecipe varying() { return load_recipe("grid-varying"); }

double rel(double num, double den) { return num / std::max(den, 1e-300); }

}  // namespace

TEST_CASE("grid recipes parse strictly") {
  auto flat = load_recipe("grid-flat");
  CHECK(flat.N == 8);
  CHECK(flat.constant_structure());
  CHECK_FALSE(varying().constant_structure());
  CHECK_THROWS_AS(parse_recipe("[grid]\nN = 7\n"), RecipeError);
  CHECK_THROWS_AS(parse_recipe("[grid]\nN = 8\nfoo = 1\n"), ParseError);
  CHECK_THROWS_AS(parse_recipe("[grid]\nN = 8\n[fields]\nf = { amplitude = 1, colour = 2 }\n"), ParseError);
  CHECK(looks_like_recipe(recipe_catalog_source("grid-flat")));
}

TEST_CASE("non-closed omega perturbation is rejected") {
  auto r = varying();
  r.omega->kind = "raw";
  try {
    build_grid(r, 8);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("closedness") != std::string::npos);
  }
}

TEST_CASE("varying grid structure is almost Kahler pointwise") {
  auto gm = build_grid(varying(), 8);
  CHECK(gm.j_square_residual < 1e-12);
  CHECK(gm.compatibility_residual < 1e-12);
  CHECK(gm.omega_residual < 1e-12);
  CHECK(gm.min_metric_eigenvalue > 0.5);
  // bigraded coefficients of the Kahler form are constant in the unitary frame
  algebra::FrameAlgebra fa(algebra::HermitianFrame::orthonormal(2));
  const auto& S = *algebra::FormSpace::get(2);
  auto idx = S.degree_indices(2);
  GridForm om = zero_form(gm);
  auto& v = om.ensure(2);
  for (std::size_t p = 0; p < gm.points; ++p)
    for (int i = 0; i < 6; ++i) v[p * 6 + i] = fa.kahler()(idx[i]);
  auto real = to_real_coefficients(gm, om, 2);
  auto masks = ext::subsets(4, 2);
  double err = 0;
  for (std::size_t p = 0; p < gm.points; p += 37)
    for (int i = 0; i < 6; ++i) {
      auto b = ext::bits(masks[i]);
      err = std::max(err, std::abs(real[p * 6 + i] - gm.at(p).omega(b[0], b[1])));
    }
  CHECK(err < 1e-12);
  auto a = trig_form(gm, 1, 3);
  auto diff = wedge(gm, om, a) - apply_pointwise(gm, fa.lefschetz(), a);
  CHECK(sup_norm(gm, diff) < 1e-12 * sup_norm(gm, a));
}

TEST_CASE("discrete d squares to zero and d_star is its adjoint") {
  auto gm = build_grid(varying(), 8);
  for (int k = 0; k <= 2; ++k) {
    auto a = trig_form(gm, k, 11 + k);
    auto b = trig_form(gm, k + 1, 21 + k);
    auto da = d(gm, a);
    CHECK(norm(gm, d(gm, da)) < 1e-12 * norm(gm, da));
    cd lhs = inner(gm, da, b), rhs = inner(gm, a, d_star(gm, b));
    CHECK(rel(std::abs(lhs - rhs), norm(gm, a) * norm(gm, b)) < 1e-12);
  }
  auto f = function_field(gm);
  auto pieces = piece(gm, {1, 0}, f) + piece(gm, {0, 1}, f);
  CHECK(sup_norm(gm, pieces - d(gm, f)) < 1e-13);
}

TEST_CASE("central differences converge at second order") {
  auto recipe = load_recipe("grid-flat");
  auto err_at = [&](int N) {
    auto gm = build_grid(recipe, N);
    auto f = from_real_coefficients(gm, 0, [](int, const std::array<double, 4>& x) {
      return cd(std::sin(2 * std::numbers::pi * x[0]));
    });
    auto exact = from_real_coefficients(gm, 1, [](int i, const std::array<double, 4>& x) {
      return i == 0 ? cd(2 * std::numbers::pi * std::cos(2 * std::numbers::pi * x[0])) : cd(0);
    });
    return sup_norm(gm, d(gm, f) - exact);
  };
  double ratio = err_at(8) / err_at(16);
  CHECK(ratio == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("Fourier symbols give the torus Betti numbers") {
  auto gm = build_grid(load_recipe("grid-flat"), 8);
  auto dims = fourier_harmonic_dims(gm);
  const int betti[5] = {1, 4, 6, 4, 1};
  const int binom[5] = {1, 4, 6, 4, 1};
  for (int k = 0; k <= 4; ++k) {
    CHECK(dims.betti_resolved[k] == betti[k]);
    CHECK(dims.betti_raw[k] == 16 * binom[k]);
  }
  for (int p = 0; p <= 2; ++p)
    for (int q = 0; q <= 2; ++q) {
      const int h = (p == 1 ? 2 : 1) * (q == 1 ? 2 : 1);
      CHECK(dims.del_resolved[p * 3 + q] == h);
      CHECK(dims.delbar_resolved[p * 3 + q] == h);
    }
  CHECK_THROWS_AS(fourier_harmonic_dims(build_grid(varying(), 8)), PreconditionError);
}

TEST_CASE("mu vanishes only for integrable structures") {
  auto flat = build_grid(load_recipe("grid-flat"), 8);
  auto a = trig_form(flat, 1, 5);
  CHECK(sup_norm(flat, piece(flat, {2, -1}, a)) < 1e-13);
  CHECK(sup_norm(flat, nijenhuis_dual(flat, a)) < 1e-13);

  auto gm = build_grid(varying(), 8);
  auto b = trig_form(gm, 1, 5);
  CHECK(norm(gm, piece(gm, {2, -1}, b)) > 1e-3 * norm(gm, b));
}

TEST_CASE("mu plus mubar tracks the Nijenhuis dual at second order") {
  auto r = varying();
  auto err_at = [&](int N) {
    auto gm = build_grid(r, N);
    auto f = from_real_coefficients(gm, 0, [](int, const std::array<double, 4>& x) {
      return cd(std::cos(2 * std::numbers::pi * (x[0] + x[2])));
    });
    auto a = d(gm, f) + trig_form(gm, 1, 9);
    auto lhs = piece(gm, {2, -1}, a) + piece(gm, {-1, 2}, a);
    auto rhs = cd(-0.25) * nijenhuis_dual(gm, a);
    return norm(gm, lhs - rhs) / norm(gm, a);
  };
  double e8 = err_at(8), e16 = err_at(16);
  CHECK(e16 < 0.05);
  CHECK(e8 / e16 > 3.0);
}
