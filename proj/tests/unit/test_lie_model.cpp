#include <doctest.h>

#include <cmath>

#include "akh/exterior.hpp"
#include "akh/lie_model.hpp"
#include "test_helpers.hpp"

using namespace akh;
using namespace akh::lie;

namespace {

const std::string kData = AKH_TEST_DATA_DIR;

std::string model_text(const std::string& dcoeffs, const std::string& j) {
  return "[model]\nname = \"t\"\ndim = 4\n[structure]\ndcoeffs = " + dcoeffs + "\n[metric]\ng = \"identity\"\n[acs]\nJ = " +
         j + "\n";
}

const std::string kJ0 = "[[0.0,-1.0,0.0,0.0],[1.0,0.0,0.0,0.0],[0.0,0.0,0.0,-1.0],[0.0,0.0,1.0,0.0]]";

double norm(const CMat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

TEST_CASE("catalog models load and validate") {
  for (const auto& name : catalog_names()) {
    auto m = load_model(name);
    CHECK(m.name == name);
    CHECK(jacobi_residual(m) == 0.0);
    CHECK(domega_residual(m) == 0.0);
    // omega^n coefficient of the volume is nonzero
    CHECK(std::abs(m.omega.determinant()) > 0.5);
  }
  auto kt = load_model("kodaira-thurston");
  CHECK(kt.c[3](0, 1) == -1.0);
  CHECK(kt.c[3](1, 0) == 1.0);
  // omega = eps14 + eps23
  CHECK(kt.omega(0, 3) == 1.0);
  CHECK(kt.omega(1, 2) == 1.0);
  CHECK(kt.omega(0, 1) == 0.0);
}

TEST_CASE("model validation errors name the invariant") {
  auto invariant_of = [](const std::string& text) -> std::string {
    try {
      parse_model(text);
    } catch (const ValidationError& e) {
      return e.invariant();
    }
    return "";
  };
  CHECK(invariant_of(model_text("[[4.0,1.0,2.0,1.0]]", kJ0)) == "closedness");
  CHECK(invariant_of(model_text("[[4.0,1.0,2.0,1.0],[1.0,3.0,4.0,1.0]]", kJ0)) == "jacobi");
  CHECK(invariant_of(model_text("[]", "[[0.0,-2.0,0.0,0.0],[1.0,0.0,0.0,0.0],[0.0,0.0,0.0,-1.0],[0.0,0.0,1.0,0.0]]")) ==
        "complex-structure");
  std::string neg = "[model]\nname = \"t\"\ndim = 2\n[metric]\ng = [[-1.0,0.0],[0.0,-1.0]]\n[acs]\nJ = [[0.0,-1.0],[1.0,0.0]]\n";
  CHECK(invariant_of(neg) == "metric");
  std::string incompat = "[model]\nname = \"t\"\ndim = 2\n[metric]\ng = [[1.0,0.0],[0.0,2.0]]\n[acs]\nJ = [[0.0,-1.0],[1.0,0.0]]\n";
  CHECK(invariant_of(incompat) == "compatibility");
  CHECK_THROWS_AS(load_model(kData + "/bad_domega.toml"), ValidationError);
  CHECK_THROWS_AS(parse_model(model_text("[]", kJ0) + "extra = 1.0\n"), ParseError);
  CHECK_THROWS_AS(parse_model("[model]\nname = \"t\"\ndim = 3\n"), ParseError);
  CHECK_THROWS_AS(parse_model("this is not toml ["), ParseError);
  CHECK_THROWS_AS(parse_model(model_text("[[4.0,2.0,1.0,1.0]]", kJ0)), ParseError);
  CHECK_THROWS_AS(load_model("no-such-model"), ArgumentError);
}

TEST_CASE("unitary coframe of Kodaira-Thurston") {
  auto m = load_model("kodaira-thurston");
  CMat T = unitary_coframe(m.J, m.g);
  const double s = 1.0 / std::sqrt(2.0);
  CMat expect = CMat::Zero(4, 4);
  expect(0, 0) = s;
  expect(0, 3) = cd(0, s);
  expect(1, 1) = s;
  expect(1, 2) = cd(0, s);
  expect.row(2) = expect.row(0).conjugate();
  expect.row(3) = expect.row(1).conjugate();
  CHECK(norm(T - expect) < 1e-15);
}

TEST_CASE("Chevalley-Eilenberg differential") {
  auto kt = load_model("kodaira-thurston");
  RMat d = ce_differential_real(kt);
  // d eps4 = eps1 ^ eps2
  CHECK(d(0b0011, 0b1000) == 1.0);
  CHECK((d * d).cwiseAbs().maxCoeff() == 0.0);
  RMat d1(16, 4);
  for (int k = 0; k < 4; ++k) d1.col(k) = d.col(1 << k);
  CHECK(Eigen::FullPivLU<RMat>(d1).rank() == 1);
  CHECK(ce_differential_real(load_model("torus4")).cwiseAbs().maxCoeff() == 0.0);

  auto n6 = load_model("nilpotent6");
  auto cx = build_complex(n6);
  std::mt19937_64 rng(1);
  CVec a = CVec::Zero(64);
  for (int x : cx.space->degree_indices(2)) a(x) = cd(rng() % 7 - 3.0, rng() % 5 - 2.0);
  CHECK((cx.d.matrix() * (cx.d.matrix() * a)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("split differential") {
  auto torus = build_complex(load_model("torus4"));
  CHECK(norm(torus.mu.matrix()) == 0.0);
  CHECK(norm(torus.del.matrix()) == 0.0);

  for (const auto& name : catalog_names()) {
    auto cx = build_complex(load_model(name));
    CMat sum = cx.mu.matrix() + cx.del.matrix() + cx.delbar.matrix() + cx.mubar.matrix();
    CHECK(norm(sum - cx.d.matrix()) < 1e-13);
    // conjugation swaps the pieces
    const CMat& P = cx.conj_matrix;
    CHECK(norm(P * cx.del.matrix().conjugate() * P - cx.delbar.matrix()) < 1e-13);
    CHECK(norm(P * cx.mu.matrix().conjugate() * P - cx.mubar.matrix()) < 1e-13);
    // zeroth order: commutes with constants
    CMat c = cx.id.matrix() * 3.5;
    CHECK(norm(cx.mu.matrix() * c - c * cx.mu.matrix()) < 1e-13);
  }
  auto kt = build_complex(load_model("kodaira-thurston"));
  CHECK(norm(kt.mu.block(0, 1)) > 0.1);
  auto n6 = build_complex(load_model("nilpotent6"));
  CHECK(norm(n6.mu.block(0, 1)) > 0.1);
}

TEST_CASE("Nijenhuis tensor and its dual") {
  for (const auto& name : catalog_names()) {
    auto m = load_model(name);
    auto cx = build_complex(m);
    auto nd = nijenhuis_tensor(m, cx);
    CMat lhs = cx.mu.matrix() + cx.mubar.matrix() + 0.25 * nd.dual.matrix();
    CHECK(norm(lhs) < 1e-10);
    for (int a = 0; a < m.dim; ++a)
      for (int b = 0; b < m.dim; ++b) {
        RVec x = RVec::Unit(m.dim, a), y = RVec::Unit(m.dim, b);
        CHECK((nijenhuis(m, x, y) + nijenhuis(m, y, x)).cwiseAbs().maxCoeff() < 1e-14);
        CHECK((nijenhuis(m, m.J * x, y) + m.J * nijenhuis(m, x, y)).cwiseAbs().maxCoeff() < 1e-14);
      }
    if (name == "torus4") {
      CHECK(nd.norm_sq == 0.0);
    } else {
      CHECK(nd.norm_sq > 0.1);
      CHECK(nd.sup > 0.1);
    }
  }
  // N(e1, e2) = -e4 on nilpotent6
  auto n6 = load_model("nilpotent6");
  RVec v = nijenhuis(n6, RVec::Unit(6, 0), RVec::Unit(6, 1));
  CHECK((v + RVec::Unit(6, 3)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("Levi-Civita connection and curvature") {
  auto torus = load_model("torus4");
  auto lc = levi_civita(torus);
  for (auto& m : lc.nabla) CHECK(m.cwiseAbs().maxCoeff() == 0.0);

  auto kt = load_model("kodaira-thurston");
  auto c = curvature_report(kt, 200);
  // nabla_{e1} e2 = -e4 / 2
  CHECK(std::abs(c.nabla[0](3, 1) + 0.5) < 1e-15);
  CHECK(c.torsion_residual < 1e-12);
  CHECK(c.metric_residual < 1e-12);
  CHECK(c.symmetry_residual < 1e-10);
  CHECK(c.bianchi_residual < 1e-10);
  CHECK(c.k_min < 0);
  CHECK(c.k_max > 0);
  CHECK(c.real_plane_residual < 1e-10);
  // K(e1,e2) = -3/4 |[e1,e2]|^2 for orthonormal e1,e2 with [e1,e2] central
  CHECK(std::abs(sectional_curvature(kt, c, RVec::Unit(4, 0), RVec::Unit(4, 1)) + 0.75) < 1e-14);
  CHECK(std::abs(sectional_curvature(kt, c, RVec::Unit(4, 0), RVec::Unit(4, 3)) - 0.25) < 1e-14);

  auto ch = load_model(kData + "/complex_hyperbolic4.toml");
  auto cc = curvature_report(ch, 2000);
  CHECK(cc.k_max < 0);
  CHECK(cc.symmetry_residual < 1e-10);
  CHECK(cc.bianchi_residual < 1e-10);
  CHECK(cc.k_min >= -1.0 - 1e-12);
  CHECK(cc.k_max <= -0.25 + 1e-12);
}

TEST_CASE("|nabla J|^2 = |N_J|^2 / 4") {
  for (const auto& name : catalog_names()) {
    auto m = load_model(name);
    auto c = curvature_report(m, 100);
    auto r = nabla_j_identity_check(m, c);
    CHECK(r.residual_nj < 1e-10);
    CHECK(r.triple_residual < 1e-10);
    CHECK_FALSE(r.pinched);
    if (name == "torus4") {
      CHECK(r.nabla_j_sq == 0.0);
      CHECK(r.curvature_sum == 0.0);
    }
  }
  auto ch = load_model(kData + "/complex_hyperbolic4.toml");
  auto c = curvature_report(ch, 500);
  auto r = nabla_j_identity_check(ch, c);
  CHECK(r.pinched);
  CHECK(r.nabla_j_sq < 1e-20);
  CHECK(r.nabla_j_sq <= r.pinching_bound);
}

TEST_CASE("Weitzenbock formula on invariant 1-forms") {
  for (const auto& name : catalog_names()) {
    auto m = load_model(name);
    auto cx = build_complex(m);
    auto c = levi_civita(m);
    auto w = weitzenbock_one_forms(m, cx, c);
    CHECK(w.residual < 1e-10);
  }
  auto ch = load_model(kData + "/complex_hyperbolic4.toml");
  CHECK_FALSE(is_unimodular(ch));
  CHECK_THROWS_AS(weitzenbock_one_forms(ch, build_complex(ch), levi_civita(ch)), PreconditionError);
}
