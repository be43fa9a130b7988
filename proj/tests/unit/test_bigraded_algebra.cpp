#include <doctest.h>

#include <cmath>

#include "akh/bigraded_algebra.hpp"
#include "test_helpers.hpp"

using namespace akh;
using namespace akh::algebra;
using testing_util::binom;

TEST_CASE("basis enumeration order and dimensions") {
  auto b = basis_enumerate(2, 1, 1);
  std::vector<std::pair<MultiIndex, MultiIndex>> expected = {
      {{1}, {1}}, {{1}, {2}}, {{2}, {1}}, {{2}, {2}}};
  CHECK(b == expected);
  for (int n = 1; n <= 3; ++n)
    for (int p = 0; p <= n; ++p)
      for (int q = 0; q <= n; ++q) CHECK(basis_enumerate(n, p, q).size() == size_t(binom(n, p) * binom(n, q)));
  CHECK_THROWS_AS(basis_enumerate(2, 3, 0), DegreeRangeError);
  CHECK_THROWS_AS(basis_enumerate(2, 0, -1), DegreeRangeError);
  CHECK(FormSpace::get(3)->dim() == 64);
}

TEST_CASE("wedge signs and graded commutativity") {
  auto a = BigradedForm::basis(2, {1}, {1});
  auto b = BigradedForm::basis(2, {2}, {});
  auto ab = wedge(a, b);
  CHECK(ab.coefficient({1, 2}, {1}) == cd(-1.0));
  auto ba = wedge(b, a);
  CHECK(ba.coefficient({1, 2}, {1}) == cd(-1.0));  // even degree commutes
  auto z1 = BigradedForm::basis(2, {1}, {});
  CHECK(wedge(z1, z1).max_abs() == 0.0);

  std::mt19937_64 rng(7);
  for (int k = 0; k < 5; ++k) {
    auto x = testing_util::random_block(3, 1, 1, rng);
    auto y = testing_util::random_block(3, 0, 1, rng);
    auto z = testing_util::random_block(3, 1, 0, rng);
    CHECK((wedge(x, y) - wedge(y, x)).max_abs() < 1e-12);
    CHECK((wedge(y, z) + wedge(z, y)).max_abs() < 1e-12);
    CHECK((wedge(wedge(x, y), z) - wedge(x, wedge(y, z))).max_abs() < 1e-12);
  }
}

TEST_CASE("J acts by a power of i") {
  auto z = BigradedForm::basis(2, {1}, {});
  CHECK(apply_J(z).coefficient({1}, {}) == cd(0, -1));
  auto zb = BigradedForm::basis(2, {}, {2});
  CHECK(apply_J(zb).coefficient({}, {2}) == cd(0, 1));
  auto w = BigradedForm::basis(2, {1, 2}, {});
  CHECK(apply_J(w).coefficient({1, 2}, {}) == cd(-1, 0));
}

TEST_CASE("inner product conventions") {
  auto f = HermitianFrame::orthonormal(2);
  auto z1 = BigradedForm::basis(2, {1}, {});
  auto z2 = BigradedForm::basis(2, {2}, {});
  CHECK(std::abs(inner_product(z1, z1, f) - cd(1.0)) < 1e-15);
  CHECK(std::abs(inner_product(z1, z2, f)) < 1e-15);
  CHECK(std::abs(inner_product(z1 * cd(0, 2), z1, f) - cd(0, 2)) < 1e-15);
  CHECK(std::abs(inner_product(z1, z1 * cd(0, 2), f) - cd(0, -2)) < 1e-15);

  std::mt19937_64 rng(11);
  HermitianFrame g{2, testing_util::random_hpd(2, rng), 1.0};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      auto a = BigradedForm::basis(2, {i + 1}, {});
      auto b = BigradedForm::basis(2, {j + 1}, {});
      CHECK(std::abs(inner_product(a, b, g) - g.h(i, j)) < 1e-13);
      auto ab = BigradedForm::basis(2, {}, {i + 1});
      auto bb = BigradedForm::basis(2, {}, {j + 1});
      CHECK(std::abs(inner_product(ab, bb, g) - std::conj(g.h(i, j))) < 1e-13);
    }
  // Gram of (2,0): det of h
  auto top = BigradedForm::basis(2, {1, 2}, {});
  CHECK(std::abs(inner_product(top, top, g) - g.h.determinant()) < 1e-12);
}

TEST_CASE("frame validation") {
  HermitianFrame bad{2, CMat::Identity(2, 2), 1.0};
  bad.h(0, 1) = cd(0.5, 0.0);
  CHECK_THROWS_AS(bad.validate(), FrameError);
  HermitianFrame indef{2, CMat::Identity(2, 2), 1.0};
  indef.h(1, 1) = -1.0;
  CHECK_THROWS_AS(kahler_form(indef), FrameError);
  HermitianFrame wrong{2, CMat::Identity(3, 3), 1.0};
  CHECK_THROWS_AS(wrong.validate(), DimensionError);
}

TEST_CASE("Kahler and volume forms in the orthonormal frame") {
  for (int n = 1; n <= 3; ++n) {
    auto f = HermitianFrame::orthonormal(n);
    auto w = kahler_form(f);
    for (int j = 1; j <= n; ++j) CHECK(w.coefficient({j}, {j}) == cd(0, 1));
    CHECK(std::abs(inner_product(w, w, f) - cd(n)) < 1e-13);
    // dV = i^n (-1)^{n(n-1)/2} dz^{1..n} ^ dzbar^{1..n}
    MultiIndex all;
    for (int j = 1; j <= n; ++j) all.push_back(j);
    cd expect = std::pow(cd(0, 1), n) * ((n * (n - 1) / 2) % 2 ? -1.0 : 1.0);
    CHECK(std::abs(volume_form(f).coefficient(all, all) - expect) < 1e-14);
    CHECK(std::abs(inner_product(volume_form(f), volume_form(f), f) - cd(1.0)) < 1e-13);
  }
}

TEST_CASE("Hodge star: defining identity, involution and hand values") {
  auto f1 = HermitianFrame::orthonormal(1);
  auto z = BigradedForm::basis(1, {1}, {});
  CHECK(std::abs(hodge_star(z, f1).coefficient({1}, {}) - cd(0, -1)) < 1e-15);
  auto one = BigradedForm::basis(1, {}, {});
  CHECK((hodge_star(one, f1) - volume_form(f1)).max_abs() < 1e-15);

  std::mt19937_64 rng(3);
  for (int n = 1; n <= 3; ++n) {
    HermitianFrame f{n, testing_util::random_hpd(n, rng), 1.0};
    auto dv = volume_form(f);
    for (int trial = 0; trial < 3; ++trial)
      for (auto blk : FormSpace::get(n)->blocks()) {
        auto a = testing_util::random_block(n, blk.p, blk.q, rng);
        auto b = testing_util::random_block(n, blk.p, blk.q, rng);
        auto lhs = wedge(a, hodge_star(conjugate(b), f));
        auto rhs = dv * inner_product(a, b, f);
        CHECK((lhs - rhs).max_abs() < 1e-10);
        auto ss = hodge_star(hodge_star(a, f), f);
        double sign = (blk.total() % 2) ? -1.0 : 1.0;
        CHECK((ss - a * sign).max_abs() < 1e-10);
        auto sa = hodge_star(a, f);
        auto supp = sa.support(1e-12);
        REQUIRE(supp.size() == 1);
        CHECK(supp[0] == Bidegree{n - blk.q, n - blk.p});
      }
  }
}

TEST_CASE("dual Lefschetz: two routes and the sl2 weight") {
  std::mt19937_64 rng(5);
  for (int n = 1; n <= 3; ++n) {
    HermitianFrame f{n, testing_util::random_hpd(n, rng), 1.0};
    FrameAlgebra fa(f);
    CHECK((fa.dual_lefschetz() - fa.dual_lefschetz_star_route()).cwiseAbs().maxCoeff() < 1e-10);
    CMat H = fa.lefschetz() * fa.dual_lefschetz() - fa.dual_lefschetz() * fa.lefschetz();
    for (int x = 0; x < fa.space().dim(); ++x) {
      CMat col = H.col(x);
      col(x) -= double(fa.space().degree(x) - n);
      CHECK(col.cwiseAbs().maxCoeff() < 1e-10);
    }
    // Lambda is the adjoint of L
    auto a = testing_util::random_form(n, rng), b = testing_util::random_form(n, rng);
    cd l1 = inner_product(lefschetz(a, f), b, f);
    cd l2 = inner_product(a, dual_lefschetz(b, f), f);
    CHECK(std::abs(l1 - l2) < 1e-10 * (1 + std::abs(l1)));
  }
}

TEST_CASE("[Xi(r), Lambda] direct and eigen routes agree") {
  std::mt19937_64 rng(9);
  for (int n = 1; n <= 3; ++n) {
    HermitianFrame f{n, testing_util::random_hpd(n, rng), 1.0};
    CMat R = testing_util::random_hpd(n, rng) - CMat::Identity(n, n) * 2.0;
    BigradedForm r(n);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        r.coeffs()(r.space().index((Mask{1} << j) | (Mask{1} << (n + k)))) = cd(0, 1) * R(j, k);
    for (auto blk : FormSpace::get(n)->blocks()) {
      auto a = testing_util::random_block(n, blk.p, blk.q, rng);
      auto d = xi_lambda_commutator(r, a, f, XiRoute::Direct);
      auto e = xi_lambda_commutator(r, a, f, XiRoute::Eigen);
      CHECK((d - e).max_abs() < 1e-9 * (1 + d.max_abs()));
    }
    // r = omega reproduces [L, Lambda] = (k - n)
    auto w = kahler_form(f);
    auto a = testing_util::random_block(n, 1, 0, rng);
    auto res = xi_lambda_commutator(w, a, f, XiRoute::Eigen);
    CHECK((res - a * double(1 - n)).max_abs() < 1e-10);
  }
  auto bad = BigradedForm::basis(2, {1}, {2});  // not real
  CHECK_THROWS_AS(xi_lambda_commutator(bad, BigradedForm::basis(2, {1}, {}), HermitianFrame::orthonormal(2)),
                  ArgumentError);
  auto bad2 = BigradedForm::basis(2, {1, 2}, {});
  CHECK_THROWS_AS(xi_lambda_commutator(bad2, BigradedForm::basis(2, {1}, {}), HermitianFrame::orthonormal(2)),
                  ArgumentError);
}

TEST_CASE("primitive decomposition") {
  std::mt19937_64 rng(13);
  for (int n = 2; n <= 3; ++n) {
    HermitianFrame f{n, testing_util::random_hpd(n, rng), 1.0};
    FrameAlgebra fa(f);
    auto w = kahler_form(f);
    auto comps = primitive_decompose(w, f);
    REQUIRE(comps.size() == 1);
    CHECK(comps[0].j == 1);
    CHECK(std::abs(comps[0].beta.coefficient({}, {}) - cd(1.0)) < 1e-10);

    for (auto blk : FormSpace::get(n)->blocks()) {
      auto a = testing_util::random_block(n, blk.p, blk.q, rng);
      auto cs = primitive_decompose(a, f);
      BigradedForm sum(n);
      std::vector<BigradedForm> pieces;
      for (auto& c : cs) {
        CHECK(dual_lefschetz(c.beta, f).max_abs() < 1e-9);
        BigradedForm piece = c.beta;
        for (int t = 0; t < c.j; ++t) piece = lefschetz(piece, f);
        pieces.push_back(piece);
        sum = sum + piece;
      }
      CHECK((sum - a).max_abs() < 1e-9);
      for (size_t i = 0; i < pieces.size(); ++i)
        for (size_t j = i + 1; j < pieces.size(); ++j) CHECK(std::abs(inner_product(pieces[i], pieces[j], f)) < 1e-9);
    }
  }
  auto mixed = BigradedForm::basis(2, {1}, {}) + BigradedForm::basis(2, {}, {1});
  CHECK_THROWS_AS(primitive_decompose(mixed, HermitianFrame::orthonormal(2)), ArgumentError);
}

TEST_CASE("wedge norm inequality") {
  std::mt19937_64 rng(17);
  auto f = HermitianFrame::orthonormal(3);
  for (int r = 0; r <= 3; ++r)
    for (int s = 0; s + r <= 6; ++s)
      for (int t = 0; t < 3; ++t) {
        auto deg_form = [&](int k) {
          BigradedForm out(3);
          for (auto b : FormSpace::get(3)->blocks_of_degree(k)) out = out + testing_util::random_block(3, b.p, b.q, rng);
          return out;
        };
        auto a = deg_form(r), b = deg_form(s);
        double lhs = std::real(inner_product(wedge(a, b), wedge(a, b), f));
        double rhs = binom(r + s, r) * std::real(inner_product(a, a, f)) * std::real(inner_product(b, b, f));
        CHECK(lhs <= rhs * (1 + 1e-12));
      }
}
