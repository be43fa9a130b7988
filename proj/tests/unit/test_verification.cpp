#include <doctest.h>

#include <cmath>
#include <numbers>

#include "akh/errors.hpp"
#include "akh/verification.hpp"

using namespace akh;
using namespace akh::verify;

namespace {

bool all_ok(const Report& r) { return !r.failed() && !r.entries.empty(); }

const Entry* find(const Report& r, const std::string& suite, const std::string& needle) {
  for (const auto& e : r.entries)
    if (e.suite == suite && e.identity.find(needle) != std::string::npos) return &e;
  return nullptr;
}

}  // namespace

TEST_CASE("Croke constants against closed forms") {
  const double pi = std::numbers::pi;
  auto c2 = croke_constants(2);
  CHECK(std::abs(c2.c_tilde - 1.0 / (128 * pi * pi)) < 1e-12);
  CHECK(std::abs(c2.c - 9.0 / (8 * std::sqrt(2.0) * pi)) < 1e-12);
  CHECK(c2.c_tilde == doctest::Approx(7.91571e-4).epsilon(1e-5));
  CHECK(sphere_volume(2) == doctest::Approx(4 * pi));
  CHECK(sphere_volume(3) == doctest::Approx(2 * pi * pi));
  for (int n = 2; n <= 6; ++n) {
    auto c = croke_constants(n);
    CHECK(std::abs(c.integral - c.integral_beta) < 1e-10);
  }
  CHECK_THROWS_AS(croke_constants(1), DomainError);
}

TEST_CASE("suite selectors") {
  CHECK(parse_suites("all") == std::vector<std::string>{"all"});
  CHECK(parse_suites("ak,d2") == std::vector<std::string>{"d2", "ak"});
  CHECK_THROWS_AS(parse_suites("d2,nope"), ArgumentError);
  CHECK_THROWS_AS(parse_suites(""), ArgumentError);
  CHECK_THROWS_AS(run_lie(lie::load_model("torus4"), {"djdf"}, Config{}), ArgumentError);
}

TEST_CASE("observed order") {
  CHECK(observed_order(8, 4e-2, 16, 1e-2) == doctest::Approx(2.0));
  CHECK(observed_order(8, 0.0, 16, 0.0) == 0.0);
}

TEST_CASE("Kodaira-Thurston algebraic suites pass") {
  auto m = lie::load_model("kodaira-thurston");
  Config cfg;
  cfg.samples = 10;
  auto r = run_lie(m, {"d2", "ak", "laplacians", "sl2", "dualities", "orthogonality", "nijenhuis"}, cfg);
  CHECK(all_ok(r));
  CHECK(r.meta["de_rham_dimensions"] == nlohmann::ordered_json({1, 3, 4, 3, 1}));
  const Entry* e = find(r, "nijenhuis", "mu + mubar");
  REQUIRE(e != nullptr);
  CHECK(e->residual < 1e-10);
}

TEST_CASE("integrable torus gives exact verdicts and vacuous vanishing layers") {
  auto r = run_lie(lie::load_model("torus4"), {"d2", "vanishing"}, Config{});
  CHECK_FALSE(r.failed());
  const Entry* mu = find(r, "d2", "mu^2 = 0");
  REQUIRE(mu != nullptr);
  CHECK(mu->verdict == Verdict::Exact);
  CHECK(r.count(Verdict::Vacuous) > 0);
}

TEST_CASE("tolerance override can force failures") {
  Config cfg;
  cfg.tolerance = 1e-300;
  auto r = run_lie(lie::load_model("kodaira-thurston"), {"ak"}, cfg);
  for (const auto& e : r.entries) CHECK(e.tolerance == 1e-300);
}

TEST_CASE("reports serialize deterministically") {
  auto m = lie::load_model("kodaira-thurston");
  auto a = dump(report_json(run_lie(m, {"d2", "ak"}, Config{})));
  auto b = dump(report_json(run_lie(m, {"d2", "ak"}, Config{})));
  CHECK(a == b);
  CHECK(a.back() == '\n');
}

TEST_CASE("harmonic tables") {
  auto t = harmonic_table(lie::load_model("torus4"));
  CHECK(t.de_rham == std::vector<int>{1, 4, 6, 4, 1});
  for (int p = 0; p <= 2; ++p)
    for (int q = 0; q <= 2; ++q) CHECK(t.joint[p][q] == (p == 1 ? 2 : 1) * (q == 1 ? 2 : 1));
  auto kt = harmonic_table(lie::load_model("kodaira-thurston"));
  CHECK(kt.de_rham == std::vector<int>{1, 3, 4, 3, 1});
  CHECK(kt.conjugation_symmetric);
  CHECK(kt.hodge_symmetric);
  auto g = harmonic_table(grid::load_recipe("grid-flat"));
  CHECK(g.de_rham == std::vector<int>{1, 4, 6, 4, 1});
  CHECK_THROWS_AS(harmonic_table(grid::load_recipe("grid-varying")), PreconditionError);
}

TEST_CASE("grid soundness on the flat torus") {
  Config cfg;
  cfg.resolutions = {8, 16};
  auto r = run_grid(grid::load_recipe("grid-flat"), {"soundness"}, cfg);
  CHECK_FALSE(r.failed());
  std::size_t betti = 0;
  for (const auto& e : r.entries)
    if (e.identity.find("Betti") != std::string::npos) {
      ++betti;
      CHECK(e.verdict == Verdict::Exact);
    }
  CHECK(betti == 5);
  CHECK_THROWS_AS(run_grid(grid::load_recipe("grid-flat"), {"weitzenbock"}, cfg), ArgumentError);
}
