#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include <Eigen/SVD>

#include "akh/errors.hpp"
#include "akh/exterior.hpp"
#include "akh/linalg.hpp"
#include "akh/verification.hpp"

namespace akh::verify {

void constants_suite(Report& rep, const Config& cfg);

namespace {

using grid::GridForm;
using grid::GridModel;
using algebra::Bidegree;

constexpr double kExact = 1e-12;

enum class Kind { Converge, Exact };

struct Sample {
  std::string suite, identity, anchor;
  Kind kind;
  double value;
};

/// One-off values that are not convergence data (per resolution).
enum class ExtraKind { Check, Bound, Vacuous };
struct Extra {
  std::string suite, identity, anchor, block;
  double residual, tolerance;
  ExtraKind kind;
};

std::string at_n(int N, const std::string& rest = "") { return "N=" + std::to_string(N) + (rest.empty() ? "" : " " + rest); }

struct Pieces {
  GridForm mu, del, delbar, mubar;
};

const Bidegree kShift[4] = {{2, -1}, {1, 0}, {0, 1}, {-1, 2}};

Pieces split(const GridModel& gm, const GridForm& a) {
  Pieces s{grid::zero_form(gm), grid::zero_form(gm), grid::zero_form(gm), grid::zero_form(gm)};
  GridForm* out[4] = {&s.mu, &s.del, &s.delbar, &s.mubar};
  for (int k = 0; k < 4; ++k) {
    if (!a.has(k)) continue;
    for (int p = std::max(0, k - 2); p <= std::min(2, k); ++p) {
      Bidegree b{p, k - p};
      if (grid::block_is_zero(a, b)) continue;
      GridForm db = grid::d(gm, grid::project(a, b));
      for (int i = 0; i < 4; ++i) {
        Bidegree t{b.p + kShift[i].p, b.q + kShift[i].q};
        if (t.p < 0 || t.q < 0 || t.p > 2 || t.q > 2) continue;
        grid::axpy(1.0, grid::project(db, t), *out[i]);
      }
    }
  }
  return s;
}

Pieces split_adjoint(const GridModel& gm, const GridForm& a) {
  Pieces s{grid::zero_form(gm), grid::zero_form(gm), grid::zero_form(gm), grid::zero_form(gm)};
  GridForm* out[4] = {&s.mu, &s.del, &s.delbar, &s.mubar};
  for (int k = 1; k <= 4; ++k) {
    if (!a.has(k)) continue;
    for (int p = std::max(0, k - 2); p <= std::min(2, k); ++p) {
      Bidegree b{p, k - p};
      if (grid::block_is_zero(a, b)) continue;
      GridForm db = grid::d_star(gm, grid::project(a, b));
      for (int i = 0; i < 4; ++i) {
        Bidegree t{b.p - kShift[i].p, b.q - kShift[i].q};
        if (t.p < 0 || t.q < 0 || t.p > 2 || t.q > 2) continue;
        grid::axpy(1.0, grid::project(db, t), *out[i]);
      }
    }
  }
  return s;
}

bool wants(const std::vector<std::string>& suites, const char* s) {
  return std::find(suites.begin(), suites.end(), s) != suites.end();
}

double safe_div(double a, double b) { return a / std::max(b, 1e-300); }

struct GridEval {
  const GridModel& gm;
  const Config& cfg;
  std::vector<Sample>& out;
  std::vector<Extra>& extras;
  nlohmann::ordered_json& meta;
  algebra::FrameAlgebra fa{algebra::HermitianFrame::orthonormal(2)};
  CMat Lm = fa.lefschetz(), Lam = fa.dual_lefschetz();

  void add(const char* suite, const std::string& id, const std::string& anchor, Kind k, double v) {
    out.push_back({suite, id, anchor, k, v});
  }
  GridForm L(const GridForm& a) const { return grid::apply_pointwise(gm, Lm, a); }
  GridForm Lambda(const GridForm& a) const { return grid::apply_pointwise(gm, Lam, a); }
  double nrm(const GridForm& a) const { return grid::norm(gm, a); }
  cd ip(const GridForm& a, const GridForm& b) const { return grid::inner(gm, a, b); }

  GridForm kahler_field() const {
    GridForm om = grid::zero_form(gm);
    auto idx = fa.space().degree_indices(2);
    auto& v = om.ensure(2);
    for (std::size_t p = 0; p < gm.points; ++p)
      for (int i = 0; i < 6; ++i) v[p * 6 + i] = fa.kahler()(idx[i]);
    return om;
  }

  void d2() {
    const std::string a = "bidegree expansion of d^2 = 0";
    const char* names[7] = {"mu^2 = 0",
                            "mu del + del mu = 0",
                            "del^2 + mu delbar + delbar mu = 0",
                            "del delbar + delbar del + mu mubar + mubar mu = 0",
                            "delbar^2 + mubar del + del mubar = 0",
                            "mubar delbar + delbar mubar = 0",
                            "mubar^2 = 0"};
    double worst[7] = {0, 0, 0, 0, 0, 0, 0};
    double dd = 0;
    for (int k = 0; k <= 1; ++k) {
      GridForm x = grid::trig_form(gm, k, cfg.seed + k);
      const double nx = nrm(x);
      Pieces s = split(gm, x);
      Pieces sm = split(gm, s.mu), sd = split(gm, s.del), sdb = split(gm, s.delbar), smb = split(gm, s.mubar);
      GridForm rel[7] = {sm.mu,
                         sd.mu + sm.del,
                         sd.del + sdb.mu + sm.delbar,
                         sdb.del + sd.delbar + smb.mu + sm.mubar,
                         sdb.delbar + sd.mubar + smb.del,
                         sdb.mubar + smb.delbar,
                         smb.mubar};
      for (int i = 0; i < 7; ++i) worst[i] = std::max(worst[i], safe_div(nrm(rel[i]), nx));
      GridForm dx = grid::d(gm, x);
      dd = std::max(dd, safe_div(nrm(grid::d(gm, dx)), nrm(dx)));
    }
    for (int i = 0; i < 7; ++i) add("d2", names[i], a, Kind::Exact, worst[i]);
    add("d2", "d^2 = 0", "discrete exterior derivative squares to zero", Kind::Exact, dd);
  }

  void ak() {
    const std::string a = "almost Kahler commutator identities";
    const cd I(0, 1);
    GridForm x = grid::trig_form(gm, 2, cfg.seed + 2);
    const double nx = nrm(x);
    Pieces s = split(gm, x), t = split_adjoint(gm, x);
    GridForm Lx = L(x), Lamx = Lambda(x);
    Pieces sL = split_adjoint(gm, Lx), sLam = split(gm, Lamx);
    auto r = [&](const GridForm& diff) { return safe_div(nrm(diff), nx); };
    add("ak", "[L, mubar*] = i mu", a, Kind::Converge, r(L(t.mubar) - sL.mubar - I * s.mu));
    add("ak", "[L, mu*] = -i mubar", a, Kind::Converge, r(L(t.mu) - sL.mu + I * s.mubar));
    add("ak", "[Lambda, mubar] = i mu*", a, Kind::Converge, r(Lambda(s.mubar) - sLam.mubar - I * t.mu));
    add("ak", "[Lambda, mu] = -i mubar*", a, Kind::Converge, r(Lambda(s.mu) - sLam.mu + I * t.mubar));
    add("ak", "[L, delbar*] = -i del", a, Kind::Converge, r(L(t.delbar) - sL.delbar + I * s.del));
    add("ak", "[L, del*] = i delbar", a, Kind::Converge, r(L(t.del) - sL.del - I * s.delbar));
    add("ak", "[Lambda, delbar] = -i del*", a, Kind::Converge, r(Lambda(s.delbar) - sLam.delbar + I * t.del));
    add("ak", "[Lambda, del] = i delbar*", a, Kind::Converge, r(Lambda(s.del) - sLam.del - I * t.delbar));
    Pieces u_db = split(gm, t.delbar), u_d = split(gm, t.del), u_mb = split(gm, t.mubar), u_m = split(gm, t.mu);
    Pieces v_d = split_adjoint(gm, s.del), v_db = split_adjoint(gm, s.delbar), v_m = split_adjoint(gm, s.mu),
           v_mb = split_adjoint(gm, s.mubar);
    GridForm c1 = u_db.del + v_d.delbar;      // [del, delbar*]
    GridForm c2 = v_db.mubar + u_mb.delbar;   // [mubar*, delbar]
    GridForm c3 = u_d.mu + v_m.del;           // [mu, del*]
    GridForm c4 = u_d.delbar + v_db.del;      // [delbar, del*]
    GridForm c5 = v_d.mu + u_m.del;           // [mu*, del]
    GridForm c6 = u_db.mubar + v_mb.delbar;   // [mubar, delbar*]
    add("ak", "[del, delbar*] = [mubar*, delbar] + [mu, del*]", a, Kind::Converge, r(c1 - c2 - c3));
    add("ak", "[delbar, del*] = [mu*, del] + [mubar, delbar*]", a, Kind::Converge, r(c4 - c5 - c6));
  }

  void nijenhuis() {
    GridForm f = grid::from_real_coefficients(gm, 0, [](int, const std::array<double, 4>& x) {
      return cd(std::cos(2 * std::numbers::pi * (x[0] + x[2])));
    });
    GridForm x = grid::d(gm, f) + grid::trig_form(gm, 1, cfg.seed + 7);
    Pieces s = split(gm, x);
    GridForm diff = s.mu + s.mubar + cd(0.25) * grid::nijenhuis_dual(gm, x);
    add("nijenhuis", "mu + mubar = -1/4 N_J* on 1-forms", "zeroth-order part of d is dual to the Nijenhuis tensor",
        Kind::Converge, safe_div(nrm(diff), nrm(x)));
  }

  struct Theta {
    GridForm th, th10, th01, dth11, omega_tilde;
    double sup = 0;
  };
  Theta theta() const {
    Theta t;
    t.th = grid::theta_field(gm);
    t.th10 = grid::project(t.th, {1, 0});
    t.th01 = grid::project(t.th, {0, 1});
    t.dth11 = grid::project(grid::d(gm, t.th), {1, 1});
    Pieces a = split(gm, t.th01), b = split(gm, t.th10);
    t.omega_tilde = a.del + b.delbar;
    t.sup = grid::sup_norm(gm, t.th);
    return t;
  }

  void orthogonality() {
    auto t = theta();
    add("orthogonality", "(d theta)^(1,1) = del theta^(0,1) + delbar theta^(1,0)", "type decomposition of d theta",
        Kind::Exact, safe_div(grid::sup_norm(gm, t.dth11 - t.omega_tilde), std::max(1.0, t.sup)));
    GridForm dth = grid::d(gm, t.th);
    meta["leakage"][std::to_string(gm.N)] = {
        {"dtheta_20", grid::sup_norm(gm, grid::project(dth, {2, 0}))},
        {"dtheta_02", grid::sup_norm(gm, grid::project(dth, {0, 2}))}};
    GridForm x = grid::trig_form(gm, 3, cfg.seed + 3), y = grid::trig_form(gm, 1, cfg.seed + 4);
    Pieces ta = split_adjoint(gm, x), sy = split(gm, y);
    cd lhs = ip(x, grid::wedge(gm, t.omega_tilde, y));
    cd rhs = ip(ta.del, grid::wedge(gm, t.th01, y)) + ip(x, grid::wedge(gm, t.th01, sy.del)) +
             ip(ta.delbar, grid::wedge(gm, t.th10, y)) + ip(x, grid::wedge(gm, t.th10, sy.delbar));
    add("orthogonality",
        "(a, w~ ^ b) = (del* a, theta01 ^ b) + (a, theta01 ^ del b) + (delbar* a, theta10 ^ b) + (a, theta10 ^ delbar b)",
        "integration by parts against the (1,1) part of d theta", Kind::Converge,
        std::abs(lhs - rhs) / (nrm(x) * nrm(y) * std::max(1.0, t.sup)));
  }

  void vanishing(bool finest) {
    const cd I(0, 1);
    auto t = theta();
    GridForm x = grid::trig_form(gm, 1, cfg.seed + 5);
    const double nx = nrm(x);
    Pieces s = split(gm, x), ta = split_adjoint(gm, x);
    GridForm Lx = L(x);
    GridForm w01 = grid::wedge(gm, t.th01, x), w10 = grid::wedge(gm, t.th10, x);
    cd lhs = ip(grid::wedge(gm, t.dth11, x), Lx);
    cd rhs = ip(w01, -I * s.delbar) + ip(w01, L(ta.del)) + ip(grid::wedge(gm, t.th01, s.del), Lx) +
             ip(w10, I * s.del) + ip(w10, L(ta.delbar)) + ip(grid::wedge(gm, t.th10, s.delbar), Lx);
    add("vanishing", "six-term integration by parts for ((d theta)^(1,1) ^ a, omega ^ a)",
        "integration by parts behind the vanishing estimate", Kind::Converge,
        std::abs(lhs - rhs) / (nx * nx * std::max(1.0, t.sup)));

    // constants, degree 1
    const double q = std::pow(nrm(s.del), 2) + std::pow(nrm(ta.del), 2) + std::pow(nrm(s.delbar), 2) +
                     std::pow(nrm(ta.delbar), 2);
    const double c = grid::sup_norm(gm, kahler_field() - t.omega_tilde);
    const double c23 = (t.sup > 0 && q > 0) ? std::abs(lhs) / (t.sup * nx * std::sqrt(q)) : 0.0;
    const auto& S = fa.space();
    auto idx1 = S.degree_indices(1), idx2 = S.degree_indices(2);
    CMat L1(S.dim(), idx1.size());
    for (std::size_t i = 0; i < idx1.size(); ++i) L1.col(i) = Lm.col(idx1[i]);
    Eigen::JacobiSVD<CMat> svl(L1);
    const double smin = svl.singularValues().minCoeff(), lnorm = svl.singularValues().maxCoeff();
    const double cw = 1.0 / (smin * smin);
    double wsq = 0;
    for (int i : idx2) {
      CVec e = CVec::Zero(S.dim());
      e(i) = 1.0;
      CMat w = fa.wedge_matrix(e);
      CMat wc(S.dim(), idx1.size());
      for (std::size_t j = 0; j < idx1.size(); ++j) wc.col(j) = w.col(idx1[j]);
      wsq += std::pow(op_norm(wc), 2);
    }
    const double wconst = std::sqrt(wsq);
    const double kappa = cw * std::max(c23, lnorm * wconst);
    meta["vanishing_constants"][std::to_string(gm.N)] = {{"c_sup_omega_minus_dtheta11", c},
                                                         {"theta_sup_norm", t.sup},
                                                         {"C_w", cw},
                                                         {"L_norm", lnorm},
                                                         {"wedge_constant", wconst},
                                                         {"c23_sampled", c23},
                                                         {"kappa", kappa}};
    if (!finest) return;
    const double base = 1.0 - kappa * c;
    const std::string id = "(1 - kappa c)^2 |a|^2 <= kappa^2 sup|theta|^2 ((Delta_del + Delta_delbar) a, a)";
    const std::string an = "vanishing estimate for the joint Laplacian";
    if (base <= 1e-12) {
      extras.push_back({"vanishing", id, an, at_n(gm.N, "k=1"), base, 0.0, ExtraKind::Vacuous});
    } else {
      const double r = std::max(0.0, base * base * nx * nx - kappa * kappa * t.sup * t.sup * q) / (nx * nx);
      extras.push_back({"vanishing", id, an, at_n(gm.N, "k=1"), r, 1e-10, ExtraKind::Bound});
    }
  }

  void djdf() {
    const cd I(0, 1);
    if (!gm.recipe.f) throw PreconditionError("djdf suite needs a function f in the recipe");
    GridForm f = grid::function_field(gm);
    double fmin = 1e300;
    for (std::size_t p = 0; p < gm.points; ++p) fmin = std::min(fmin, f.deg[0][p].real());
    extras.push_back({"djdf", "f >= 1", "precondition on the auxiliary function", at_n(gm.N), std::max(0.0, 1.0 - fmin),
                      0.0, ExtraKind::Bound});
    if (fmin < 1.0) throw PreconditionError("djdf suite needs f >= 1, found min f = " + std::to_string(fmin));

    GridForm df = grid::d(gm, f);
    GridForm delf = grid::project(df, {1, 0}), eta = grid::project(df, {0, 1});
    GridForm jdf = grid::apply_pointwise(gm, fa.j_op(), df);
    GridForm djdf = grid::d(gm, jdf);
    Pieces se = split(gm, eta), sd = split(gm, delf);
    GridForm rho = se.del;
    GridForm rhs = 2.0 * I * se.mu + 2.0 * I * rho - 2.0 * I * sd.mubar;
    const double sc = std::max(1.0, grid::sup_norm(gm, djdf));
    add("djdf", "dJdf = 2i mu delbar f + 2i del delbar f - 2i mubar del f", "expansion of dJdf by components",
        Kind::Exact, grid::sup_norm(gm, djdf - rhs) / sc);
    GridForm d11 = grid::project(djdf, {1, 1});
    add("djdf", "(dJdf)^(1,1) = 2i del delbar f", "(1,1) part of dJdf", Kind::Exact,
        grid::sup_norm(gm, d11 - 2.0 * I * rho) / sc);

    GridForm x = grid::project(grid::trig_form(gm, 2, cfg.seed + 6), {1, 1});
    const double nx = nrm(x);
    auto comm = [&](const GridForm& w) { return ip(grid::wedge(gm, w, Lambda(x)) - Lambda(grid::wedge(gm, w, x)), x); };
    const cd full = comm(djdf), part = comm(d11);
    add("djdf", "([dJdf, Lambda] a, a) = ([(dJdf)^(1,1), Lambda] a, a)", "only the (1,1) part of dJdf pairs",
        Kind::Exact, std::abs(full - part) / (sc * nx * nx));

    Pieces sx = split(gm, x), tx = split_adjoint(gm, x);
    GridForm Lamx = Lambda(x);
    cd i_lhs = ip(grid::wedge(gm, 2.0 * I * rho, Lamx), x);
    cd i_rhs = ip(grid::wedge(gm, 2.0 * I * eta, Lamx), tx.del) + ip(grid::wedge(gm, 2.0 * eta, tx.delbar), x) +
               ip(grid::wedge(gm, 2.0 * I * eta, Lambda(sx.del)), x);
    cd ii_lhs = -ip(Lambda(grid::wedge(gm, 2.0 * I * rho, x)), x);
    cd ii_rhs = ip(grid::wedge(gm, 2.0 * eta, x), sx.delbar) - ip(grid::wedge(gm, 2.0 * I * eta, x), L(tx.del)) -
                ip(grid::wedge(gm, 2.0 * I * eta, sx.del), L(x));
    const double eta_sup = std::max(1.0, grid::sup_norm(gm, eta));
    add("djdf", "(2i rho ^ Lambda a, a) = (2i eta ^ Lambda a, del* a) + (2 eta ^ delbar* a, a) + (2i eta ^ Lambda del a, a)",
        "first term of [2i rho, Lambda] after integration by parts", Kind::Converge,
        std::abs(i_lhs - i_rhs) / (eta_sup * nx * nx));
    add("djdf",
        "-(Lambda(2i rho ^ a), a) = (2 eta ^ a, delbar a) - (2i eta ^ a, L del* a) - (2i eta ^ del a, L a)",
        "second term of [2i rho, Lambda] after integration by parts", Kind::Converge,
        std::abs(ii_lhs - ii_rhs) / (eta_sup * nx * nx));

    // gradient domination and the empirical constant of the commutator bound
    auto g2 = grid::pointwise_norm_sq(gm, df);
    double dom = -1e300, sup_df2 = 0;
    for (std::size_t p = 0; p < gm.points; ++p) {
      dom = std::max(dom, g2[p] - (gm.recipe.f->A + gm.recipe.f->B * f.deg[0][p].real()));
      sup_df2 = std::max(sup_df2, g2[p]);
    }
    extras.push_back({"djdf", "sup(|df|^2 - (A + B f)) <= 0", "gradient domination of the auxiliary function",
                      at_n(gm.N), std::max(0.0, dom), 1e-12, ExtraKind::Bound});
    const double four = nrm(sx.del) + nrm(tx.del) + nrm(sx.delbar) + nrm(tx.delbar);
    const double cemp = std::max(0.0, (std::abs(full) - 2 * four) / std::max(sup_df2 * nx * nx, 1e-300));
    meta["djdf_commutator_bound"][std::to_string(gm.N)] = {
        {"pairing", std::abs(full)}, {"four_norm_sum", four}, {"sup_df_sq", sup_df2}, {"empirical_C", cemp}};

    if (gm.constant_structure()) {
      const auto fr = *gm.recipe.f;
      const double k = 2 * std::numbers::pi * fr.mode;
      const int ax = fr.axis - 1;
      const int pair = ax < 2 ? 0 : 1;
      GridForm exact = grid::from_real_coefficients(gm, 2, [&](int i, const std::array<double, 4>& xx) {
        auto b = ext::bits(ext::subsets(4, 2)[i]);
        const bool hit = pair == 0 ? (b[0] == 0 && b[1] == 1) : (b[0] == 2 && b[1] == 3);
        return hit ? cd(-fr.amplitude * k * k * std::sin(k * xx[ax])) : cd(0);
      });
      add("djdf", "dJdf = f'' dx^i ^ J dx^i for f = f(x^i) on the flat torus", "closed-form dJdf on the flat torus",
          Kind::Converge, grid::sup_norm(gm, djdf - exact) / sc);
    }
  }

  void soundness(bool at_recipe_n) {
    double dd = 0, adj = 0;
    for (int k = 0; k <= 2; ++k) {
      auto a = grid::trig_form(gm, k, cfg.seed + 11 + k);
      auto b = grid::trig_form(gm, k + 1, cfg.seed + 21 + k);
      auto da = grid::d(gm, a);
      dd = std::max(dd, safe_div(nrm(grid::d(gm, da)), nrm(da)));
      adj = std::max(adj, std::abs(ip(da, b) - ip(a, grid::d_star(gm, b))) / (nrm(a) * nrm(b)));
    }
    add("soundness", "d^2 = 0 on the grid", "discrete exterior derivative squares to zero", Kind::Exact, dd);
    add("soundness", "(d a, b) = (a, d* b)", "discrete codifferential is the adjoint of d", Kind::Exact, adj);
    meta["validation"][std::to_string(gm.N)] = {{"J_square", gm.j_square_residual},
                                                {"compatibility", gm.compatibility_residual},
                                                {"omega", gm.omega_residual},
                                                {"closedness", gm.closedness_residual},
                                                {"min_metric_eigenvalue", gm.min_metric_eigenvalue}};
    if (!at_recipe_n) return;
    if (!gm.constant_structure()) return;
    auto dims = grid::fourier_harmonic_dims(gm);
    const int betti[5] = {1, 4, 6, 4, 1};
    for (int k = 0; k <= 4; ++k)
      extras.push_back({"soundness", "resolved harmonic count = Betti number of T^4",
                        "de Rham harmonic dimensions of the flat torus", at_n(gm.N, "k=" + std::to_string(k)),
                        static_cast<double>(std::abs(dims.betti_resolved[k] - betti[k])), 0.0, ExtraKind::Check});
    for (int p = 0; p <= 2; ++p)
      for (int q = 0; q <= 2; ++q) {
        const int h = (p == 1 ? 2 : 1) * (q == 1 ? 2 : 1);
        extras.push_back({"soundness", "resolved Delta_delbar count = Hodge number of T^4",
                          "Dolbeault harmonic dimensions of the flat torus",
                          at_n(gm.N, "(" + std::to_string(p) + "," + std::to_string(q) + ")"),
                          static_cast<double>(std::abs(dims.delbar_resolved[p * 3 + q] - h)), 0.0, ExtraKind::Check});
      }
    meta["fourier_counts"] = {{"N", gm.N},
                              {"betti_raw", dims.betti_raw},
                              {"betti_resolved", dims.betti_resolved},
                              {"delbar_raw", dims.delbar_raw},
                              {"delbar_resolved", dims.delbar_resolved},
                              {"min_nonzero_eigenvalue", dims.min_nonzero_eigenvalue}};
  }
};

struct GridResult {
  std::vector<ConvergenceRow> rows;
  std::vector<Kind> kinds;
  std::vector<Extra> extras;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
};

std::vector<std::string> expand_grid(const std::vector<std::string>& in) {
  std::vector<std::string> out;
  if (in.empty() || (in.size() == 1 && in[0] == "all")) {
    for (const auto& s : suite_names())
      if (suite_applies_to_grid(s)) out.push_back(s);
    return out;
  }
  for (const auto& s : in)
    if (!suite_applies_to_grid(s)) throw ArgumentError("suite '" + s + "' is not available on grid models");
  return in;
}

GridResult evaluate(const grid::GridRecipe& recipe, const std::vector<int>& res, const Config& cfg,
                    const std::vector<std::string>& suites) {
  if (res.size() < 2) throw ArgumentError("grid verification needs at least two resolutions");
  for (std::size_t i = 1; i < res.size(); ++i)
    if (res[i] <= res[i - 1]) throw ArgumentError("resolutions must be strictly increasing");
  GridResult out;
  std::map<std::string, std::size_t> where;
  for (std::size_t r = 0; r < res.size(); ++r) {
    const int N = res[r];
    GridModel gm = grid::build_grid(recipe, N);
    std::vector<Sample> samples;
    GridEval ev{gm, cfg, samples, out.extras, out.meta};
    const bool finest = r + 1 == res.size();
    if (wants(suites, "d2")) ev.d2();
    if (wants(suites, "ak")) ev.ak();
    if (wants(suites, "nijenhuis")) ev.nijenhuis();
    if (wants(suites, "orthogonality")) ev.orthogonality();
    if (wants(suites, "vanishing")) ev.vanishing(finest);
    if (wants(suites, "djdf")) ev.djdf();
    if (wants(suites, "soundness")) ev.soundness(N == recipe.N);
    for (const auto& s : samples) {
      const std::string key = s.suite + "\x1f" + s.identity;
      auto it = where.find(key);
      if (it == where.end()) {
        ConvergenceRow row;
        row.suite = s.suite;
        row.identity = s.identity;
        row.anchor = s.anchor;
        it = where.emplace(key, out.rows.size()).first;
        out.rows.push_back(row);
        out.kinds.push_back(s.kind);
      }
      out.rows[it->second].N.push_back(N);
      out.rows[it->second].residuals.push_back(s.value);
    }
  }
  for (std::size_t i = 0; i < out.rows.size(); ++i) {
    auto& row = out.rows[i];
    row.exact = std::all_of(row.residuals.begin(), row.residuals.end(), [](double v) { return v <= kExact; });
    for (std::size_t j = 1; j < row.N.size(); ++j) {
      row.orders.push_back(observed_order(row.N[j - 1], row.residuals[j - 1], row.N[j], row.residuals[j]));
      if (row.residuals[j] > row.residuals[j - 1]) row.monotone = false;
    }
    row.order = row.orders.empty() ? 0.0 : row.orders.back();
    row.required = out.kinds[i] == Kind::Converge || !row.exact;
  }
  return out;
}

std::string block_of(const std::vector<int>& N) {
  std::string s = "N=";
  for (std::size_t i = 0; i < N.size(); ++i) s += (i ? "," : "") + std::to_string(N[i]);
  return s;
}

}  // namespace

std::vector<ConvergenceRow> grid_convergence(const grid::GridRecipe& recipe, const std::vector<int>& resolutions,
                                             const Config& cfg, const std::vector<std::string>& suites) {
  auto picked = expand_grid(suites);
  return evaluate(recipe, resolutions, cfg, picked).rows;
}

Report run_grid(const grid::GridRecipe& recipe, const std::vector<std::string>& suites_in, const Config& cfg) {
  auto suites = expand_grid(suites_in);
  Report rep;
  rep.model = recipe.name;
  rep.meta["model"] = recipe.name;
  rep.meta["kind"] = "grid";
  rep.meta["n"] = 2;
  rep.meta["N"] = recipe.N;
  rep.meta["resolutions"] = cfg.resolutions;
  rep.meta["seed"] = cfg.seed;
  rep.meta["suites"] = suites;
  if (cfg.tolerance) rep.meta["tolerance_override"] = *cfg.tolerance;
  auto tol = [&](double t) { return cfg.tolerance ? *cfg.tolerance : t; };

  std::vector<std::string> numeric;
  for (const auto& s : suites)
    if (s != "constants") numeric.push_back(s);
  if (!numeric.empty()) {
    auto res = evaluate(recipe, cfg.resolutions, cfg, numeric);
    const std::string block = block_of(cfg.resolutions);
    for (std::size_t i = 0; i < res.rows.size(); ++i) {
      const auto& row = res.rows[i];
      const double worst = *std::max_element(row.residuals.begin(), row.residuals.end());
      if (res.kinds[i] == Kind::Exact || row.exact)
        rep.check(row.suite, row.identity, row.anchor, block, worst, tol(kExact));
      else
        rep.bound(row.suite, row.identity, row.anchor, block, std::max(0.0, 2.0 - row.order), tol(0.1));
    }
    for (const auto& e : res.extras) {
      if (e.kind == ExtraKind::Vacuous)
        rep.vacuous(e.suite, e.identity, e.anchor, e.block, e.residual, e.tolerance);
      else if (e.kind == ExtraKind::Bound)
        rep.bound(e.suite, e.identity, e.anchor, e.block, e.residual, tol(e.tolerance));
      else
        rep.check(e.suite, e.identity, e.anchor, e.block, e.residual, tol(e.tolerance));
    }
    rep.meta["convergence"] = convergence_json(res.rows);
    for (auto it = res.meta.begin(); it != res.meta.end(); ++it) rep.meta[it.key()] = it.value();
  }
  if (wants(suites, "constants")) constants_suite(rep, cfg);
  return rep;
}

// ------------------------------------------------------------------ tables

HarmonicTable harmonic_table(const lie::LieModel& model, double tol) {
  auto cx = lie::build_complex(model);
  const int n = model.n;
  HarmonicTable t;
  t.model = model.name;
  t.n = n;
  auto lap_d = cx.laplacian(cx.d), lap_del = cx.laplacian(cx.del), lap_delbar = cx.laplacian(cx.delbar);
  auto lap_joint = lap_del + lap_delbar;
  for (int k = 0; k <= 2 * n; ++k) t.de_rham.push_back(ops::harmonic_space(lap_d, k, cx.gram, tol).dim());
  auto grid_of = [&](const ops::GradedOperator& op) {
    std::vector<std::vector<int>> m(n + 1, std::vector<int>(n + 1, 0));
    for (int p = 0; p <= n; ++p)
      for (int q = 0; q <= n; ++q) m[p][q] = ops::harmonic_space(op, Bidegree{p, q}, cx.gram, tol).dim();
    return m;
  };
  t.d_bideg = grid_of(lap_d);
  t.del = grid_of(lap_del);
  t.delbar = grid_of(lap_delbar);
  t.joint = grid_of(lap_joint);
  for (int p = 0; p <= n; ++p)
    for (int q = 0; q <= n; ++q) {
      t.conjugation_symmetric &= t.joint[p][q] == t.joint[q][p];
      t.hodge_symmetric &= t.joint[p][q] == t.joint[n - q][n - p];
      t.serre_symmetric &= t.joint[p][q] == t.joint[n - p][n - q];
    }
  return t;
}

HarmonicTable harmonic_table(const grid::GridRecipe& recipe) {
  auto gm = grid::build_grid(recipe);
  auto dims = grid::fourier_harmonic_dims(gm);
  HarmonicTable t;
  t.model = recipe.name;
  t.n = 2;
  t.fourier = true;
  t.de_rham.assign(dims.betti_resolved.begin(), dims.betti_resolved.end());
  t.del.assign(3, std::vector<int>(3, 0));
  t.delbar = t.del;
  t.joint = t.del;
  for (int p = 0; p <= 2; ++p)
    for (int q = 0; q <= 2; ++q) {
      t.del[p][q] = dims.del_resolved[p * 3 + q];
      t.delbar[p][q] = dims.delbar_resolved[p * 3 + q];
      t.joint[p][q] = dims.joint_resolved[p * 3 + q];
    }
  for (int p = 0; p <= 2; ++p)
    for (int q = 0; q <= 2; ++q) {
      t.conjugation_symmetric &= t.joint[p][q] == t.joint[q][p];
      t.hodge_symmetric &= t.joint[p][q] == t.joint[2 - q][2 - p];
      t.serre_symmetric &= t.joint[p][q] == t.joint[2 - p][2 - q];
    }
  return t;
}

}  // namespace akh::verify
