#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/SVD>

#include "akh/errors.hpp"
#include "akh/exterior.hpp"
#include "akh/linalg.hpp"
#include "akh/verification.hpp"

namespace akh::verify {

namespace {

using algebra::Bidegree;
using algebra::BigradedForm;
using ops::GradedOperator;

std::string bl(Bidegree b) { return "(" + std::to_string(b.p) + "," + std::to_string(b.q) + ")"; }
std::string deg(int k) { return "k=" + std::to_string(k); }

struct LieRun {
  const lie::LieModel& m;
  const Config& cfg;
  Report& rep;
  lie::InvariantComplex cx;
  lie::NijenhuisData nij;
  int n;
  std::shared_ptr<const algebra::FormSpace> S;
  CMat G;
  GradedOperator mu, del, delbar, mubar, mus, dels, delbars, mubars, d, ds, L, Lam, id;
  GradedOperator lap_d, lap_del, lap_delbar, lap_mu, lap_mubar, lap_joint;
  std::mt19937_64 rng;

  LieRun(const lie::LieModel& model, const Config& c, Report& r)
      : m(model), cfg(c), rep(r), cx(lie::build_complex(model)), rng(c.seed) {
    nij = lie::nijenhuis_tensor(m, cx);
    n = m.n;
    S = cx.space;
    G = cx.gram;
    mu = cx.mu;
    del = cx.del;
    delbar = cx.delbar;
    mubar = cx.mubar;
    mus = cx.adjoint(mu);
    dels = cx.adjoint(del);
    delbars = cx.adjoint(delbar);
    mubars = cx.adjoint(mubar);
    d = cx.d;
    ds = cx.adjoint(d);
    L = cx.L;
    Lam = cx.Lambda;
    id = cx.id;
    lap_d = cx.laplacian(d);
    lap_del = cx.laplacian(del);
    lap_delbar = cx.laplacian(delbar);
    lap_mu = cx.laplacian(mu);
    lap_mubar = cx.laplacian(mubar);
    lap_joint = lap_del + lap_delbar;
  }

  double tol(double t) const { return cfg.tolerance ? *cfg.tolerance : t; }
  void check(const std::string& suite, const std::string& identity, const std::string& anchor,
             const std::string& block, double residual, double t) {
    rep.check(suite, identity, anchor, block, residual, tol(t));
  }

  cd ip(const CVec& a, const CVec& b) const { return b.dot(G * a); }
  double nrm(const CVec& a) const { return std::sqrt(std::max(0.0, ip(a, a).real())); }

  std::vector<int> block_idx(Bidegree b) const { return ops::selector_indices(*S, b); }
  CMat cols(const CMat& m, const std::vector<int>& idx) const {
    CMat out(m.rows(), idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) out.col(i) = m.col(idx[i]);
    return out;
  }
  CMat sub(const CMat& m, const std::vector<int>& idx) const {
    CMat out(idx.size(), idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < idx.size(); ++j) out(i, j) = m(idx[i], idx[j]);
    return out;
  }
  double block_norm(const GradedOperator& op, Bidegree b) const { return op_norm(cols(op.matrix(), block_idx(b))); }

  CVec random_on(const std::vector<int>& idx) {
    std::normal_distribution<double> nd;
    CVec v = CVec::Zero(S->dim());
    for (int i : idx) v(i) = cd(nd(rng), nd(rng));
    return v;
  }
  CVec project(const CVec& v, Bidegree b) const {
    CVec out = CVec::Zero(v.size());
    for (int i : block_idx(b)) out(i) = v(i);
    return out;
  }

  ops::HarmonicBasis joint(Bidegree b) const { return ops::harmonic_space(lap_joint, b, G, 1e-9); }

  // ---------------------------------------------------------------- suites

  void suite_d2() {
    const std::string s = "d2", a = "bidegree expansion of d^2 = 0";
    struct Rel {
      const char* name;
      GradedOperator op;
    };
    std::vector<Rel> rels = {
        {"mu^2 = 0", mu * mu},
        {"mu del + del mu = 0", mu * del + del * mu},
        {"del^2 + mu delbar + delbar mu = 0", del * del + mu * delbar + delbar * mu},
        {"del delbar + delbar del + mu mubar + mubar mu = 0", del * delbar + delbar * del + mu * mubar + mubar * mu},
        {"delbar^2 + mubar del + del mubar = 0", delbar * delbar + mubar * del + del * mubar},
        {"mubar delbar + delbar mubar = 0", mubar * delbar + delbar * mubar},
        {"mubar^2 = 0", mubar * mubar},
    };
    for (auto& r : rels) check(s, r.name, a, "all", op_norm(r.op.matrix()), 1e-12);
  }

  void suite_ak() {
    const std::string s = "ak", a = "almost Kahler commutator identities";
    const cd I(0, 1);
    using ops::graded_commutator;
    auto C = [](const GradedOperator& x, const GradedOperator& y) { return graded_commutator(x, y); };
    struct Id {
      const char* name;
      GradedOperator diff;
    };
    std::vector<Id> ids = {
        {"[del, delbar*] = [mubar*, delbar] + [mu, del*]", C(del, delbars) - C(mubars, delbar) - C(mu, dels)},
        {"[delbar, del*] = [mu*, del] + [mubar, delbar*]", C(delbar, dels) - C(mus, del) - C(mubar, delbars)},
        {"[L, mubar*] = i mu", C(L, mubars) - I * mu},
        {"[L, mu*] = -i mubar", C(L, mus) + I * mubar},
        {"[Lambda, mubar] = i mu*", C(Lam, mubar) - I * mus},
        {"[Lambda, mu] = -i mubar*", C(Lam, mu) + I * mubars},
        {"[L, delbar*] = -i del", C(L, delbars) + I * del},
        {"[L, del*] = i delbar", C(L, dels) - I * delbar},
        {"[Lambda, delbar] = -i del*", C(Lam, delbar) + I * dels},
        {"[Lambda, del] = i delbar*", C(Lam, del) - I * delbars},
    };
    for (auto& i : ids) check(s, i.name, a, "all", op_norm(i.diff.matrix()), 1e-11);
  }

  void suite_laplacians() {
    const std::string s = "laplacians";
    using ops::graded_commutator;
    auto C = [](const GradedOperator& x, const GradedOperator& y) { return graded_commutator(x, y); };
    const GradedOperator sym = lap_delbar + lap_mu - lap_del - lap_mubar;
    const GradedOperator expansion = lap_del + lap_delbar + lap_mu + lap_mubar + C(delbar, dels) + C(del, delbars) +
                                     C(del + delbar, mus + mubars) + C(mu + mubar, dels + delbars);
    const GradedOperator omitted = C(mu, mubars) + C(mubar, mus);
    const GradedOperator half_del = lap_del - cd(0.5) * (lap_del + lap_delbar + lap_mu - lap_mubar);
    const GradedOperator half_delbar = lap_delbar - cd(0.5) * (lap_del + lap_delbar - lap_mu + lap_mubar);
    const GradedOperator lc = C(L, lap_joint), lamc = C(Lam, lap_joint);
    for (auto b : S->blocks()) {
      const std::string B = bl(b);
      check(s, "Delta_delbar + Delta_mu = Delta_del + Delta_mubar", "symmetry of the component Laplacians", B,
            block_norm(sym, b), 1e-11);
      check(s, "Delta_d expansion into component Laplacians and cross commutators",
            "expansion of Delta_d = [d, d*] by components", B, block_norm(lap_d - expansion, b), 1e-11);
      check(s, "[mu, mubar*] + [mubar, mu*] = 0", "cross commutators absent from the Delta_d expansion", B,
            block_norm(omitted, b), 1e-11);
      check(s, "Delta_del = (Delta_del + Delta_delbar + Delta_mu - Delta_mubar)/2", "half-sum identity for Delta_del",
            B, block_norm(half_del, b), 1e-11);
      check(s, "Delta_delbar = (Delta_del + Delta_delbar - Delta_mu + Delta_mubar)/2",
            "half-sum identity for Delta_delbar", B, block_norm(half_delbar, b), 1e-11);
      check(s, "[L, Delta_del + Delta_delbar] = 0", "L commutes with the joint Laplacian", B, block_norm(lc, b), 1e-11);
      check(s, "[Lambda, Delta_del + Delta_delbar] = 0", "Lambda commutes with the joint Laplacian", B,
            block_norm(lamc, b), 1e-11);
    }
    // quadratic-form expansions of the two cross terms
    const GradedOperator Iop = C(delbar, dels) + C(del, delbars);
    const GradedOperator IIop = C(del + delbar, mus + mubars) + C(mu + mubar, dels + delbars);
    for (int k = 0; k <= 2 * n; ++k) {
      double rI = 0, rII = 0;
      for (int t = 0; t < 10; ++t) {
        CVec x = random_on(S->degree_indices(k));
        const double nx2 = ip(x, x).real();
        cd lhsI = ip(Iop.apply(x), x);
        cd rhsI = 2.0 * (ip(del.apply(x), mu.apply(x)) + ip(mus.apply(x), dels.apply(x)) +
                         ip(delbars.apply(x), mubars.apply(x)) + ip(mubar.apply(x), delbar.apply(x)))
                            .real();
        cd lhsII = ip(IIop.apply(x), x);
        cd rhsII = 2.0 * (ip((mus + mubars).apply(x), (dels + delbars).apply(x)) +
                          ip((mu + mubar).apply(x), (del + delbar).apply(x)))
                             .real();
        rI = std::max(rI, std::abs(lhsI - rhsI) / nx2);
        rII = std::max(rII, std::abs(lhsII - rhsII) / nx2);
      }
      check(s, "cross term I = 2 Re[(del a, mu a) + (mu* a, del* a) + (delbar* a, mubar* a) + (mubar a, delbar a)]",
            "first cross term of the Delta_d expansion", deg(k), rI, 1e-11);
      check(s, "cross term II = 2 Re[((mu* + mubar*) a, (del* + delbar*) a) + ((mu + mubar) a, (del + delbar) a)]",
            "second cross term of the Delta_d expansion", deg(k), rII, 1e-11);
    }
    rep.note("cross term I: the pairing (delbar* a, mubar* a) is used where a degree-inconsistent (delbar* a, a) "
             "would otherwise appear");
  }

  void suite_sl2() {
    const std::string s = "sl2";
    const GradedOperator H = ops::graded_commutator(Lam, L);
    for (int k = 0; k <= 2 * n; ++k) {
      auto idx = S->degree_indices(k);
      CMat diff = cols(H.matrix(), idx);
      for (std::size_t i = 0; i < idx.size(); ++i) diff(idx[i], i) -= double(n - k);
      check(s, "[Lambda, L] = (n - k) id", "sl(2) weight of k-forms", deg(k), op_norm(diff), 1e-12);
    }
    check(s, "[H, L] = -2 L", "sl(2) relation for the raising operator", "all",
          op_norm((ops::graded_commutator(H, L) + cd(2.0) * L).matrix()), 1e-12);
    check(s, "[H, Lambda] = 2 Lambda", "sl(2) relation for the lowering operator", "all",
          op_norm((ops::graded_commutator(H, Lam) - cd(2.0) * Lam).matrix()), 1e-12);

    for (int k = 0; k <= n; ++k)
      for (int p = 0; p <= k; ++p) {
        const int q = k - p;
        if (q > n) continue;
        Bidegree src{p, q}, tgt{p + n - k, q + n - k};
        auto hs = joint(src), ht = joint(tgt);
        CMat Lp = CMat::Identity(S->dim(), S->dim());
        for (int j = 0; j < n - k; ++j) Lp = L.matrix() * Lp;
        CMat img = Lp * hs.basis;
        double res = std::abs(hs.dim() - ht.dim());
        if (hs.dim() > 0) {
          Eigen::JacobiSVD<CMat> svd(img);
          if (svd.singularValues().minCoeff() < 1e-8) res += 1.0;
          res += op_norm(lap_joint.matrix() * img);
          res += ops::subspace_distance(img, ht.basis, G);
        }
        check(s, "L^(n-k) maps joint-harmonic " + bl(src) + " isomorphically onto " + bl(tgt),
              "hard Lefschetz on joint-harmonic forms", bl(src), res, 1e-10);
      }

    const auto& frame = cx.algebra->frame();
    for (auto b : S->blocks()) {
      auto h = joint(b);
      double res = 0;
      for (int c = 0; c < h.dim(); ++c) {
        BigradedForm v(n, CVec(h.basis.col(c)));
        auto parts = algebra::primitive_decompose(v, frame, 1e-10);
        CVec sum = CVec::Zero(S->dim());
        for (const auto& pc : parts) {
          CVec term = pc.beta.coeffs();
          res = std::max(res, nrm(Lam.apply(term)) / std::max(1.0, nrm(term)));
          res = std::max(res, nrm(lap_joint.apply(term)));
          for (int j = 0; j < pc.j; ++j) term = L.apply(term);
          sum += term;
        }
        res = std::max(res, nrm(sum - v.coeffs()));
      }
      check(s, "joint-harmonic forms are sums of L^j of joint-harmonic primitive forms",
            "Lefschetz decomposition of joint-harmonic forms", bl(b), res, 1e-10);
    }
  }

  std::vector<int> ce_betti() const {
    const int dim = m.dim;
    std::vector<int> ranks(dim + 1, 0), betti(dim + 1, 0);
    for (int k = 0; k < dim; ++k) {
      auto in = ext::subsets(dim, k), out = ext::subsets(dim, k + 1);
      RMat blk(out.size(), in.size());
      for (std::size_t i = 0; i < out.size(); ++i)
        for (std::size_t j = 0; j < in.size(); ++j) blk(i, j) = cx.real_d(out[i], in[j]);
      Eigen::JacobiSVD<RMat> svd(blk);
      const auto& sv = svd.singularValues();
      const double thr = 1e-9 * std::max(1.0, sv.size() ? sv.maxCoeff() : 0.0);
      for (Eigen::Index i = 0; i < sv.size(); ++i) ranks[k] += sv(i) > thr;
    }
    for (int k = 0; k <= dim; ++k) {
      long c = static_cast<long>(ext::subsets(dim, k).size());
      betti[k] = static_cast<int>(c - ranks[k] - (k ? ranks[k - 1] : 0));
    }
    return betti;
  }

  void suite_dualities() {
    const std::string s = "dualities";
    const CMat star = cx.star.matrix();
    for (auto b : S->blocks()) {
      auto h = joint(b);
      Bidegree cb{b.q, b.p}, hb{n - b.q, n - b.p}, sb{n - b.p, n - b.q};
      auto hc = joint(cb), hh = joint(hb), hs = joint(sb);
      CMat conj(S->dim(), h.dim()), st(S->dim(), h.dim());
      for (int c = 0; c < h.dim(); ++c) {
        conj.col(c) = cx.conjugate(h.basis.col(c));
        st.col(c) = star * h.basis.col(c);
      }
      double rc = std::abs(h.dim() - hc.dim()) + ops::subspace_distance(conj, hc.basis, G);
      double rh = std::abs(h.dim() - hh.dim()) + ops::subspace_distance(st, hh.basis, G) +
                  (h.dim() ? op_norm(lap_joint.matrix() * st) : 0.0);
      check(s, "conjugation maps joint-harmonic " + bl(b) + " onto " + bl(cb), "complex conjugation duality", bl(b), rc,
            1e-10);
      check(s, "Hodge star maps joint-harmonic " + bl(b) + " onto " + bl(hb), "Hodge star duality", bl(b), rh, 1e-10);
      check(s, "dim joint-harmonic " + bl(b) + " = dim joint-harmonic " + bl(sb), "Serre-type dimension duality",
            bl(b), std::abs(h.dim() - hs.dim()), 0.0);
      auto inter = ops::kernel_intersection({lap_del, lap_delbar}, b, G, 1e-9);
      double ri = std::abs(h.dim() - inter.dim()) + ops::subspace_distance(h.basis, inter.basis, G) +
                  ops::subspace_distance(inter.basis, h.basis, G);
      check(s, "ker(Delta_del + Delta_delbar) = ker Delta_del cap ker Delta_delbar", "kernel of a sum of PSD operators",
            bl(b), ri, 1e-10);
    }
    auto betti = ce_betti();
    nlohmann::ordered_json dims = nlohmann::ordered_json::array();
    for (int k = 0; k <= 2 * n; ++k) {
      auto h = ops::harmonic_space(lap_d, k, G, 1e-9);
      dims.push_back(h.dim());
      check(s, "dim ker Delta_d = Chevalley-Eilenberg Betti number", "de Rham harmonic dimensions", deg(k),
            std::abs(h.dim() - betti[k]), 0.0);
      double r = 0;
      if (h.dim()) r = std::max(op_norm(d.matrix() * h.basis), op_norm(ds.matrix() * h.basis));
      check(s, "Delta_d-harmonic forms are closed and coclosed", "harmonic forms satisfy d a = 0 and d* a = 0", deg(k),
            r, 1e-10);
    }
    rep.meta["de_rham_dimensions"] = dims;
  }

  void suite_closure() {
    const std::string s = "closure";
    for (auto b : S->blocks()) {
      if (b.p >= n || b.q >= n) continue;
      auto hd = ops::harmonic_space(lap_d, b, G, 1e-9);
      auto hj = joint(b);
      double rd = hd.dim() ? op_norm(lap_d.matrix() * L.matrix() * hd.basis) : 0.0;
      double rj = hj.dim() ? op_norm(lap_joint.matrix() * L.matrix() * hj.basis) : 0.0;
      check(s, "L preserves Delta_d-harmonic forms", "Lefschetz image of de Rham harmonic forms", bl(b), rd, 1e-10);
      check(s, "L preserves joint-harmonic forms", "Lefschetz image of joint-harmonic forms", bl(b), rj, 1e-10);
    }
  }

  CVec theta() const {
    const int idx = cfg.theta_index ? *cfg.theta_index : m.dim - 1;
    if (idx < 0 || idx >= m.dim) throw ArgumentError("theta index out of range");
    RVec t = RVec::Zero(1 << m.dim);
    t(Mask{1} << idx) = 1.0;
    return cx.from_real_form(t);
  }

  struct ThetaParts {
    CVec th, th10, th01, dth, omega_tilde;
  };
  ThetaParts theta_parts() const {
    ThetaParts t;
    t.th = theta();
    t.th10 = project(t.th, {1, 0});
    t.th01 = project(t.th, {0, 1});
    t.dth = d.apply(t.th);
    t.omega_tilde = del.apply(t.th01) + delbar.apply(t.th10);
    return t;
  }

  void suite_orthogonality() {
    const std::string s = "orthogonality";
    auto t = theta_parts();
    const std::string thname = "theta = eps^" + std::to_string(cfg.theta_index ? *cfg.theta_index + 1 : m.dim);
    check(s, "(d theta)^(1,1) = del theta^(0,1) + delbar theta^(1,0)", "type decomposition of d theta", "(1,1)",
          nrm(project(t.dth, {1, 1}) - t.omega_tilde), 1e-12);
    check(s, "(d theta)^(2,0) = del theta^(1,0) + mu theta^(0,1)", "type decomposition of d theta", "(2,0)",
          nrm(project(t.dth, {2, 0}) - del.apply(t.th10) - mu.apply(t.th01)), 1e-12);
    rep.meta["theta"] = thname;
    rep.meta["d_theta_leakage"] = {{"(2,0)", nrm(project(t.dth, {2, 0}))}, {"(0,2)", nrm(project(t.dth, {0, 2}))}};
    const CMat W = cx.algebra->wedge_matrix(t.omega_tilde);
    for (auto b : S->blocks()) {
      if (b.p < 1 || b.q < 1) continue;
      Bidegree bb{b.p - 1, b.q - 1};
      auto ka = ops::kernel_intersection({dels, delbars}, b, G, 1e-9);
      auto kb = ops::kernel_intersection({del, delbar}, bb, G, 1e-9);
      double worst = 0;
      for (int i = 0; i < ka.dim(); ++i)
        for (int j = 0; j < kb.dim(); ++j) worst = std::max(worst, std::abs(ip(ka.basis.col(i), W * kb.basis.col(j))));
      check(s, "(a, omega~ ^ b) = 0 for a in ker del* cap ker delbar*, b in ker del cap ker delbar",
            "orthogonality of co-closed forms to omega~ times closed forms (" + thname + ")", bl(b), worst, 1e-10);
    }
  }

  void suite_vanishing() {
    const std::string s = "vanishing";
    auto t = theta_parts();
    const cd I(0, 1);
    const CMat Lm = L.matrix();
    const CMat W01 = cx.algebra->wedge_matrix(t.th01), W10 = cx.algebra->wedge_matrix(t.th10);
    const CMat Wr = cx.algebra->wedge_matrix(t.omega_tilde);
    const double th_norm = nrm(t.th);
    const CVec omega = cx.algebra->kahler();
    const CVec rho = omega - t.omega_tilde;
    const double c = nrm(rho);
    const CMat Wrho = cx.algebra->wedge_matrix(rho);
    const double sup_n = nij.sup;

    // layer (i): six-term integration by parts identity
    for (int k = 0; k <= 2 * n; ++k) {
      double worst = 0;
      for (int r = 0; r < 10; ++r) {
        CVec a = random_on(S->degree_indices(k));
        CVec La = Lm * a;
        cd lhs = ip(Wr * a, La);
        cd rhs = ip(W01 * a, -I * delbar.apply(a)) + ip(W01 * a, Lm * dels.apply(a)) + ip(W01 * del.apply(a), La) +
                 ip(W10 * a, I * del.apply(a)) + ip(W10 * a, Lm * delbars.apply(a)) + ip(W10 * delbar.apply(a), La);
        worst = std::max(worst, std::abs(lhs - rhs) / (ip(a, a).real() * std::max(1.0, th_norm)));
      }
      check(s, "six-term integration by parts for ((d theta)^(1,1) ^ a, omega ^ a)",
            "integration by parts behind the vanishing estimate", deg(k), worst, 1e-10);
    }

    // commutator-bound expansions with eta = theta^(0,1), rho = del eta
    {
      const CMat We = cx.algebra->wedge_matrix(t.th01);
      const CMat Wrh = cx.algebra->wedge_matrix(del.apply(t.th01));
      const CMat Lamm = Lam.matrix();
      for (int k = 0; k <= 2 * n; ++k) {
        double w1 = 0, w2 = 0;
        for (int r = 0; r < 10; ++r) {
          CVec a = random_on(S->degree_indices(k));
          const double sc = ip(a, a).real() * std::max(1.0, th_norm);
          cd l1 = ip(2.0 * I * (Wrh * (Lamm * a)), a);
          cd r1 = ip(2.0 * I * (We * (Lamm * a)), dels.apply(a)) + ip(2.0 * (We * delbars.apply(a)), a) +
                  ip(2.0 * I * (We * (Lamm * del.apply(a))), a);
          cd l2 = -ip(Lamm * (2.0 * I * (Wrh * a)), a);
          cd r2 = ip(2.0 * (We * a), delbar.apply(a)) - ip(2.0 * I * (We * a), Lm * dels.apply(a)) -
                  ip(2.0 * I * (We * del.apply(a)), Lm * a);
          w1 = std::max(w1, std::abs(l1 - r1) / sc);
          w2 = std::max(w2, std::abs(l2 - r2) / sc);
        }
        check(s, "(2i rho ^ Lambda a, a) = (2i eta ^ Lambda a, del* a) + (2 eta ^ delbar* a, a) + (2i eta ^ Lambda del a, a)",
              "first term of [2i rho, Lambda] after integration by parts", deg(k), w1, 1e-10);
        check(s, "-(Lambda(2i rho ^ a), a) = (2 eta ^ a, delbar a) - (2i eta ^ a, L del* a) - (2i eta ^ del a, L a)",
              "second term of [2i rho, Lambda] after integration by parts", deg(k), w2, 1e-10);
      }
    }

    // layer (ii): empirical constants for k < n
    nlohmann::ordered_json consts = nlohmann::ordered_json::array();
    std::vector<double> kappa(n, 0.0);
    double four_norm_ratio = 0;
    for (int k = 0; k < n; ++k) {
      auto idx = S->degree_indices(k);
      Eigen::JacobiSVD<CMat> svl(cols(Lm, idx));
      const double smin = svl.singularValues().minCoeff(), lnorm = svl.singularValues().maxCoeff();
      const double cw = 1.0 / (smin * smin);
      const double wrho = op_norm(cols(Wrho, idx));
      double c23 = 0;
      for (int r = 0; r < cfg.samples; ++r) {
        CVec a = random_on(idx);
        const double na = nrm(a);
        const double q = std::max(0.0, ip(lap_joint.apply(a), a).real());
        const double lhs = std::abs(ip(Wr * a, Lm * a));
        if (th_norm > 0 && lhs > 0) c23 = std::max(c23, lhs / (th_norm * na * std::sqrt(q)));
        const double four = nrm(del.apply(a)) + nrm(dels.apply(a)) + nrm(delbar.apply(a)) + nrm(delbars.apply(a));
        if (q > 0) four_norm_ratio = std::max(four_norm_ratio, four / std::sqrt(q));
      }
      const double wedge_const = c > 0 ? wrho / c : 0.0;
      kappa[k] = cw * std::max(c23, lnorm * wedge_const);
      consts.push_back({{"k", k},
                        {"C_w", cw},
                        {"L_norm", lnorm},
                        {"wedge_constant", wedge_const},
                        {"c23_sampled", c23},
                        {"kappa", kappa[k]}});
    }
    rep.meta["vanishing_constants"] = {{"c_sup_omega_minus_dtheta11", c},
                                       {"theta_sup_norm", th_norm},
                                       {"sup_N_operator_norm", sup_n},
                                       {"per_degree", consts},
                                       {"max_four_norm_sum_over_sqrtQ", four_norm_ratio}};

    // layer (iii): conditional inequalities as eigenvalue statements
    auto lam_min = [&](const CMat& quad, const std::vector<int>& idx, double coef) {
      CMat M = sub(G * quad, idx);
      M = 0.5 * (M + M.adjoint()).eval();
      M -= coef * sub(G, idx);
      M = 0.5 * (M + M.adjoint()).eval();
      Eigen::SelfAdjointEigenSolver<CMat> es(M, Eigen::EigenvaluesOnly);
      return es.eigenvalues().minCoeff();
    };
    for (int k = 0; k <= 2 * n; ++k) {
      if (k == n) continue;
      const double kp = kappa[std::min(k, 2 * n - k)];
      const auto idx = S->degree_indices(k);
      const double base = 1.0 - kp * c;
      const double t2 = kp * kp * th_norm * th_norm;
      struct Ineq {
        std::string name, anchor;
        double coef;
        CMat quad;
        double scale;
      };
      std::vector<Ineq> ineqs;
      ineqs.push_back({"(1 - kappa c)^2 |a|^2 <= kappa^2 |theta|^2 ((Delta_del + Delta_delbar) a, a)",
                       "vanishing estimate for the joint Laplacian", base > 0 ? base * base : base,
                       lap_joint.matrix(), t2});
      ineqs.push_back({"(1 - kappa c)(1 - kappa c - 4 kappa |theta| sup|N|) |a|^2 <= kappa^2 |theta|^2 (Delta_d a, a)",
                       "vanishing estimate for Delta_d", base > 0 ? base * (base - 4 * kp * th_norm * sup_n) : base,
                       lap_d.matrix(), t2});
      const double c26 = base > 0 ? base * base - 2 * t2 * sup_n * sup_n : base;
      ineqs.push_back({"((1 - kappa c)^2 - 2 kappa^2 |theta|^2 sup|N|^2) |a|^2 <= 2 kappa^2 |theta|^2 (Delta_del a, a)",
                       "vanishing estimate for Delta_del", c26, lap_del.matrix(), 2 * t2});
      ineqs.push_back(
          {"((1 - kappa c)^2 - 2 kappa^2 |theta|^2 sup|N|^2) |a|^2 <= 2 kappa^2 |theta|^2 (Delta_delbar a, a)",
           "vanishing estimate for Delta_delbar", c26, lap_delbar.matrix(), 2 * t2});
      for (auto& q : ineqs) {
        const double lm = lam_min(q.scale * q.quad, idx, std::max(q.coef, 0.0));
        const double viol = std::max(0.0, -lm);
        if (q.coef <= 1e-12)
          rep.vacuous(s, q.name, q.anchor, deg(k), viol, tol(1e-10));
        else
          rep.bound(s, q.name, q.anchor, deg(k), viol, tol(1e-10));
      }
    }
    rep.note("vanishing estimates use kappa = C_w * max(c23, |L| * W) with sampled c23; degrees k > n reuse the "
             "constants of degree 2n - k");
  }

  void suite_nijenhuis() {
    const std::string s = "nijenhuis";
    check(s, "mu + mubar = -(1/4) N_J dual", "mu and mubar encode the Nijenhuis tensor", "all",
          op_norm((mu + mubar + cd(0.25) * nij.dual).matrix()), 1e-10);
    auto curv = lie::curvature_report(m, cfg.samples, cfg.seed);
    auto nj = lie::nabla_j_identity_check(m, curv);
    check(s, "|nabla J|^2 = |N_J|^2 / 4", "norm of nabla J on almost Kahler manifolds", "all", nj.residual_nj, 1e-10);
    check(s, "g(N(X,Y), JZ) = -2 g((nabla_Z J) X, Y)", "pointwise relation of nabla J and N_J", "all",
          nj.triple_residual, 1e-10);
    rep.meta["nabla_j"] = {{"nabla_j_sq", nj.nabla_j_sq},
                           {"quarter_n_sq", nj.quarter_n_sq},
                           {"curvature_sum", nj.curvature_sum},
                           {"curvature_route_residual", nj.residual_curvature},
                           {"pinched", nj.pinched},
                           {"K", nj.K},
                           {"delta", nj.delta}};
    if (nj.pinched)
      rep.bound(s, "|nabla J|^2 <= 10 n^2 delta K", "pinched curvature bound for nabla J", "all",
                std::max(0.0, nj.nabla_j_sq - nj.pinching_bound), tol(0.0));
    else
      rep.vacuous(s, "|nabla J|^2 <= 10 n^2 delta K", "pinched curvature bound for nabla J", "all", 0.0, 0.0);

    std::normal_distribution<double> nd;
    for (int nn = 1; nn <= 3; ++nn) {
      auto frame = algebra::HermitianFrame::orthonormal(nn);
      auto space = algebra::FormSpace::get(nn);
      for (auto b : space->blocks()) {
        double worst = 0;
        for (int t = 0; t < cfg.samples; ++t) {
          CMat R(nn, nn);
          for (int i = 0; i < nn; ++i)
            for (int j = 0; j < nn; ++j) R(i, j) = cd(nd(rng), nd(rng));
          R = 0.5 * (R + R.adjoint()).eval();
          BigradedForm r(nn);
          for (int i = 0; i < nn; ++i)
            for (int j = 0; j < nn; ++j) r = r + BigradedForm::basis(nn, {i + 1}, {j + 1}, cd(0, 1) * R(i, j));
          BigradedForm u(nn);
          CVec uv(space->block_dim(b));
          for (int i = 0; i < uv.size(); ++i) uv(i) = cd(nd(rng), nd(rng));
          u.set_block(b.p, b.q, uv);
          auto direct = algebra::xi_lambda_commutator(r, u, frame, algebra::XiRoute::Direct);
          auto eig = algebra::xi_lambda_commutator(r, u, frame, algebra::XiRoute::Eigen);
          worst = std::max(worst, (direct - eig).max_abs() / (uv.norm() * std::max(1.0, op_norm(R))));
        }
        check(s, "[Xi(r), Lambda] diagonal in an adapted unitary frame", "commutator of a real (1,1)-form with Lambda",
              "n=" + std::to_string(nn) + " " + bl(b), worst, 1e-10);
      }
    }
  }

  void suite_weitzenbock() {
    const std::string s = "weitzenbock";
    if (!lie::is_unimodular(m)) {
      rep.note("weitzenbock: skipped, the Lie algebra is not unimodular");
      return;
    }
    auto curv = lie::levi_civita(m);
    auto w = lie::weitzenbock_one_forms(m, cx, curv);
    check(s, "Delta_d = nabla* nabla + Ric on 1-forms", "Weitzenbock formula on 1-forms", "k=1", w.residual, 1e-10);
  }

  void suite_mu_bound() {
    const std::string s = "mu-bound";
    const double smu = op_norm(mu.matrix()), sn = nij.sup;
    const CMat mm = mus.matrix() * mu.matrix();
    const CMat lm = (lap_mu + lap_mubar).matrix();
    rep.meta["sup_mu"] = smu;
    rep.meta["sup_N"] = sn;
    for (auto b : S->blocks()) {
      auto idx = block_idx(b);
      auto top = [&](const CMat& q, double bound) {
        CMat M = sub(G * q, idx);
        M = 0.5 * (M + M.adjoint()).eval() - bound * sub(G, idx);
        M = 0.5 * (M + M.adjoint()).eval();
        Eigen::SelfAdjointEigenSolver<CMat> es(M, Eigen::EigenvaluesOnly);
        return std::max(0.0, es.eigenvalues().maxCoeff());
      };
      rep.bound(s, "|mu a|^2 <= sup|mu|^2 |a|^2", "pointwise bound for mu", bl(b), top(mm, smu * smu), tol(1e-10));
      rep.bound(s, "((Delta_mu + Delta_mubar) a, a) <= 2 sup|N|^2 |a|^2", "zeroth-order Laplacians bounded by N_J", bl(b),
            top(lm, 2 * sn * sn), tol(1e-10));
    }
  }

  void suite_dlambda() {
    const std::string s = "dlambda";
    const CMat star = cx.star.matrix(), J = cx.J.matrix();
    auto dl = ops::d_lambda_operator(d, star, J, ops::DLambdaRoute::Inverse);
    auto dl2 = ops::d_lambda_operator(d, star, J, ops::DLambdaRoute::Conjugated);
    auto dls = cx.adjoint(dl);
    check(s, "(-1)^(k+1) * J^-1 d * J^-1 = - * J^-1 d J *", "two expressions for d^Lambda", "all",
          op_norm((dl - dl2).matrix()), 1e-11);
    for (auto b : S->blocks()) {
      auto idx = block_idx(b);
      auto gram_of = [&](const CMat& op) {
        CMat c = cols(op, idx);
        return CMat(c.adjoint() * G * c);
      };
      check(s, "|d^Lambda a| = |d* a| on pure forms", "norm identity for d^Lambda", bl(b),
            op_norm(gram_of(dl.matrix()) - gram_of(ds.matrix())), 1e-11);
      check(s, "|d^Lambda* a| = |d a| on pure forms", "norm identity for the adjoint of d^Lambda", bl(b),
            op_norm(gram_of(dls.matrix()) - gram_of(d.matrix())), 1e-11);
      auto k1 = ops::kernel_intersection({d, ds}, b, G, 1e-9);
      auto k2 = ops::kernel_intersection({dl, dls}, b, G, 1e-9);
      double r = std::abs(k1.dim() - k2.dim()) + ops::subspace_distance(k1.basis, k2.basis, G) +
                 ops::subspace_distance(k2.basis, k1.basis, G);
      check(s, "ker d cap ker d* = ker d^Lambda cap ker d^Lambda*", "kernels of d and d^Lambda on pure forms", bl(b), r,
            1e-10);
    }
  }
};

}  // namespace

void constants_suite(Report& rep, const Config& cfg);

Report run_lie(const lie::LieModel& model, const std::vector<std::string>& suites_in, const Config& cfg) {
  Report rep;
  rep.model = model.name;
  std::vector<std::string> suites;
  if (suites_in.size() == 1 && suites_in[0] == "all") {
    for (const auto& s : suite_names())
      if (suite_applies_to_lie(s)) suites.push_back(s);
  } else {
    for (const auto& s : suites_in)
      if (!suite_applies_to_lie(s)) throw ArgumentError("suite '" + s + "' needs a grid model");
    suites = suites_in;
  }
  rep.meta["model"] = model.name;
  rep.meta["kind"] = "lie";
  rep.meta["dim"] = model.dim;
  rep.meta["n"] = model.n;
  rep.meta["seed"] = cfg.seed;
  rep.meta["samples"] = cfg.samples;
  rep.meta["suites"] = suites;
  if (cfg.tolerance) rep.meta["tolerance_override"] = *cfg.tolerance;
  LieRun run(model, cfg, rep);
  for (const auto& s : suites) {
    if (s == "d2") run.suite_d2();
    else if (s == "ak") run.suite_ak();
    else if (s == "laplacians") run.suite_laplacians();
    else if (s == "sl2") run.suite_sl2();
    else if (s == "dualities") run.suite_dualities();
    else if (s == "closure") run.suite_closure();
    else if (s == "orthogonality") run.suite_orthogonality();
    else if (s == "vanishing") run.suite_vanishing();
    else if (s == "nijenhuis") run.suite_nijenhuis();
    else if (s == "weitzenbock") run.suite_weitzenbock();
    else if (s == "mu-bound") run.suite_mu_bound();
    else if (s == "dlambda") run.suite_dlambda();
    else if (s == "constants") constants_suite(rep, cfg);
  }
  return rep;
}

void constants_suite(Report& rep, const Config& cfg) {
  const std::string s = "constants";
  auto tol = [&](double t) { return cfg.tolerance ? *cfg.tolerance : t; };
  nlohmann::ordered_json table = nlohmann::ordered_json::array();
  for (int n = 2; n <= 6; ++n) {
    auto c = croke_constants(n);
    rep.check(s, "trigonometric integral: quadrature = Beta closed form", "isoperimetric constant integral",
              "n=" + std::to_string(n), std::abs(c.integral - c.integral_beta), tol(1e-10));
    table.push_back({{"n", n}, {"integral", c.integral}, {"C_tilde", c.c_tilde}, {"C", c.c}});
  }
  auto c2 = croke_constants(2);
  const double pi = std::numbers::pi;
  rep.check(s, "C~_2 = 1/(128 pi^2)", "isoperimetric constant for n = 2", "n=2",
            std::abs(c2.c_tilde - 1.0 / (128 * pi * pi)), tol(1e-10));
  rep.check(s, "C_2 = 9/(8 sqrt(2) pi)", "Sobolev constant for n = 2", "n=2",
            std::abs(c2.c - 9.0 / (8 * std::sqrt(2.0) * pi)), tol(1e-10));
  rep.meta["croke_constants"] = table;
}

}  // namespace akh::verify
