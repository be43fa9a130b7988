// Acceptance run: one PASS/FAIL line per criterion.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "akh/verification.hpp"

using namespace akh;
using namespace akh::verify;

namespace {

using Clock = std::chrono::steady_clock;
const std::vector<std::string> kModels = {"torus4", "kodaira-thurston", "nilpotent6"};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Tally {
  bool ok = true;
  double worst = 0;
  std::size_t n = 0;
  void take(const Entry& e, double limit) {
    ++n;
    worst = std::max(worst, e.residual);
    if (e.verdict == Verdict::Fail || !(e.residual < limit)) ok = false;
  }
};

bool contains(const std::string& s, const std::string& needle) { return s.find(needle) != std::string::npos; }

Tally collect(const Report& r, double limit, const std::function<bool(const Entry&)>& pick) {
  Tally t;
  for (const auto& e : r.entries)
    if (pick(e)) t.take(e, limit);
  if (t.n == 0) t.ok = false;
  return t;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

int failures = 0;
void line(int k, bool ok, const std::string& detail) {
  std::cout << "criterion " << k << ": " << (ok ? "PASS" : "FAIL") << "  " << detail << std::endl;
  if (!ok) ++failures;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  const std::string akh_bin = argc > 1 ? argv[1] : "akh";
  const std::string work = argc > 2 ? argv[2] : ".";
  Config cfg;

  std::vector<lie::LieModel> models;
  for (const auto& name : kModels) models.push_back(lie::load_model(name));

  {  // 1
    auto t0 = Clock::now();
    bool ok = true;
    double worst = 0;
    for (const auto& name : kModels) {
      auto t = collect(run_lie(lie::load_model(name), {"d2"}, cfg), 1e-12, [](const Entry&) { return true; });
      ok &= t.ok && t.n == 7;
      worst = std::max(worst, t.worst);
    }
    const double dt = seconds_since(t0);
    ok &= dt < 5.0;
    line(1, ok, "seven d^2 relations on 3 models, max residual " + sci(worst) + ", " + std::to_string(dt) + " s");
  }

  {  // 2
    bool ok = true, nonintegrable = false;
    double worst = 0;
    for (const auto& m : models) {
      auto t = collect(run_lie(m, {"ak"}, cfg), 1e-11, [](const Entry&) { return true; });
      ok &= t.ok && t.n == 10;
      worst = std::max(worst, t.worst);
      auto cx = lie::build_complex(m);
      nonintegrable |= lie::nijenhuis_tensor(m, cx).sup > 1e-8;
    }
    line(2, ok && nonintegrable,
         "ten commutator identities, max residual " + sci(worst) + (nonintegrable ? ", N_J != 0 covered" : ""));
  }

  {  // 3
    bool ok = true;
    double worst = 0;
    for (const auto& m : models) {
      auto t = collect(run_lie(m, {"laplacians"}, cfg), 1e-11, [](const Entry& e) {
        return contains(e.identity, "Delta_delbar + Delta_mu = Delta_del + Delta_mubar") ||
               contains(e.identity, "Delta_d expansion") || contains(e.anchor, "half-sum");
      });
      ok &= t.ok;
      worst = std::max(worst, t.worst);
    }
    line(3, ok, "symmetry, Delta_d expansion and half-sum identities per block, max residual " + sci(worst));
  }

  {  // 4
    bool ok = true;
    double bracket = 0, recon = 0;
    for (const auto& m : models) {
      auto r = run_lie(m, {"sl2"}, cfg);
      auto a = collect(r, 1e-10, [](const Entry& e) { return contains(e.identity, "[Lambda, L] = (n - k) id"); });
      auto b = collect(r, 1e-10, [](const Entry& e) { return contains(e.identity, "isomorphically"); });
      auto c = collect(r, 1e-10, [](const Entry& e) { return contains(e.identity, "primitive"); });
      ok &= a.ok && b.ok && c.ok && !r.failed();
      bracket = std::max(bracket, a.worst);
      recon = std::max(recon, c.worst);
    }
    line(4, ok, "[Lambda, L] residual " + sci(bracket) + ", hard Lefschetz injective with equal dims, reconstruction " +
                    sci(recon));
  }

  {  // 5
    bool ok = true;
    for (const auto& m : models) {
      auto r = run_lie(m, {"dualities"}, cfg);
      auto t = collect(r, 1e-10, [](const Entry& e) {
        return contains(e.identity, "conjugation maps") || contains(e.identity, "Hodge star maps");
      });
      auto tab = harmonic_table(m);
      ok &= t.ok && tab.conjugation_symmetric && tab.hodge_symmetric;
    }
    auto kt = harmonic_table(lie::load_model("kodaira-thurston"));
    const bool dims = kt.de_rham == std::vector<int>{1, 3, 4, 3, 1};
    line(5, ok && dims, std::string("conjugation and Hodge symmetric; kodaira-thurston ker Delta_d ") +
                            (dims ? "(1,3,4,3,1)" : "mismatch"));
  }

  {  // 6
    bool ok = true;
    double coupling = 0, nabla = 0, p2 = 0;
    Config c6 = cfg;
    c6.samples = 100;
    for (const auto& m : models) {
      auto r = run_lie(m, {"nijenhuis"}, c6);
      auto a = collect(r, 1e-10, [](const Entry& e) { return contains(e.identity, "mu + mubar"); });
      auto b = collect(r, 1e-10, [](const Entry& e) { return contains(e.identity, "|nabla J|^2 = "); });
      auto c = collect(r, 1e-10, [](const Entry& e) { return contains(e.identity, "Xi(r)"); });
      ok &= a.ok && b.ok && c.ok;
      coupling = std::max(coupling, a.worst);
      nabla = std::max(nabla, b.worst);
      p2 = std::max(p2, c.worst);
    }
    line(6, ok, "coupling " + sci(coupling) + ", |nabla J|^2 identity " + sci(nabla) + ", two-route commutator " +
                    sci(p2) + " (100 samples per bidegree, n <= 3)");
  }

  {  // 7
    bool ok = true;
    double worst = 0;
    for (const auto& m : models) {
      auto t = collect(run_lie(m, {"vanishing"}, cfg), 1e-10, [](const Entry& e) {
        return contains(e.identity, "six-term") || contains(e.identity, "rho");
      });
      ok &= t.ok;
      worst = std::max(worst, t.worst);
    }
    auto t0 = Clock::now();
    auto r = run_grid(grid::load_recipe("grid-varying"), {"vanishing", "djdf"}, cfg);
    const double dt = seconds_since(t0);
    double min_order = 10;
    bool grid_ok = true;
    for (const auto& row : r.meta["convergence"]) {
      if (row["status"] == "exact") continue;
      const double o = row["order"].get<double>();
      min_order = std::min(min_order, o);
      if (o < 1.9) grid_ok = false;
    }
    ok &= grid_ok && dt < 120.0 && !r.failed();
    line(7, ok, "Lie max residual " + sci(worst) + "; grid-varying min order " + std::to_string(min_order) +
                    " over N=8,16,32 in " + std::to_string(dt) + " s");
  }

  {  // 8
    auto t = collect(run_lie(lie::load_model("kodaira-thurston"), {"orthogonality"}, cfg), 1e-10,
                     [](const Entry& e) { return contains(e.identity, "(a, omega~ ^ b) = 0"); });
    line(8, t.ok, "kodaira-thurston, theta = eps^4, max |(a, omega~ ^ b)| " + sci(t.worst) + " over " +
                      std::to_string(t.n) + " blocks");
  }

  {  // 9
    Report r;
    auto tilde = croke_constants(2);
    const double pi = 3.14159265358979323846;
    bool ok = std::abs(tilde.c_tilde - 1.0 / (128 * pi * pi)) < 1e-10;
    double worst = 0;
    for (int n = 2; n <= 6; ++n) {
      auto c = croke_constants(n);
      worst = std::max(worst, std::abs(c.integral - c.integral_beta));
    }
    ok &= worst < 1e-10;
    line(9, ok, "C~_2 = " + sci(tilde.c_tilde) + ", Beta cross-check max " + sci(worst));
  }

  {  // 10
    bool ok = true;
    double worst = 0;
    for (const auto& m : models) {
      auto t = collect(run_lie(m, {"weitzenbock"}, cfg), 1e-10, [](const Entry&) { return true; });
      ok &= t.ok;
      worst = std::max(worst, t.worst);
    }
    line(10, ok, "Weitzenbock residual on 1-forms " + sci(worst));
  }

  {  // 11
    Config c11 = cfg;
    c11.resolutions = {8, 16};
    auto r = run_grid(grid::load_recipe("grid-flat"), {"soundness"}, c11);
    auto dd = collect(r, 1e-12, [](const Entry& e) { return contains(e.identity, "d^2 = 0"); });
    auto betti = collect(r, 0.5, [](const Entry& e) { return contains(e.identity, "Betti") && contains(e.block, "N=8"); });
    line(11, dd.ok && betti.ok && betti.n == 5 && !r.failed(),
         "grid d^2 residual " + sci(dd.worst) + ", flat N=8 harmonic counts (1,4,6,4,1)");
  }

  {  // 12
    const std::string a = work + "/acceptance_run_a.json", b = work + "/acceptance_run_b.json";
    const std::string base = "\"" + akh_bin + "\" verify --model kodaira-thurston --suite all --out ";
    int ra = std::system((base + "\"" + a + "\" 2>/dev/null").c_str());
    int rb = std::system((base + "\"" + b + "\" 2>/dev/null").c_str());
    const std::string sa = slurp(a), sb = slurp(b);
    const bool ok = ra == 0 && rb == 0 && !sa.empty() && sa == sb;
    line(12, ok, "two default kodaira-thurston runs, " + std::to_string(sa.size()) + " bytes, " +
                     (sa == sb ? "identical" : "different"));
  }

  std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria fail") << std::endl;
  return failures == 0 ? 0 : 1;
}
