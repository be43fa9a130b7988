#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "akh/errors.hpp"
#include "akh/verification.hpp"

namespace akh::verify {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Vacuous: return "vacuous";
    case Verdict::Exact: return "exact";
  }
  return "fail";
}

Entry& Report::check(const std::string& suite, const std::string& identity, const std::string& anchor,
                     const std::string& block, double residual, double tolerance) {
  Entry e{suite, identity, anchor, block, residual, tolerance, Verdict::Pass};
  if (!std::isfinite(residual))
    e.verdict = Verdict::Fail;
  else if (residual == 0.0)
    e.verdict = Verdict::Exact;
  else
    e.verdict = residual <= tolerance ? Verdict::Pass : Verdict::Fail;
  entries.push_back(e);
  return entries.back();
}

Entry& Report::bound(const std::string& suite, const std::string& identity, const std::string& anchor,
                     const std::string& block, double residual, double tolerance) {
  const bool ok = std::isfinite(residual) && residual <= tolerance;
  entries.push_back({suite, identity, anchor, block, residual, tolerance, ok ? Verdict::Pass : Verdict::Fail});
  return entries.back();
}

Entry& Report::vacuous(const std::string& suite, const std::string& identity, const std::string& anchor,
                       const std::string& block, double residual, double tolerance) {
  entries.push_back({suite, identity, anchor, block, residual, tolerance, Verdict::Vacuous});
  return entries.back();
}

void Report::note(const std::string& text) {
  if (!meta.contains("notes")) meta["notes"] = nlohmann::ordered_json::array();
  meta["notes"].push_back(text);
}

bool Report::failed() const {
  return std::any_of(entries.begin(), entries.end(), [](const Entry& e) { return e.verdict == Verdict::Fail; });
}

std::size_t Report::count(Verdict v) const {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [v](const Entry& e) { return e.verdict == v; }));
}

// ------------------------------------------------------------------ suites

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "d2",        "ak",          "laplacians", "sl2",      "dualities", "closure", "orthogonality", "vanishing",
      "nijenhuis", "weitzenbock", "mu-bound",   "dlambda",  "constants", "djdf",    "soundness"};
  return names;
}

bool suite_applies_to_lie(const std::string& s) { return s != "djdf" && s != "soundness"; }

bool suite_applies_to_grid(const std::string& s) {
  static const std::vector<std::string> grid = {"d2",   "ak",        "nijenhuis", "orthogonality",
                                                "vanishing", "djdf", "soundness", "constants"};
  return std::find(grid.begin(), grid.end(), s) != grid.end();
}

std::vector<std::string> parse_suites(const std::string& selector) {
  std::vector<std::string> picked;
  std::stringstream ss(selector);
  std::string item;
  bool all = false;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) continue;
    if (item == "all") {
      all = true;
      continue;
    }
    const auto& names = suite_names();
    if (std::find(names.begin(), names.end(), item) == names.end()) throw ArgumentError("unknown suite '" + item + "'");
    if (std::find(picked.begin(), picked.end(), item) == picked.end()) picked.push_back(item);
  }
  if (all) return {"all"};
  if (picked.empty()) throw ArgumentError("no suite selected");
  std::vector<std::string> ordered;
  for (const auto& n : suite_names())
    if (std::find(picked.begin(), picked.end(), n) != picked.end()) ordered.push_back(n);
  return ordered;
}

// --------------------------------------------------------------- constants

double sphere_volume(int m) {
  const double k = (m + 1) / 2.0;
  return 2.0 * std::pow(std::numbers::pi, k) / boost::math::tgamma(k);
}

CrokeConstants croke_constants(int n) {
  if (n < 2) throw DomainError("Croke constants need n >= 2");
  CrokeConstants c;
  c.n = n;
  const double a = static_cast<double>(n) / (n - 1);
  const double b = 2.0 * n - 2.0;
  auto integrand = [&](double t) { return std::pow(std::cos(t), a) * std::pow(std::sin(t), b); };
  double err = 0;
  c.integral = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, std::numbers::pi / 2, 15,
                                                                             1e-15, &err);
  c.integral_beta = 0.5 * boost::math::beta((a + 1) / 2, (b + 1) / 2);
  c.sphere_2n_2 = sphere_volume(2 * n - 2);
  c.sphere_2n_1 = sphere_volume(2 * n - 1);
  c.c_tilde = std::pow(c.sphere_2n_2, 2 * n - 2) / std::pow(c.sphere_2n_1, 2 * n - 1) * std::pow(c.integral, 2 * n - 2);
  const double r = (2.0 * n - 1) / (n - 1);
  c.c = r * r * std::pow(c.c_tilde, 1.0 / n);
  return c;
}

double observed_order(int n1, double r1, int n2, double r2) {
  if (r1 <= 0 || r2 <= 0) return 0.0;
  return std::log(r1 / r2) / std::log(static_cast<double>(n2) / n1);
}

// ------------------------------------------------------------------ output

nlohmann::ordered_json report_json(const Report& r) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& e : r.entries) {
    nlohmann::ordered_json j;
    j["suite"] = e.suite;
    j["identity"] = e.identity;
    j["anchor"] = e.anchor;
    j["block"] = e.block;
    j["residual"] = e.residual;
    j["tolerance"] = e.tolerance;
    j["verdict"] = to_string(e.verdict);
    arr.push_back(j);
  }
  return arr;
}

namespace {

std::string sci(double v) {
  std::ostringstream os;
  os << std::setprecision(3) << std::scientific << v;
  return os.str();
}

std::string dims_row(const std::vector<std::vector<int>>& m, int p) {
  std::string s;
  for (std::size_t q = 0; q < m[p].size(); ++q) s += (q ? " " : "") + std::to_string(m[p][q]);
  return s;
}

}  // namespace

std::string report_markdown(const Report& r) {
  std::ostringstream os;
  os << "# Verification report: " << r.model << "\n\n";
  os << "| suite | identity | block | residual | tolerance | verdict |\n";
  os << "|---|---|---|---|---|---|\n";
  for (const auto& e : r.entries)
    os << "| " << e.suite << " | " << e.identity << " | " << e.block << " | " << sci(e.residual) << " | "
       << sci(e.tolerance) << " | " << to_string(e.verdict) << " |\n";
  os << "\n" << r.count(Verdict::Pass) << " pass, " << r.count(Verdict::Exact) << " exact, "
     << r.count(Verdict::Vacuous) << " vacuous, " << r.count(Verdict::Fail) << " fail\n";
  return os.str();
}

nlohmann::ordered_json table_json(const HarmonicTable& t) {
  nlohmann::ordered_json j;
  j["model"] = t.model;
  j["n"] = t.n;
  j["method"] = t.fourier ? "fourier-symbol" : "dense-kernel";
  j["de_rham"] = t.de_rham;
  j["d_bidegree"] = t.d_bideg;
  j["del"] = t.del;
  j["delbar"] = t.delbar;
  j["joint"] = t.joint;
  j["conjugation_symmetric"] = t.conjugation_symmetric;
  j["hodge_symmetric"] = t.hodge_symmetric;
  j["serre_symmetric"] = t.serre_symmetric;
  return j;
}

std::string table_markdown(const HarmonicTable& t) {
  std::ostringstream os;
  os << "# Harmonic dimensions: " << t.model << " (n = " << t.n << ", "
     << (t.fourier ? "Fourier-symbol counts" : "invariant-complex dimensions") << ")\n\n";
  os << "| degree |";
  for (std::size_t k = 0; k < t.de_rham.size(); ++k) os << " " << k << " |";
  os << "\n|---|";
  for (std::size_t k = 0; k < t.de_rham.size(); ++k) os << "---|";
  os << "\n| ker Delta_d |";
  for (int v : t.de_rham) os << " " << v << " |";
  os << "\n\n| p | ker Delta_d (q = 0..n) | ker Delta_del | ker Delta_delbar | joint |\n|---|---|---|---|---|\n";
  for (int p = 0; p <= t.n; ++p)
    os << "| " << p << " | " << (t.d_bideg.empty() ? std::string("-") : dims_row(t.d_bideg, p)) << " | "
       << dims_row(t.del, p) << " | " << dims_row(t.delbar, p) << " | " << dims_row(t.joint, p) << " |\n";
  auto flag = [](bool b) { return b ? "OK" : "MISMATCH"; };
  os << "\nconjugation l(p,q) = l(q,p): " << flag(t.conjugation_symmetric) << "\n";
  os << "Hodge l(p,q) = l(n-q,n-p): " << flag(t.hodge_symmetric) << "\n";
  os << "Serre l(p,q) = l(n-p,n-q): " << flag(t.serre_symmetric) << "\n";
  return os.str();
}

nlohmann::ordered_json convergence_json(const std::vector<ConvergenceRow>& rows) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json j;
    j["suite"] = r.suite;
    j["identity"] = r.identity;
    j["anchor"] = r.anchor;
    j["N"] = r.N;
    j["residuals"] = r.residuals;
    j["orders"] = r.orders;
    j["order"] = r.order;
    j["status"] = r.exact ? "exact" : (!r.monotone ? "unstable" : "converging");
    j["required"] = r.required;
    arr.push_back(j);
  }
  return arr;
}

std::string convergence_markdown(const std::vector<ConvergenceRow>& rows) {
  std::ostringstream os;
  os << "| suite | identity | residuals | order | status |\n|---|---|---|---|---|\n";
  for (const auto& r : rows) {
    std::string res;
    for (std::size_t i = 0; i < r.residuals.size(); ++i) res += (i ? ", " : "") + sci(r.residuals[i]);
    std::ostringstream ord;
    ord << std::fixed << std::setprecision(3) << r.order;
    os << "| " << r.suite << " | " << r.identity << " | " << res << " | " << (r.exact ? "-" : ord.str()) << " | "
       << (r.exact ? "exact" : (!r.monotone ? "unstable" : "converging")) << " |\n";
  }
  return os.str();
}

std::string dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ArgumentError("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw ArgumentError("write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, target);
}

}  // namespace akh::verify
