#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "akh/errors.hpp"
#include "akh/exterior.hpp"
#include "akh/operators.hpp"
#include "akh/verification.hpp"

using namespace akh;
namespace vf = akh::verify;
using ojson = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kFail = 1, kUsage = 2 };

struct Options {
  std::string model;
  std::string suite = "all";
  std::optional<double> tol;
  std::string resolutions = "8,16,32";
  std::string out;
  std::uint64_t seed = vf::Config{}.seed;
  std::string format = "json";
  std::string n_values = "2,3,4,5,6";
  std::string form;
};

std::string iso_now() {
  auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::vector<int> int_list(const std::string& s, const char* what) {
  std::vector<int> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t pos = 0;
      int x = std::stoi(item, &pos);
      if (pos != item.size()) throw std::invalid_argument(item);
      v.push_back(x);
    } catch (const std::logic_error&) {
      throw ArgumentError(std::string("bad ") + what + " '" + item + "'");
    }
  }
  return v;
}

bool is_grid(const std::string& name) {
  if (grid::is_recipe_catalog_name(name)) return true;
  if (lie::is_catalog_name(name)) return false;
  std::ifstream in(name);
  if (!in) throw ArgumentError("model '" + name + "' is neither a catalog name nor a readable file");
  std::stringstream ss;
  ss << in.rdbuf();
  return grid::looks_like_recipe(ss.str());
}

vf::Config config_of(const Options& o) {
  vf::Config c;
  c.seed = o.seed;
  c.tolerance = o.tol;
  c.resolutions = int_list(o.resolutions, "resolution");
  return c;
}

/// Writes the main output (stdout or --out) and, with --out, the metadata sidecar.
void emit(const Options& o, const std::string& body, ojson meta, const std::string& command,
          const std::string& started, std::chrono::steady_clock::time_point t0) {
  if (o.out.empty()) {
    std::cout << body;
    return;
  }
  vf::write_atomic(o.out, body);
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  meta["command"] = command;
  meta["started_at"] = started;
  meta["finished_at"] = iso_now();
  meta["elapsed_seconds"] = elapsed;
  vf::write_atomic(o.out + ".meta.json", vf::dump(meta));
}

int cmd_verify(const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto started = iso_now();
  auto suites = vf::parse_suites(o.suite);
  auto cfg = config_of(o);
  vf::Report rep = is_grid(o.model) ? vf::run_grid(grid::load_recipe(o.model), suites, cfg)
                                    : vf::run_lie(lie::load_model(o.model), suites, cfg);
  std::string body = o.format == "md" ? vf::report_markdown(rep) : vf::dump(vf::report_json(rep));
  emit(o, body, rep.meta, "verify", started, t0);
  std::cerr << rep.model << ": " << rep.count(vf::Verdict::Pass) << " pass, " << rep.count(vf::Verdict::Exact)
            << " exact, " << rep.count(vf::Verdict::Vacuous) << " vacuous, " << rep.count(vf::Verdict::Fail)
            << " fail\n";
  return rep.failed() ? kFail : kOk;
}

int cmd_harmonic(const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto started = iso_now();
  vf::HarmonicTable t = is_grid(o.model) ? vf::harmonic_table(grid::load_recipe(o.model))
                                         : vf::harmonic_table(lie::load_model(o.model));
  std::string body = o.format == "md" ? vf::table_markdown(t) : vf::dump(vf::table_json(t));
  emit(o, body, ojson{{"model", t.model}}, "harmonic", started, t0);
  return kOk;
}

int cmd_constants(const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto started = iso_now();
  auto ns = int_list(o.n_values, "n");
  if (ns.empty()) throw ArgumentError("no n given");
  std::vector<vf::CrokeConstants> cs;
  for (int n : ns) cs.push_back(vf::croke_constants(n));
  std::string body;
  if (o.format == "md") {
    std::ostringstream os;
    os << std::setprecision(12);
    os << "| n | C~_n | C_n | integral (quadrature) | integral (Beta) |\n|---|---|---|---|---|\n";
    for (const auto& c : cs)
      os << "| " << c.n << " | " << c.c_tilde << " | " << c.c << " | " << c.integral << " | " << c.integral_beta
         << " |\n";
    body = os.str();
  } else {
    auto arr = ojson::array();
    for (const auto& c : cs)
      arr.push_back({{"n", c.n},
                     {"C_tilde", c.c_tilde},
                     {"C", c.c},
                     {"integral_quadrature", c.integral},
                     {"integral_beta", c.integral_beta},
                     {"sphere_2n_minus_2", c.sphere_2n_2},
                     {"sphere_2n_minus_1", c.sphere_2n_1}});
    body = vf::dump(arr);
  }
  emit(o, body, ojson{{"n", ns}}, "constants", started, t0);
  return kOk;
}

int cmd_grid_converge(const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto started = iso_now();
  auto cfg = config_of(o);
  if (cfg.resolutions.size() < 3) throw ArgumentError("grid-converge needs at least three resolutions");
  if (!is_grid(o.model)) throw ArgumentError("grid-converge needs a grid recipe");
  auto suites = vf::parse_suites(o.suite);
  std::vector<std::string> grid_suites;
  if (!(suites.size() == 1 && suites[0] == "all"))
    for (const auto& s : suites)
      if (s != "constants") grid_suites.push_back(s);
  auto rows = vf::grid_convergence(grid::load_recipe(o.model), cfg.resolutions, cfg, grid_suites);
  bool bad = false;
  for (const auto& r : rows)
    if (r.required && !r.exact && r.order < 1.7) bad = true;
  std::string body = o.format == "md" ? vf::convergence_markdown(rows) : vf::dump(vf::convergence_json(rows));
  emit(o, body, ojson{{"model", o.model}, {"resolutions", cfg.resolutions}, {"seed", cfg.seed}}, "grid-converge",
       started, t0);
  return bad ? kFail : kOk;
}

int cmd_solve_d(const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto started = iso_now();
  if (is_grid(o.model)) throw ArgumentError("solve-d needs a Lie model");
  auto m = lie::load_model(o.model);
  auto cx = lie::build_complex(m);
  RVec real = RVec::Zero(std::size_t{1} << m.dim);
  int degree = -1;
  std::stringstream ss(o.form);
  std::string term;
  while (std::getline(ss, term, ';')) {
    if (term.empty()) continue;
    auto colon = term.find(':');
    if (colon == std::string::npos) throw ArgumentError("form term '" + term + "' needs 'indices:coefficient'");
    auto idx = int_list(term.substr(0, colon), "index");
    double coef = 0;
    try {
      coef = std::stod(term.substr(colon + 1));
    } catch (const std::logic_error&) {
      throw ArgumentError("bad coefficient in '" + term + "'");
    }
    Mask mask = 0;
    for (int i : idx) {
      if (i < 1 || i > m.dim) throw ArgumentError("index " + std::to_string(i) + " out of range");
      if (mask & (Mask{1} << (i - 1))) throw ArgumentError("repeated index in '" + term + "'");
      mask |= Mask{1} << (i - 1);
    }
    // sort sign of the given order relative to increasing order
    int sign = 1;
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = a + 1; b < idx.size(); ++b)
        if (idx[a] > idx[b]) sign = -sign;
    if (degree >= 0 && degree != static_cast<int>(idx.size())) throw ArgumentError("form must be homogeneous");
    degree = static_cast<int>(idx.size());
    real(mask) += sign * coef;
  }
  if (degree < 0) throw ArgumentError("--form is empty");
  CVec alpha = cx.from_real_form(real);
  CVec beta = ops::solve_d_minnorm(alpha, cx.d, cx.gram);
  CVec beta_real = cx.to_real * beta;
  const double resid = (cx.d.apply(beta) - alpha).norm();
  auto sol = ojson::array();
  for (Mask k = 0; k < static_cast<Mask>(beta_real.size()); ++k) {
    if (std::abs(beta_real(k)) < 1e-13) continue;
    auto b = ext::bits(k);
    for (auto& i : b) ++i;
    sol.push_back({{"indices", b}, {"coefficient", beta_real(k).real()}});
  }
  ojson j{{"model", m.name}, {"degree", degree - 1}, {"solution", sol}, {"residual", resid}};
  std::string body;
  if (o.format == "md") {
    std::ostringstream os;
    os << std::setprecision(12) << "# Minimal-norm primitive on " << m.name << "\n\n| indices | coefficient |\n|---|---|\n";
    for (const auto& t : sol) {
      std::string ix;
      for (int i : t["indices"]) ix += (ix.empty() ? "" : ",") + std::to_string(i);
      os << "| " << (ix.empty() ? "1" : ix) << " | " << t["coefficient"].get<double>() << " |\n";
    }
    os << "\nresidual |d beta - alpha| = " << resid << "\n";
    body = os.str();
  } else {
    body = vf::dump(j);
  }
  emit(o, body, ojson{{"model", m.name}}, "solve-d", started, t0);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"akh: almost Kahler harmonic-form verification"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* c, bool model_required) {
    auto* opt = c->add_option("--model", o.model, "catalog name or TOML path");
    if (model_required) opt->required();
    c->add_option("--out", o.out, "output file (stdout if omitted)");
    c->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "md"}));
  };
  auto* verify = app.add_subcommand("verify", "run verification suites");
  add_common(verify, true);
  verify->add_option("--suite", o.suite, "comma-separated suites or 'all'");
  verify->add_option("--tol", o.tol, "override every tolerance")->check(CLI::PositiveNumber);
  verify->add_option("--resolutions", o.resolutions, "grid resolutions, e.g. 8,16,32");
  verify->add_option("--seed", o.seed, "random seed");

  auto* harmonic = app.add_subcommand("harmonic", "harmonic dimension tables");
  add_common(harmonic, true);

  auto* constants = app.add_subcommand("constants", "isoperimetric and Sobolev constants");
  add_common(constants, false);
  constants->add_option("--n", o.n_values, "comma-separated complex dimensions (>= 2)");

  auto* conv = app.add_subcommand("grid-converge", "observed convergence orders on a grid recipe");
  add_common(conv, true);
  conv->add_option("--suite", o.suite, "comma-separated suites or 'all'");
  conv->add_option("--resolutions", o.resolutions, "at least three resolutions");
  conv->add_option("--seed", o.seed, "random seed");

  auto* solve = app.add_subcommand("solve-d", "minimal-norm solution of d beta = alpha");
  add_common(solve, true);
  solve->add_option("--form", o.form, "real form, e.g. \"1,2:1.0;3,4:-2\"")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*verify) return cmd_verify(o);
    if (*harmonic) return cmd_harmonic(o);
    if (*constants) return cmd_constants(o);
    if (*conv) return cmd_grid_converge(o);
    if (*solve) return cmd_solve_d(o);
  } catch (const InconsistentRhsError& e) {
    std::cerr << "akh: " << e.what() << "\n";
    return kFail;
  } catch (const ValidationError& e) {
    std::cerr << "akh: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "akh: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
