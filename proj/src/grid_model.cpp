#include "akh/grid_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "akh/catalog.hpp"
#include "akh/errors.hpp"
#include "akh/exterior.hpp"
#include "akh/lie_model.hpp"
#include "akh/parallel.hpp"

namespace akh::grid {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// ---------------------------------------------------------------- recipes

double number_of(const toml::node& node, const std::string& where) {
  if (auto v = node.value<double>()) return *v;
  throw ParseError(where + ": expected a number");
}

int integer_of(const toml::node& node, const std::string& where, int lo, int hi) {
  double v = number_of(node, where);
  if (v != std::floor(v) || v < lo || v > hi)
    throw RecipeError(where + ": expected an integer in " + std::to_string(lo) + ".." + std::to_string(hi));
  return static_cast<int>(v);
}

void reject_unknown(const toml::table& t, const std::vector<std::string>& allowed, const std::string& where) {
  for (auto&& [k, v] : t) {
    (void)v;
    if (std::find(allowed.begin(), allowed.end(), std::string(k.str())) == allowed.end())
      throw ParseError(where + ": unknown key '" + std::string(k.str()) + "'");
  }
}

const toml::table& table_of(const toml::node& node, const std::string& where) {
  auto* t = node.as_table();
  if (!t) throw ParseError(where + ": expected a table");
  return *t;
}

JPerturbation parse_j(const toml::table& t) {
  const std::string w = "fields.j_perturbation";
  reject_unknown(t, {"axis_pair", "amplitude", "mode", "axis"}, w);
  JPerturbation j;
  if (auto* pair = t["axis_pair"].as_array()) {
    if (pair->size() != 2) throw RecipeError(w + ".axis_pair: expected two axes");
    j.axis_pair = {integer_of((*pair)[0], w + ".axis_pair", 1, 4), integer_of((*pair)[1], w + ".axis_pair", 1, 4)};
    if (j.axis_pair[0] == j.axis_pair[1]) throw RecipeError(w + ".axis_pair: axes must differ");
  } else if (t.contains("axis_pair")) {
    throw ParseError(w + ".axis_pair: expected an array");
  }
  if (t.contains("amplitude")) j.amplitude = number_of(*t.get("amplitude"), w + ".amplitude");
  if (t.contains("mode")) j.mode = integer_of(*t.get("mode"), w + ".mode", 1, 64);
  if (t.contains("axis")) j.axis = integer_of(*t.get("axis"), w + ".axis", 1, 4);
  return j;
}

OmegaPerturbation parse_omega(const toml::table& t) {
  const std::string w = "fields.omega_perturbation";
  reject_unknown(t, {"amplitude", "mode", "kind"}, w);
  OmegaPerturbation o;
  if (t.contains("amplitude")) o.amplitude = number_of(*t.get("amplitude"), w + ".amplitude");
  if (t.contains("mode")) o.mode = integer_of(*t.get("mode"), w + ".mode", 1, 64);
  if (t.contains("kind")) {
    auto k = t["kind"].value<std::string>();
    if (!k || (*k != "exact" && *k != "raw")) throw RecipeError(w + ".kind: expected \"exact\" or \"raw\"");
    o.kind = *k;
  }
  return o;
}

FunctionRecipe parse_f(const toml::table& t) {
  const std::string w = "fields.f";
  reject_unknown(t, {"offset", "amplitude", "mode", "axis", "A", "B"}, w);
  FunctionRecipe f;
  if (t.contains("offset")) f.offset = number_of(*t.get("offset"), w + ".offset");
  if (t.contains("amplitude")) f.amplitude = number_of(*t.get("amplitude"), w + ".amplitude");
  if (t.contains("mode")) f.mode = integer_of(*t.get("mode"), w + ".mode", 1, 64);
  if (t.contains("axis")) f.axis = integer_of(*t.get("axis"), w + ".axis", 1, 4);
  if (t.contains("A")) f.A = number_of(*t.get("A"), w + ".A");
  if (t.contains("B")) f.B = number_of(*t.get("B"), w + ".B");
  if (f.A < 0 || f.B < 0) throw RecipeError(w + ": A and B must be non-negative");
  return f;
}

ThetaRecipe parse_theta(const toml::table& t) {
  const std::string w = "fields.theta";
  reject_unknown(t, {"amplitudes", "mode"}, w);
  ThetaRecipe th;
  if (t.contains("amplitudes")) {
    auto* arr = t["amplitudes"].as_array();
    if (!arr || arr->size() != 4) throw RecipeError(w + ".amplitudes: expected four numbers");
    for (int a = 0; a < 4; ++a) th.amplitudes[a] = number_of((*arr)[a], w + ".amplitudes");
  }
  if (t.contains("mode")) th.mode = integer_of(*t.get("mode"), w + ".mode", 1, 64);
  return th;
}

// ------------------------------------------------------------ index tables

struct DegreeTables {
  std::array<std::vector<Mask>, 5> real_masks;  // subsets(4, k)
  std::array<std::vector<Mask>, 5> big_masks;   // bigraded order within degree k
  std::array<std::vector<int>, 5> big_index;    // FormSpace index of each component
  std::array<std::vector<Bidegree>, 5> big_bideg;
  struct Stencil {
    int out, axis, in, sign;
  };
  std::array<std::vector<Stencil>, 4> stencil;  // d from degree k to k+1 on real masks
  struct WedgeEntry {
    int i, j, o, sign;
  };
  std::array<std::array<std::vector<WedgeEntry>, 5>, 5> wedge;  // bigraded

  DegreeTables() {
    const auto& S = *algebra::FormSpace::get(2);
    for (int k = 0; k <= 4; ++k) {
      real_masks[k] = ext::subsets(4, k);
      big_index[k] = S.degree_indices(k);
      for (int idx : big_index[k]) {
        big_masks[k].push_back(S.mask(idx));
        big_bideg[k].push_back(S.bidegree(idx));
      }
    }
    for (int k = 0; k < 4; ++k) {
      const auto& outs = real_masks[k + 1];
      for (int o = 0; o < static_cast<int>(outs.size()); ++o)
        for (int a = 0; a < 4; ++a) {
          Mask bit = Mask{1} << a;
          if (!(outs[o] & bit)) continue;
          Mask in = outs[o] ^ bit;
          int i = static_cast<int>(std::find(real_masks[k].begin(), real_masks[k].end(), in) - real_masks[k].begin());
          stencil[k].push_back({o, a, i, ext::wedge_sign(bit, in)});
        }
    }
    for (int ka = 0; ka <= 4; ++ka)
      for (int kb = 0; ka + kb <= 4; ++kb)
        for (int i = 0; i < static_cast<int>(big_masks[ka].size()); ++i)
          for (int j = 0; j < static_cast<int>(big_masks[kb].size()); ++j) {
            Mask a = big_masks[ka][i], b = big_masks[kb][j];
            if (a & b) continue;
            const auto& outs = big_masks[ka + kb];
            int o = static_cast<int>(std::find(outs.begin(), outs.end(), a | b) - outs.begin());
            wedge[ka][kb].push_back({i, j, o, ext::wedge_sign(a, b)});
          }
  }
};

const DegreeTables& tables() {
  static const DegreeTables t;
  return t;
}

using SmallVec = Eigen::Matrix<cd, Eigen::Dynamic, 1, 0, 6, 1>;

RMat rotation(int p, int q, double angle) {
  RMat R = RMat::Identity(4, 4);
  R(p, p) = std::cos(angle);
  R(q, p) = std::sin(angle);
  R(p, q) = -std::sin(angle);
  R(q, q) = std::cos(angle);
  return R;
}

RMat reference_j() {
  RMat J = RMat::Zero(4, 4);
  J(1, 0) = 1;
  J(0, 1) = -1;
  J(3, 2) = 1;
  J(2, 3) = -1;
  return J;
}

std::string point_label(const std::array<int, 4>& c) {
  std::ostringstream os;
  os << "(" << c[0] << "," << c[1] << "," << c[2] << "," << c[3] << ")";
  return os.str();
}

}  // namespace

// ------------------------------------------------------------ recipe API

int GridRecipe::band() const {
  int b = 0;
  if (j && j->amplitude != 0) b = std::max(b, j->mode);
  if (omega && omega->amplitude != 0) b = std::max(b, omega->mode);
  if (f && f->amplitude != 0) b = std::max(b, f->mode);
  if (theta) b = std::max(b, theta->mode);
  return b;
}

bool GridRecipe::constant_structure() const {
  return !(j && j->amplitude != 0) && !(omega && omega->amplitude != 0);
}

GridRecipe parse_recipe(const std::string& text, const std::string& source) {
  toml::table root;
  try {
    root = toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    throw ParseError(source + ": " + std::string(e.description()));
  }
  reject_unknown(root, {"grid", "fields"}, "recipe");
  GridRecipe r;
  if (!root.contains("grid")) throw ParseError("missing table [grid]");
  const auto& grid = table_of(*root.get("grid"), "[grid]");
  reject_unknown(grid, {"N", "name"}, "[grid]");
  if (!grid.contains("N")) throw ParseError("[grid]: missing key 'N'");
  r.N = integer_of(*grid.get("N"), "[grid].N", 4, 256);
  if (r.N % 2) throw RecipeError("[grid].N must be even");
  if (auto nm = grid["name"].value<std::string>()) r.name = *nm;
  if (r.name.empty()) r.name = source;
  if (root.contains("fields")) {
    const auto& fields = table_of(*root.get("fields"), "[fields]");
    reject_unknown(fields, {"j_perturbation", "omega_perturbation", "f", "theta"}, "[fields]");
    if (fields.contains("j_perturbation"))
      r.j = parse_j(table_of(*fields.get("j_perturbation"), "fields.j_perturbation"));
    if (fields.contains("omega_perturbation"))
      r.omega = parse_omega(table_of(*fields.get("omega_perturbation"), "fields.omega_perturbation"));
    if (fields.contains("f")) r.f = parse_f(table_of(*fields.get("f"), "fields.f"));
    if (fields.contains("theta")) r.theta = parse_theta(table_of(*fields.get("theta"), "fields.theta"));
  }
  return r;
}

std::vector<std::string> recipe_catalog_names() { return {"grid-flat", "grid-varying"}; }

bool is_recipe_catalog_name(const std::string& name) {
  auto names = recipe_catalog_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

const std::string& recipe_catalog_source(const std::string& name) {
  static const std::map<std::string, std::string> sources = {
      {"grid-flat", catalog::kGridFlat},
      {"grid-varying", catalog::kGridVarying},
  };
  auto it = sources.find(name);
  if (it == sources.end()) throw ArgumentError("unknown grid recipe '" + name + "'");
  return it->second;
}

GridRecipe load_recipe(const std::string& name_or_path) {
  std::ifstream in(name_or_path);
  if (in) {
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_recipe(ss.str(), name_or_path);
  }
  if (is_recipe_catalog_name(name_or_path)) return parse_recipe(recipe_catalog_source(name_or_path), name_or_path);
  throw ArgumentError("no recipe file or catalog entry named '" + name_or_path + "'");
}

bool looks_like_recipe(const std::string& text) {
  try {
    auto root = toml::parse(text);
    return root.contains("grid");
  } catch (const toml::parse_error&) {
    return false;
  }
}

// ---------------------------------------------------------------- geometry

std::size_t GridModel::stride(int axis) const {
  std::size_t s = 1;
  for (int a = 3; a > axis; --a) s *= static_cast<std::size_t>(N);
  return s;
}

std::array<int, 4> GridModel::coords(std::size_t point) const {
  std::array<int, 4> c{};
  for (int a = 3; a >= 0; --a) {
    c[a] = static_cast<int>(point % N);
    point /= N;
  }
  return c;
}

std::size_t GridModel::point_of(const std::array<int, 4>& c) const {
  std::size_t p = 0;
  for (int a = 0; a < 4; ++a) p = p * N + static_cast<std::size_t>(((c[a] % N) + N) % N);
  return p;
}

std::size_t GridModel::neighbor(std::size_t point, int axis, int step) const {
  const std::size_t s = stride(axis);
  const int c = static_cast<int>((point / s) % N);
  const int nc = ((c + step) % N + N) % N;
  return point + (static_cast<std::ptrdiff_t>(nc) - c) * static_cast<std::ptrdiff_t>(s);
}

std::size_t GridModel::field_index(std::size_t point) const {
  if (active_axes.empty()) return 0;
  std::size_t idx = 0;
  for (int a : active_axes) idx = idx * N + (point / stride(a)) % N;
  return idx;
}

namespace {

/// Real 2-form of the recipe at position x (coordinate matrix).
RMat recipe_omega(const GridRecipe& r, const std::array<double, 4>& x, double h) {
  RMat om = RMat::Zero(4, 4);
  om(0, 1) = 1;
  om(2, 3) = 1;
  if (r.omega && r.omega->amplitude != 0) {
    const double a = r.omega->amplitude, m = r.omega->mode;
    // d of theta_omega = a sin(2 pi m x1) dx^3 + a sin(2 pi m x2) dx^4, central differences
    auto diff = [&](double xc) { return a * (std::sin(kTwoPi * m * (xc + h)) - std::sin(kTwoPi * m * (xc - h))) / (2 * h); };
    om(0, 2) += diff(x[0]);
    om(1, 3) += diff(x[1]);
    if (r.omega->kind == "raw") om(2, 3) += a * std::sin(kTwoPi * m * x[0]);
  }
  return om - om.transpose().eval();
}

RMat recipe_j1(const GridRecipe& r, const std::array<double, 4>& x) {
  RMat J0 = reference_j();
  if (!r.j || r.j->amplitude == 0) return J0;
  const double angle = r.j->amplitude * std::sin(kTwoPi * r.j->mode * x[r.j->axis - 1]);
  RMat R = rotation(r.j->axis_pair[0] - 1, r.j->axis_pair[1] - 1, angle);
  return R * J0 * R.transpose();
}

}  // namespace

GridModel build_grid(const GridRecipe& recipe, int n_override) {
  GridModel gm;
  gm.recipe = recipe;
  gm.N = n_override > 0 ? n_override : recipe.N;
  if (gm.N < 4 || gm.N % 2) throw RecipeError("grid resolution must be even and at least 4");
  gm.h = 1.0 / gm.N;
  gm.points = static_cast<std::size_t>(gm.N) * gm.N * gm.N * gm.N;
  if (recipe.j && recipe.j->amplitude != 0) gm.active_axes.push_back(recipe.j->axis - 1);
  if (recipe.omega && recipe.omega->amplitude != 0) {
    gm.active_axes.push_back(0);
    gm.active_axes.push_back(1);
  }
  std::sort(gm.active_axes.begin(), gm.active_axes.end());
  gm.active_axes.erase(std::unique(gm.active_axes.begin(), gm.active_axes.end()), gm.active_axes.end());

  const int na = static_cast<int>(gm.active_axes.size());
  std::size_t nf = 1;
  for (int i = 0; i < na; ++i) nf *= gm.N;
  gm.fields.resize(nf);

  std::vector<int> pivots;
  lie::unitary_coframe(reference_j(), RMat::Identity(4, 4), &pivots);
  const auto& tb = tables();

  auto field_coords = [&](std::size_t fi) {
    std::array<int, 4> c{};
    for (int t = na - 1; t >= 0; --t) {
      c[gm.active_axes[t]] = static_cast<int>(fi % gm.N);
      fi /= gm.N;
    }
    return c;
  };

  struct Worst {
    double value = 0;
    std::size_t at = 0;
  };
  Worst taming{1e300, 0}, jsq, compat, omres, metric{1e300, 0};
  std::vector<RMat> omegas(nf);
  for (std::size_t fi = 0; fi < nf; ++fi) {
    auto c = field_coords(fi);
    std::array<double, 4> x{};
    for (int a = 0; a < 4; ++a) x[a] = c[a] * gm.h;
    const RMat Om = recipe_omega(recipe, x, gm.h);
    omegas[fi] = Om;
    const RMat J1 = recipe_j1(recipe, x);
    const RMat G1 = 0.5 * (Om * J1 + (Om * J1).transpose());
    Eigen::SelfAdjointEigenSolver<RMat> es(G1);
    const double tmin = es.eigenvalues().minCoeff();
    if (tmin < taming.value) taming = {tmin, fi};
    if (tmin <= 1e-8) continue;
    const RMat Gh = es.operatorSqrt(), Ghi = es.operatorInverseSqrt();
    const RMat S = -Ghi * Om * Ghi;
    Eigen::SelfAdjointEigenSolver<RMat> es2(S.transpose() * S);
    const RMat J = Ghi * (S * es2.operatorInverseSqrt()) * Gh;
    RMat g = Om * J;
    const double asym = (g - g.transpose()).cwiseAbs().maxCoeff();
    g = 0.5 * (g + g.transpose()).eval();

    FieldPoint& fp = gm.fields[fi];
    fp.J = J;
    fp.g = g;
    fp.omega = J.transpose() * g;
    const double r_j = (J * J + RMat::Identity(4, 4)).cwiseAbs().maxCoeff();
    const double r_c = std::max(asym, (J.transpose() * g * J - g).cwiseAbs().maxCoeff());
    const double r_o = (fp.omega - Om).cwiseAbs().maxCoeff();
    const double g_min = Eigen::SelfAdjointEigenSolver<RMat>(g).eigenvalues().minCoeff();
    if (r_j > jsq.value) jsq = {r_j, fi};
    if (r_c > compat.value) compat = {r_c, fi};
    if (r_o > omres.value) omres = {r_o, fi};
    if (g_min < metric.value) metric = {g_min, fi};

    fp.T = lie::unitary_coframe(J, g, nullptr, &pivots);
    fp.Tinv = fp.T.inverse();
    fp.vol = std::sqrt(g.determinant());
    const CMat full = ext::induced_map(fp.T);
    for (int k = 0; k <= 4; ++k) {
      const int nk = comps(k);
      CMat ph(nk, nk);
      for (int i = 0; i < nk; ++i)
        for (int j = 0; j < nk; ++j) ph(i, j) = full(tb.real_masks[k][i], tb.big_masks[k][j]);
      fp.phi[k] = ph;
      fp.phi_inv[k] = ph.inverse();
      fp.phi_inv_h[k] = fp.vol * fp.phi_inv[k].adjoint();
      fp.phi_h_by_vol[k] = ph.adjoint() / fp.vol;
    }
  }
  auto where = [&](std::size_t fi) { return " at grid point " + point_label(field_coords(fi)); };
  if (taming.value <= 1e-8)
    throw ValidationError("metric", "omega does not tame the perturbed J (min eigenvalue " +
                                        std::to_string(taming.value) + ")" + where(taming.at));

  // closedness of the sampled omega under the discrete d
  double closed = 0;
  std::size_t closed_at = 0;
  for (std::size_t fi = 0; fi < nf; ++fi) {
    auto c = field_coords(fi);
    std::array<RMat, 4> dom;
    for (int a = 0; a < 4; ++a) {
      dom[a] = RMat::Zero(4, 4);
      auto it = std::find(gm.active_axes.begin(), gm.active_axes.end(), a);
      if (it == gm.active_axes.end()) continue;
      auto cp = c, cm = c;
      cp[a] = (c[a] + 1) % gm.N;
      cm[a] = (c[a] + gm.N - 1) % gm.N;
      auto idx = [&](const std::array<int, 4>& cc) {
        std::size_t i = 0;
        for (int t : gm.active_axes) i = i * gm.N + cc[t];
        return i;
      };
      dom[a] = (omegas[idx(cp)] - omegas[idx(cm)]) / (2 * gm.h);
    }
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b)
        for (int e = b + 1; e < 4; ++e) {
          double v = std::abs(dom[a](b, e) - dom[b](a, e) + dom[e](a, b));
          if (v > closed) {
            closed = v;
            closed_at = fi;
          }
        }
  }
  gm.j_square_residual = jsq.value;
  gm.compatibility_residual = compat.value;
  gm.omega_residual = omres.value;
  gm.closedness_residual = closed;
  gm.min_metric_eigenvalue = metric.value;
  if (closed > 1e-9)
    throw ValidationError("closedness", "d(omega) = " + std::to_string(closed) + where(closed_at));
  if (jsq.value > 1e-10) throw ValidationError("complex-structure", "J^2 + 1 = " + std::to_string(jsq.value) + where(jsq.at));
  if (metric.value <= 0) throw ValidationError("metric", "g is not positive definite" + where(metric.at));
  if (compat.value > 1e-10)
    throw ValidationError("compatibility", "g(J., J.) - g = " + std::to_string(compat.value) + where(compat.at));
  if (omres.value > 1e-10)
    throw ValidationError("compatibility", "omega - g(J., .) = " + std::to_string(omres.value) + where(omres.at));
  return gm;
}

// ---------------------------------------------------------------- forms

int comps(int k) {
  static const int c[5] = {1, 4, 6, 4, 1};
  return c[k];
}

Bidegree comp_bidegree(int k, int i) { return tables().big_bideg[k][i]; }

std::vector<cd>& GridForm::ensure(int k) {
  if (deg[k].empty()) deg[k].assign(points * comps(k), cd(0));
  return deg[k];
}

GridForm zero_form(const GridModel& gm) {
  GridForm f;
  f.N = gm.N;
  f.points = gm.points;
  return f;
}

void axpy(cd s, const GridForm& x, GridForm& y) {
  for (int k = 0; k <= 4; ++k) {
    if (!x.has(k)) continue;
    auto& out = y.ensure(k);
    const auto& in = x.deg[k];
    par::for_chunks(in.size(), [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) out[i] += s * in[i];
    });
  }
}

GridForm operator+(const GridForm& a, const GridForm& b) {
  GridForm out = a;
  axpy(1.0, b, out);
  return out;
}

GridForm operator-(const GridForm& a, const GridForm& b) {
  GridForm out = a;
  axpy(-1.0, b, out);
  return out;
}

GridForm operator*(cd s, const GridForm& a) {
  GridForm out = a;
  for (auto& v : out.deg)
    for (auto& x : v) x *= s;
  return out;
}

GridForm project(const GridForm& a, Bidegree b) {
  GridForm out;
  out.N = a.N;
  out.points = a.points;
  const int k = b.total();
  if (k < 0 || k > 4 || b.p < 0 || b.q < 0 || b.p > 2 || b.q > 2 || !a.has(k)) return out;
  const int nk = comps(k);
  std::vector<char> keep(nk);
  bool any = false;
  for (int i = 0; i < nk; ++i) any |= (keep[i] = comp_bidegree(k, i) == b);
  if (!any) return out;
  out.deg[k] = a.deg[k];
  auto& v = out.deg[k];
  par::for_chunks(a.points, [&](std::size_t s, std::size_t e) {
    for (std::size_t p = s; p < e; ++p)
      for (int i = 0; i < nk; ++i)
        if (!keep[i]) v[p * nk + i] = 0;
  });
  return out;
}

GridForm project_degree(const GridForm& a, int k) {
  GridForm out;
  out.N = a.N;
  out.points = a.points;
  out.deg[k] = a.deg[k];
  return out;
}

bool block_is_zero(const GridForm& a, Bidegree b) {
  const int k = b.total();
  if (k < 0 || k > 4 || !a.has(k)) return true;
  const int nk = comps(k);
  for (int i = 0; i < nk; ++i) {
    if (!(comp_bidegree(k, i) == b)) continue;
    for (std::size_t p = 0; p < a.points; ++p)
      if (a.deg[k][p * nk + i] != cd(0)) return false;
  }
  return true;
}

cd inner(const GridModel& gm, const GridForm& a, const GridForm& b) {
  auto term = [&](std::size_t p, bool imag) {
    cd s = 0;
    for (int k = 0; k <= 4; ++k) {
      if (!a.has(k) || !b.has(k)) continue;
      const cd* x = a.ptr(k, p);
      const cd* y = b.ptr(k, p);
      for (int i = 0; i < comps(k); ++i) s += x[i] * std::conj(y[i]);
    }
    s *= gm.at(p).vol;
    return imag ? s.imag() : s.real();
  };
  const double w = std::pow(gm.h, 4);
  double re = par::deterministic_sum(gm.points, [&](std::size_t p) { return term(p, false); });
  double im = par::deterministic_sum(gm.points, [&](std::size_t p) { return term(p, true); });
  return w * cd(re, im);
}

double norm(const GridModel& gm, const GridForm& a) { return std::sqrt(std::max(0.0, inner(gm, a, a).real())); }

std::vector<double> pointwise_norm_sq(const GridModel& gm, const GridForm& a) {
  std::vector<double> out(gm.points, 0.0);
  par::for_chunks(gm.points, [&](std::size_t s, std::size_t e) {
    for (std::size_t p = s; p < e; ++p)
      for (int k = 0; k <= 4; ++k) {
        if (!a.has(k)) continue;
        const cd* x = a.ptr(k, p);
        for (int i = 0; i < comps(k); ++i) out[p] += std::norm(x[i]);
      }
  });
  return out;
}

double sup_norm(const GridModel& gm, const GridForm& a) {
  auto v = pointwise_norm_sq(gm, a);
  double m = 0;
  for (double x : v) m = std::max(m, x);
  return std::sqrt(m);
}

// ------------------------------------------------------------ derivatives

namespace {

/// Real coefficients r(p) = phi_k(p) c(p) of the degree-k part.
std::vector<cd> real_of(const GridModel& gm, const GridForm& a, int k) {
  const int nk = comps(k);
  std::vector<cd> r(gm.points * nk);
  par::for_chunks(gm.points, [&](std::size_t s, std::size_t e) {
    for (std::size_t p = s; p < e; ++p) {
      Eigen::Map<const CVec> c(a.ptr(k, p), nk);
      Eigen::Map<CVec>(r.data() + p * nk, nk) = gm.at(p).phi[k] * c;
    }
  });
  return r;
}

}  // namespace

std::vector<cd> to_real_coefficients(const GridModel& gm, const GridForm& a, int k) {
  if (!a.has(k)) return std::vector<cd>(gm.points * comps(k), cd(0));
  return real_of(gm, a, k);
}

GridForm d(const GridModel& gm, const GridForm& a) {
  GridForm out = zero_form(gm);
  const auto& tb = tables();
  const double inv2h = 0.5 / gm.h;
  for (int k = 0; k < 4; ++k) {
    if (!a.has(k)) continue;
    const int nk = comps(k), nk1 = comps(k + 1);
    const std::vector<cd> r = real_of(gm, a, k);
    auto& o = out.ensure(k + 1);
    const auto& st = tb.stencil[k];
    par::for_chunks(gm.points, [&](std::size_t s, std::size_t e) {
      SmallVec buf(nk1);
      for (std::size_t p = s; p < e; ++p) {
        buf.setZero();
        std::size_t nb[4][2];
        for (int ax = 0; ax < 4; ++ax) {
          nb[ax][0] = gm.neighbor(p, ax, 1);
          nb[ax][1] = gm.neighbor(p, ax, -1);
        }
        for (const auto& en : st)
          buf(en.out) += double(en.sign) * (r[nb[en.axis][0] * nk + en.in] - r[nb[en.axis][1] * nk + en.in]) * inv2h;
        Eigen::Map<CVec>(o.data() + p * nk1, nk1) += gm.at(p).phi_inv[k + 1] * buf;
      }
    });
  }
  return out;
}

GridForm d_star(const GridModel& gm, const GridForm& a) {
  GridForm out = zero_form(gm);
  const auto& tb = tables();
  const double inv2h = 0.5 / gm.h;
  for (int k1 = 1; k1 <= 4; ++k1) {
    if (!a.has(k1)) continue;
    const int k = k1 - 1, nk = comps(k), nk1 = comps(k1);
    std::vector<cd> y(gm.points * nk1);
    par::for_chunks(gm.points, [&](std::size_t s, std::size_t e) {
      for (std::size_t p = s; p < e; ++p)
        Eigen::Map<CVec>(y.data() + p * nk1, nk1) = gm.at(p).phi_inv_h[k1] * Eigen::Map<const CVec>(a.ptr(k1, p), nk1);
    });
    auto& o = out.ensure(k);
    const auto& st = tb.stencil[k];
    par::for_chunks(gm.points, [&](std::size_t s, std::size_t e) {
      SmallVec buf(nk);
      for (std::size_t p = s; p < e; ++p) {
        buf.setZero();
        std::size_t nb[4][2];
        for (int ax = 0; ax < 4; ++ax) {
          nb[ax][0] = gm.neighbor(p, ax, 1);
          nb[ax][1] = gm.neighbor(p, ax, -1);
        }
        for (const auto& en : st)
          buf(en.in) -= double(en.sign) * (y[nb[en.axis][0] * nk1 + en.out] - y[nb[en.axis][1] * nk1 + en.out]) * inv2h;
        Eigen::Map<CVec>(o.data() + p * nk, nk) += gm.at(p).phi_h_by_vol[k] * buf;
      }
    });
  }
  return out;
}

GridForm piece(const GridModel& gm, Bidegree shift, const GridForm& a) {
  GridForm out = zero_form(gm);
  for (int p = 0; p <= 2; ++p)
    for (int q = 0; q <= 2; ++q) {
      Bidegree src{p, q}, tgt{p + shift.p, q + shift.q};
      if (tgt.p < 0 || tgt.q < 0 || tgt.p > 2 || tgt.q > 2) continue;
      if (block_is_zero(a, src)) continue;
      axpy(1.0, project(d(gm, project(a, src)), tgt), out);
    }
  return out;
}

GridForm piece_adjoint(const GridModel& gm, Bidegree shift, const GridForm& a) {
  GridForm out = zero_form(gm);
  for (int p = 0; p <= 2; ++p)
    for (int q = 0; q <= 2; ++q) {
      Bidegree tgt{p, q}, src{p - shift.p, q - shift.q};
      if (src.p < 0 || src.q < 0 || src.p > 2 || src.q > 2) continue;
      if (block_is_zero(a, tgt)) continue;
      axpy(1.0, project(d_star(gm, project(a, tgt)), src), out);
    }
  return out;
}

// ------------------------------------------------------------- pointwise

GridForm apply_pointwise(const GridModel& gm, const CMat& m, const GridForm& a) {
  const auto& tb = tables();
  GridForm out = zero_form(gm);
  for (int kin = 0; kin <= 4; ++kin) {
    if (!a.has(kin)) continue;
    for (int kout = 0; kout <= 4; ++kout) {
      const int ni = comps(kin), no = comps(kout);
      CMat blk(no, ni);
      for (int i = 0; i < no; ++i)
        for (int j = 0; j < ni; ++j) blk(i, j) = m(tb.big_index[kout][i], tb.big_index[kin][j]);
      if (blk.cwiseAbs().maxCoeff() == 0) continue;
      auto& o = out.ensure(kout);
      par::for_chunks(gm.points, [&](std::size_t s, std::size_t e) {
        for (std::size_t p = s; p < e; ++p)
          Eigen::Map<CVec>(o.data() + p * no, no) += blk * Eigen::Map<const CVec>(a.ptr(kin, p), ni);
      });
    }
  }
  return out;
}

GridForm wedge(const GridModel& gm, const GridForm& a, const GridForm& b) {
  const auto& tb = tables();
  GridForm out = zero_form(gm);
  for (int ka = 0; ka <= 4; ++ka)
    for (int kb = 0; ka + kb <= 4; ++kb) {
      if (!a.has(ka) || !b.has(kb)) continue;
      const int na = comps(ka), nb = comps(kb), no = comps(ka + kb);
      auto& o = out.ensure(ka + kb);
      const auto& entries = tb.wedge[ka][kb];
      par::for_chunks(gm.points, [&](std::size_t s, std::size_t e) {
        for (std::size_t p = s; p < e; ++p) {
          const cd* x = a.ptr(ka, p);
          const cd* y = b.ptr(kb, p);
          cd* z = o.data() + p * no;
          for (const auto& en : entries) z[en.o] += double(en.sign) * x[en.i] * y[en.j];
        }
        (void)na;
        (void)nb;
      });
    }
  return out;
}

// ----------------------------------------------------------------- fields

GridForm from_real_coefficients(const GridModel& gm, int k,
                                const std::function<cd(int, const std::array<double, 4>&)>& value) {
  GridForm out = zero_form(gm);
  const int nk = comps(k);
  auto& o = out.ensure(k);
  par::for_chunks(gm.points, [&](std::size_t s, std::size_t e) {
    SmallVec r(nk);
    for (std::size_t p = s; p < e; ++p) {
      auto c = gm.coords(p);
      std::array<double, 4> x{c[0] * gm.h, c[1] * gm.h, c[2] * gm.h, c[3] * gm.h};
      for (int i = 0; i < nk; ++i) r(i) = value(i, x);
      Eigen::Map<CVec>(o.data() + p * nk, nk) = gm.at(p).phi_inv[k] * r;
    }
  });
  return out;
}

namespace {

/// Uniform double in [0, 1) from raw engine output (portable across libraries).
double unit(std::mt19937_64& eng) { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }

struct TrigTerm {
  std::array<int, 4> k;
  cd amp;
  double phase;
};

}  // namespace

GridForm trig_form(const GridModel& gm, int k, std::uint64_t seed) {
  std::mt19937_64 eng(seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(k));
  const int nk = comps(k);
  std::vector<std::vector<TrigTerm>> terms(nk);
  for (int i = 0; i < nk; ++i)
    for (int t = 0; t < 3; ++t) {
      TrigTerm term{};
      int active = 0;
      do {
        active = 0;
        for (int a = 0; a < 4; ++a) {
          term.k[a] = static_cast<int>(unit(eng) * 3.0) - 1;
          active += term.k[a] != 0;
        }
      } while (active == 0 || active > 2);
      term.amp = cd(2 * unit(eng) - 1, 2 * unit(eng) - 1);
      term.phase = kTwoPi * unit(eng);
      terms[i].push_back(term);
    }
  return from_real_coefficients(gm, k, [&](int i, const std::array<double, 4>& x) {
    cd v = 0;
    for (const auto& t : terms[i])
      v += t.amp * std::sin(kTwoPi * (t.k[0] * x[0] + t.k[1] * x[1] + t.k[2] * x[2] + t.k[3] * x[3]) + t.phase);
    return v;
  });
}

GridForm function_field(const GridModel& gm) {
  if (!gm.recipe.f) throw RecipeError("recipe has no function f");
  const FunctionRecipe f = *gm.recipe.f;
  return from_real_coefficients(gm, 0, [&](int, const std::array<double, 4>& x) {
    return cd(f.offset + f.amplitude * std::sin(kTwoPi * f.mode * x[f.axis - 1]));
  });
}

GridForm theta_field(const GridModel& gm) {
  if (!gm.recipe.theta) return zero_form(gm);
  const ThetaRecipe th = *gm.recipe.theta;
  return from_real_coefficients(gm, 1, [&](int i, const std::array<double, 4>& x) {
    return cd(th.amplitudes[i] * std::sin(kTwoPi * th.mode * x[(i + 1) % 4]));
  });
}

// -------------------------------------------------------------- Nijenhuis

GridForm nijenhuis_dual(const GridModel& gm, const GridForm& a) {
  const auto& tb = tables();
  const auto& S = *algebra::FormSpace::get(2);
  const std::size_t nf = gm.fields.size();
  const int na = static_cast<int>(gm.active_axes.size());
  std::vector<CMat> dual(nf);
  for (std::size_t fi = 0; fi < nf; ++fi) {
    std::array<int, 4> c{};
    std::size_t rem = fi;
    for (int t = na - 1; t >= 0; --t) {
      c[gm.active_axes[t]] = static_cast<int>(rem % gm.N);
      rem /= gm.N;
    }
    auto index_of = [&](const std::array<int, 4>& cc) {
      std::size_t i = 0;
      for (int t : gm.active_axes) i = i * gm.N + ((cc[t] % gm.N) + gm.N) % gm.N;
      return i;
    };
    std::array<RMat, 4> dJ;
    for (int ax = 0; ax < 4; ++ax) {
      dJ[ax] = RMat::Zero(4, 4);
      if (std::find(gm.active_axes.begin(), gm.active_axes.end(), ax) == gm.active_axes.end()) continue;
      auto cp = c, cm = c;
      cp[ax] += 1;
      cm[ax] -= 1;
      dJ[ax] = (gm.fields[index_of(cp)].J - gm.fields[index_of(cm)].J) / (2 * gm.h);
    }
    const RMat& J = gm.fields[fi].J;
    std::vector<CVec> images(4, CVec::Zero(16));
    for (int x = 0; x < 4; ++x)
      for (int y = x + 1; y < 4; ++y) {
        // coordinate fields commute; brackets come from derivatives of J
        RVec n = J * dJ[x].col(y) - J * dJ[y].col(x);
        for (int e = 0; e < 4; ++e) n -= J(e, x) * dJ[e].col(y) - J(e, y) * dJ[e].col(x);
        for (int e = 0; e < 4; ++e) images[e]((Mask{1} << x) | (Mask{1} << y)) = n(e);
      }
    const CMat dr = ext::odd_derivation(images, 4);
    const CMat full = ext::induced_map(gm.fields[fi].T);
    CMat to_real(16, 16);
    for (int i = 0; i < 16; ++i) to_real.col(i) = full.col(S.mask(i));
    dual[fi] = to_real.inverse() * dr * to_real;
  }
  GridForm out = zero_form(gm);
  for (int k = 0; k < 4; ++k) {
    if (!a.has(k)) continue;
    const int ni = comps(k), no = comps(k + 1);
    auto& o = out.ensure(k + 1);
    std::vector<CMat> blocks(nf);
    for (std::size_t fi = 0; fi < nf; ++fi) {
      blocks[fi].resize(no, ni);
      for (int i = 0; i < no; ++i)
        for (int j = 0; j < ni; ++j) blocks[fi](i, j) = dual[fi](tb.big_index[k + 1][i], tb.big_index[k][j]);
    }
    par::for_chunks(gm.points, [&](std::size_t s, std::size_t e) {
      for (std::size_t p = s; p < e; ++p)
        Eigen::Map<CVec>(o.data() + p * no, no) += blocks[gm.field_index(p)] * Eigen::Map<const CVec>(a.ptr(k, p), ni);
    });
  }
  return out;
}

// ---------------------------------------------------------- Fourier symbols

FourierHarmonicDims fourier_harmonic_dims(const GridModel& gm, double tol) {
  if (!gm.constant_structure())
    throw PreconditionError("Fourier-symbol harmonic dimensions need a constant-structure grid");
  const auto& S = *algebra::FormSpace::get(2);
  const FieldPoint& fp = gm.fields[0];
  const CMat full = ext::induced_map(fp.T);
  CMat to_real(16, 16);
  for (int i = 0; i < 16; ++i) to_real.col(i) = full.col(S.mask(i));
  const CMat from_real = to_real.inverse();
  std::array<CMat, 4> wedge_e;
  for (int a = 0; a < 4; ++a) {
    CVec e = CVec::Zero(16);
    e(Mask{1} << a) = 1;
    wedge_e[a] = from_real * ext::wedge_matrix(e, 4) * to_real;
  }
  auto component = [&](const CMat& m, Bidegree s) {
    CMat out = CMat::Zero(16, 16);
    for (int i = 0; i < 16; ++i)
      for (int j = 0; j < 16; ++j) {
        Bidegree bi = S.bidegree(i), bj = S.bidegree(j);
        if (bi.p == bj.p + s.p && bi.q == bj.q + s.q) out(i, j) = m(i, j);
      }
    return out;
  };
  auto lap = [](const CMat& t) -> CMat { return t * t.adjoint() + t.adjoint() * t; };

  FourierHarmonicDims out;
  double min_nonzero = 1e300;
  auto count = [&](const CMat& m, const std::vector<int>& idx, double& min_nz) {
    const int k = static_cast<int>(idx.size());
    CMat sub(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) sub(i, j) = m(idx[i], idx[j]);
    Eigen::SelfAdjointEigenSolver<CMat> es(sub, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    const double thr = tol * std::max(1.0, ev.cwiseAbs().maxCoeff());
    int c = 0;
    for (int i = 0; i < k; ++i) {
      if (ev(i) < thr)
        ++c;
      else
        min_nz = std::min(min_nz, ev(i));
    }
    return c;
  };
  std::array<std::vector<int>, 9> block_idx;
  for (int p = 0; p <= 2; ++p)
    for (int q = 0; q <= 2; ++q) {
      const int off = S.block_offset(p, q);
      for (int i = 0; i < S.block_dim(p, q); ++i) block_idx[p * 3 + q].push_back(off + i);
    }
  const int N = gm.N;
  for (int x0 = 0; x0 < N; ++x0)
    for (int x1 = 0; x1 < N; ++x1)
      for (int x2 = 0; x2 < N; ++x2)
        for (int x3 = 0; x3 < N; ++x3) {
          const std::array<int, 4> xi{x0, x1, x2, x3};
          bool nyquist = false;
          CMat dsym = CMat::Zero(16, 16);
          for (int a = 0; a < 4; ++a) {
            nyquist |= xi[a] != 0 && 2 * xi[a] == N;
            dsym += cd(0, std::sin(kTwoPi * xi[a] / N) / gm.h) * wedge_e[a];
          }
          const bool resolved = !nyquist;
          double dummy = 1e300;
          double& mn = resolved ? min_nonzero : dummy;
          const CMat ld = lap(dsym);
          const CMat ldel = lap(component(dsym, {1, 0})), ldelbar = lap(component(dsym, {0, 1}));
          for (int k = 0; k <= 4; ++k) {
            int c = count(ld, S.degree_indices(k), mn);
            out.betti_raw[k] += c;
            if (resolved) out.betti_resolved[k] += c;
          }
          for (int b = 0; b < 9; ++b) {
            int c1 = count(ldel, block_idx[b], mn), c2 = count(ldelbar, block_idx[b], mn);
            int c3 = count(ldel + ldelbar, block_idx[b], mn);
            out.del_raw[b] += c1;
            out.delbar_raw[b] += c2;
            out.joint_raw[b] += c3;
            if (resolved) {
              out.del_resolved[b] += c1;
              out.delbar_resolved[b] += c2;
              out.joint_resolved[b] += c3;
            }
          }
        }
  out.min_nonzero_eigenvalue = min_nonzero;
  return out;
}

}  // namespace akh::grid
