#include <fstream>
#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "akh/errors.hpp"
#include "akh/verification.hpp"

namespace py = pybind11;
namespace vf = akh::verify;

namespace {

bool is_grid(const std::string& name) {
  if (akh::grid::is_recipe_catalog_name(name)) return true;
  if (akh::lie::is_catalog_name(name)) return false;
  std::ifstream in(name);
  if (!in) throw akh::ArgumentError("model '" + name + "' is neither a catalog name nor a readable file");
  std::stringstream ss;
  ss << in.rdbuf();
  return akh::grid::looks_like_recipe(ss.str());
}

vf::Config make_config(std::uint64_t seed, std::optional<double> tol, const std::vector<int>& resolutions,
                       int samples) {
  vf::Config c;
  c.seed = seed;
  c.tolerance = tol;
  c.resolutions = resolutions;
  c.samples = samples;
  return c;
}

}  // namespace

PYBIND11_MODULE(_akh, m) {
  m.doc() = "almost Kahler harmonic-form verification";

  auto base = py::register_exception<akh::Error>(m, "AkhError", PyExc_ValueError);
  py::register_exception<akh::ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<akh::ArgumentError>(m, "ArgumentError", base.ptr());
  py::register_exception<akh::ParseError>(m, "ParseError", base.ptr());
  py::register_exception<akh::RecipeError>(m, "RecipeError", base.ptr());
  py::register_exception<akh::DomainError>(m, "DomainError", base.ptr());
  py::register_exception<akh::PreconditionError>(m, "PreconditionError", base.ptr());

  const vf::Config defaults;

  m.def("catalog", [] {
    auto names = akh::lie::catalog_names();
    for (const auto& r : akh::grid::recipe_catalog_names()) names.push_back(r);
    return names;
  }, "Built-in model and recipe names.");

  m.def("suites", [] { return vf::suite_names(); }, "Suite names in canonical order.");

  m.def(
      "_verify_json",
      [](const std::string& model, const std::string& suites, std::uint64_t seed, std::optional<double> tol,
         const std::vector<int>& resolutions, int samples) {
        auto picked = vf::parse_suites(suites);
        auto cfg = make_config(seed, tol, resolutions, samples);
        vf::Report rep;
        {
          py::gil_scoped_release release;
          rep = is_grid(model) ? vf::run_grid(akh::grid::load_recipe(model), picked, cfg)
                               : vf::run_lie(akh::lie::load_model(model), picked, cfg);
        }
        return py::make_tuple(vf::dump(vf::report_json(rep)), vf::dump(rep.meta));
      },
      py::arg("model"), py::arg("suites") = "all", py::arg("seed") = defaults.seed, py::arg("tol") = py::none(),
      py::arg("resolutions") = defaults.resolutions, py::arg("samples") = defaults.samples);

  m.def(
      "_harmonic_json",
      [](const std::string& model) {
        auto t = is_grid(model) ? vf::harmonic_table(akh::grid::load_recipe(model))
                                : vf::harmonic_table(akh::lie::load_model(model));
        return vf::dump(vf::table_json(t));
      },
      py::arg("model"));

  m.def(
      "_convergence_json",
      [](const std::string& recipe, const std::vector<int>& resolutions, const std::vector<std::string>& suites,
         std::uint64_t seed) {
        auto cfg = make_config(seed, std::nullopt, resolutions, vf::Config{}.samples);
        std::vector<vf::ConvergenceRow> rows;
        {
          py::gil_scoped_release release;
          rows = vf::grid_convergence(akh::grid::load_recipe(recipe), resolutions, cfg, suites);
        }
        return vf::dump(vf::convergence_json(rows));
      },
      py::arg("recipe"), py::arg("resolutions") = defaults.resolutions,
      py::arg("suites") = std::vector<std::string>{}, py::arg("seed") = defaults.seed);

  m.def(
      "croke_constants",
      [](int n) {
        auto c = vf::croke_constants(n);
        py::dict d;
        d["n"] = c.n;
        d["C_tilde"] = c.c_tilde;
        d["C"] = c.c;
        d["integral_quadrature"] = c.integral;
        d["integral_beta"] = c.integral_beta;
        return d;
      },
      py::arg("n"));

  m.def("sphere_volume", &vf::sphere_volume, py::arg("m"));
}
