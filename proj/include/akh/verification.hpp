#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "akh/grid_model.hpp"
#include "akh/lie_model.hpp"

namespace akh::verify {

enum class Verdict { Pass, Fail, Vacuous, Exact };
std::string to_string(Verdict v);

struct Entry {
  std::string suite;
  std::string identity;
  std::string anchor;
  std::string block;
  double residual = 0;
  double tolerance = 0;
  Verdict verdict = Verdict::Pass;
};

/// Entries go to the main report; `meta` holds the side-channel data
/// (constants, raw convergence data, notes, timings).
struct Report {
  std::string model;
  std::vector<Entry> entries;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();

  /// pass/fail/exact by residual; exact needs residual == 0.
  Entry& check(const std::string& suite, const std::string& identity, const std::string& anchor,
               const std::string& block, double residual, double tolerance);
  /// One-sided bound or rate: pass/fail only, never exact.
  Entry& bound(const std::string& suite, const std::string& identity, const std::string& anchor,
               const std::string& block, double residual, double tolerance);
  Entry& vacuous(const std::string& suite, const std::string& identity, const std::string& anchor,
                 const std::string& block, double residual, double tolerance);
  void note(const std::string& text);
  bool failed() const;
  std::size_t count(Verdict v) const;
};

struct Config {
  std::uint64_t seed = 20240917;
  std::vector<int> resolutions{8, 16, 32};
  /// Replaces every entry tolerance when set.
  std::optional<double> tolerance;
  /// Index (0-based) of the invariant coframe element used as theta on Lie models; default: last.
  std::optional<int> theta_index;
  int samples = 100;
};

/// Suite names in canonical order ("all" expands to the applicable ones).
const std::vector<std::string>& suite_names();
bool suite_applies_to_lie(const std::string& suite);
bool suite_applies_to_grid(const std::string& suite);
/// Expand and validate a comma-separated selector; throws ArgumentError.
std::vector<std::string> parse_suites(const std::string& selector);

Report run_lie(const lie::LieModel& model, const std::vector<std::string>& suites, const Config& cfg);
Report run_grid(const grid::GridRecipe& recipe, const std::vector<std::string>& suites, const Config& cfg);

// ---------------------------------------------------------------- constants

struct CrokeConstants {
  int n = 0;
  double integral = 0;       // int_0^{pi/2} cos^{n/(n-1)} t sin^{2n-2} t dt, adaptive quadrature
  double integral_beta = 0;  // same from the Beta function
  double sphere_2n_2 = 0, sphere_2n_1 = 0;
  double c_tilde = 0, c = 0;
};
/// Throws DomainError for n < 2.
CrokeConstants croke_constants(int n);
/// Volume of the unit sphere S^m.
double sphere_volume(int m);

// ------------------------------------------------------------- convergence

struct ConvergenceRow {
  std::string suite, identity, anchor;
  std::vector<int> N;
  std::vector<double> residuals;
  std::vector<double> orders;  // between consecutive resolutions
  double order = 0;            // finest pair
  bool exact = false;          // every residual <= 1e-12
  bool monotone = true;
  bool required = true;        // counted by grid-converge
};

/// Grid identities of the selected suites (empty: every grid suite) over the
/// given resolutions.
std::vector<ConvergenceRow> grid_convergence(const grid::GridRecipe& recipe, const std::vector<int>& resolutions,
                                             const Config& cfg, const std::vector<std::string>& suites = {});
/// Order between (N1, r1) and (N2, r2).
double observed_order(int n1, double r1, int n2, double r2);

// ----------------------------------------------------------------- tables

struct HarmonicTable {
  std::string model;
  int n = 0;
  bool fourier = false;                 // grid model: Fourier-symbol counts
  std::vector<int> de_rham;             // per degree
  std::vector<std::vector<int>> del, delbar, joint, d_bideg;  // [p][q]
  bool conjugation_symmetric = true, hodge_symmetric = true, serre_symmetric = true;
};
HarmonicTable harmonic_table(const lie::LieModel& model, double tol = 1e-9);
HarmonicTable harmonic_table(const grid::GridRecipe& recipe);

// ----------------------------------------------------------------- output

nlohmann::ordered_json report_json(const Report& r);
nlohmann::ordered_json table_json(const HarmonicTable& t);
std::string report_markdown(const Report& r);
std::string table_markdown(const HarmonicTable& t);
std::string convergence_markdown(const std::vector<ConvergenceRow>& rows);
nlohmann::ordered_json convergence_json(const std::vector<ConvergenceRow>& rows);
/// Serialize JSON with a trailing newline, deterministic formatting.
std::string dump(const nlohmann::ordered_json& j);
/// Write via a temporary file and rename.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace akh::verify
