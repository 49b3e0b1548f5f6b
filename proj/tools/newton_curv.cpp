// Verification driver: runs one suite with the given parameters and emits
// its report as json, csv, or a text table.  Exit code 0 means every case
// passed, 1 means at least one failed, 2 means the run itself errored.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "newtoncurv/suites.hpp"

namespace {

newtoncurv::ModelGeometry resolve_geometry(const std::string& name) {
  if (name.find('/') != std::string::npos ||
      (name.size() > 5 && name.compare(name.size() - 5, 5, ".json") == 0)) {
    std::ifstream in(name);
    if (!in)
      throw newtoncurv::ValidationError("cannot open geometry file " + name);
    nlohmann::json doc;
    in >> doc;
    return newtoncurv::load_geometry_json(doc);
  }
  return newtoncurv::make_builtin_geometry(name);
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out)
    throw newtoncurv::ValidationError("cannot open output file " + out_path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized Newton transformation verification suites"};

  std::string suite;
  app.add_option("--suite", suite,
                 "algebra | theorem1 | geometry | theorem2-table")
      ->required();

  std::vector<int> n_values;
  std::vector<int> l_values;
  std::vector<int> r_set;
  std::vector<int> s_values;
  int trials = -1;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int resolution = 8;
  int samples = 100;
  double tol_algebra = 1e-10;
  double tol_geometry = 1e-3;
  double tol_integral = 0.01;
  std::string mode = "float";
  std::string format = "text";
  std::string out_path;
  std::string geometry = "hopf-s3";
  bool richardson = false;
  double c_value = 1.0;
  double vol_value = 1.0;

  app.add_option("--n", n_values, "distribution rank(s)");
  app.add_option("--l", l_values, "codimension(s)");
  app.add_option("--r", r_set, "even curvature orders (repeatable)");
  app.add_option("--s", s_values, "closed-form orders for the table");
  app.add_option("--trials", trials, "random trials per case");
  app.add_option("--seed", seed, "base RNG seed")
      ->each([&](const std::string&) { seed_given = true; });
  app.add_option("--resolution", resolution, "quadrature resolution per axis");
  app.add_option("--samples", samples, "pointwise sample count");
  app.add_option("--tol-algebra", tol_algebra, "float-mode algebra threshold");
  app.add_option("--tol-geometry", tol_geometry, "pointwise geometry threshold");
  app.add_option("--tol-integral", tol_integral, "relative integral threshold");
  app.add_option("--mode", mode, "float | exact")
      ->check(CLI::IsMember({"float", "exact"}));
  app.add_option("--format", format, "json | csv | text")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--out", out_path, "write the report here instead of stdout");
  app.add_option("--geometry", geometry,
                 "builtin geometry name or a geometry .json file");
  app.add_flag("--richardson", richardson,
               "Richardson-extrapolate the divergence stencil");
  app.add_option("--c", c_value, "sectional curvature for the table");
  app.add_option("--vol", vol_value, "volume factor for the table");

  CLI11_PARSE(app, argc, argv);

  try {
    using namespace newtoncurv;
    const auto t0 = std::chrono::steady_clock::now();

    if (suite == "theorem2-table") {
      if (n_values.empty()) n_values = {2, 3, 4};
      if (l_values.empty()) l_values = {1, 2};
      if (s_values.empty()) s_values = {1, 2};
      const auto rows =
          theorem2_table(n_values, l_values, s_values, c_value, vol_value);
      std::string text;
      if (format == "json")
        text = theorem2_table_to_json(rows).dump(2) + "\n";
      else if (format == "csv")
        text = theorem2_table_to_csv(rows);
      else
        text = theorem2_table_to_text(rows);
      emit(text, out_path);
      return 0;
    }

    SuiteReport report;
    if (suite == "algebra") {
      AlgebraSuiteParams p;
      if (!n_values.empty()) p.n = n_values.front();
      if (!l_values.empty()) p.l = l_values.front();
      if (!r_set.empty()) p.r_set = r_set;
      if (trials > 0) p.trials = trials;
      if (seed_given) p.seed = seed;
      p.mode = mode;
      p.tol = tol_algebra;
      report = run_algebra_suite(p);
    } else if (suite == "theorem1") {
      Theorem1SuiteParams p;
      if (!n_values.empty()) p.n = n_values.front();
      if (!l_values.empty()) p.l = l_values.front();
      if (!r_set.empty()) p.r_set = r_set;
      if (trials > 0) p.trials = trials;
      if (seed_given) p.seed = seed;
      p.tol = tol_algebra;
      report = run_theorem1_suite(p);
    } else if (suite == "geometry") {
      GeometrySuiteParams p;
      p.geometry = geometry;
      if (!r_set.empty()) p.r_set = r_set;
      p.resolution = resolution;
      p.samples = samples;
      if (seed_given) p.seed = seed;
      p.tol_geometry = tol_geometry;
      p.tol_integral = tol_integral;
      p.fd.richardson = richardson;
      report = run_geometry_suite(resolve_geometry(geometry), p);
    } else {
      std::cerr << "error: unknown suite '" << suite << "'\n";
      return 2;
    }

    report.wall_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
    std::string text;
    if (format == "json")
      text = report_to_canonical_json(report);
    else if (format == "csv")
      text = report_to_csv(report);
    else
      text = report_to_text(report);
    emit(text, out_path);
    return report.aggregate_pass() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
