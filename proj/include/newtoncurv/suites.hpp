#pragma once

// Verification suites: seeded random-stack property checks for the algebraic
// identities, the curvature-form cross-check, and the model-geometry battery
// (gates, divergence identity, totals against the closed form).  All suites
// are deterministic functions of their parameters; trials run in parallel
// with order-independent reductions.

#include <cstdint>
#include <vector>

#include "newtoncurv/geometry.hpp"
#include "newtoncurv/report.hpp"

namespace newtoncurv {

struct AlgebraSuiteParams {
  int n = 4;
  int l = 2;
  std::vector<int> r_set = {2};
  int trials = 100;
  std::uint64_t seed = 7;
  std::string mode = "float";  ///< "float" or "exact"
  double tol = 1e-10;          ///< float-mode threshold; exact mode wants 0
};

/// Trace/recursion/vector identities, the slot-tensor split, the l = 1
/// minor reduction, and frame invariances on seeded random stacks.
/// Caps: n <= 8 in float mode, n <= 4 in exact mode.
SuiteReport run_algebra_suite(const AlgebraSuiteParams& params);

struct Theorem1SuiteParams {
  int n = 3;
  int l = 2;
  std::vector<int> r_set = {2};
  int trials = 50;
  std::uint64_t seed = 11;
  double tol = 1e-10;
};

/// Curvature-form route against the direct contraction, plus independence
/// of the normal connection part.  Cap: n <= 7.
SuiteReport run_theorem1_suite(const Theorem1SuiteParams& params);

struct GeometrySuiteParams {
  std::string geometry = "hopf-s3";
  std::vector<int> r_set = {0};
  int resolution = 8;
  int samples = 100;
  std::uint64_t seed = 3;
  double tol_geometry = 1e-3;  ///< pointwise residuals
  double tol_integral = 0.01;  ///< relative integral residuals
  FdConfig fd = {};
};

SuiteReport run_geometry_suite(const GeometrySuiteParams& params);
SuiteReport run_geometry_suite(const ModelGeometry& geom,
                               const GeometrySuiteParams& params);

struct Theorem2Row {
  int n = 0, l = 0, s = 0;
  double c = 0.0;
  double vol = 0.0;
  double value = 0.0;
  std::string case_label;
};

std::vector<Theorem2Row> theorem2_table(const std::vector<int>& n_values,
                                        const std::vector<int>& l_values,
                                        const std::vector<int>& s_values,
                                        double c, double vol);

std::string theorem2_table_to_text(const std::vector<Theorem2Row>& rows);
std::string theorem2_table_to_csv(const std::vector<Theorem2Row>& rows);
nlohmann::json theorem2_table_to_json(const std::vector<Theorem2Row>& rows);

}  // namespace newtoncurv
