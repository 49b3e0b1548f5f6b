#pragma once

// Suite reports: a flat list of named residual checks with one aggregate
// verdict, serializable as canonical JSON (sorted keys, wall time excluded
// so identical runs are byte-identical), CSV, or a human table.

#include <string>
#include <vector>

#include "json.hpp"
#include "newtoncurv/errors.hpp"

namespace newtoncurv {

struct CaseResult {
  std::string id;
  std::string inputs;      ///< short summary of what was sampled
  double residual = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct SuiteReport {
  std::string suite;
  nlohmann::json parameters = nlohmann::json::object();
  std::vector<CaseResult> cases;
  double wall_ms = 0.0;  ///< informational only, not serialized to JSON/CSV

  bool aggregate_pass() const;
};

nlohmann::json report_to_json(const SuiteReport& report);
SuiteReport report_from_json(const nlohmann::json& doc);

/// Sorted-key JSON text with a trailing newline.
std::string report_to_canonical_json(const SuiteReport& report);

/// Columns: suite,case_id,residual,threshold,pass.
std::string report_to_csv(const SuiteReport& report);

std::string report_to_text(const SuiteReport& report);

}  // namespace newtoncurv
