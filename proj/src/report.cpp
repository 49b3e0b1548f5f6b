#include <cstdio>
#include <iomanip>
#include <sstream>

#include "newtoncurv/report.hpp"

namespace newtoncurv {

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

bool SuiteReport::aggregate_pass() const {
  for (const auto& c : cases)
    if (!c.pass) return false;
  return true;
}

nlohmann::json report_to_json(const SuiteReport& report) {
  nlohmann::json cases = nlohmann::json::array();
  for (const auto& c : report.cases)
    cases.push_back({{"id", c.id},
                     {"inputs", c.inputs},
                     {"residual", c.residual},
                     {"threshold", c.threshold},
                     {"pass", c.pass}});
  return nlohmann::json{{"suite", report.suite},
                        {"parameters", report.parameters},
                        {"cases", cases},
                        {"aggregate_pass", report.aggregate_pass()}};
}

SuiteReport report_from_json(const nlohmann::json& doc) {
  if (!doc.is_object())
    throw ValidationError("report: expected a JSON object");
  SuiteReport report;
  report.suite = doc.at("suite").get<std::string>();
  report.parameters = doc.at("parameters");
  for (const auto& c : doc.at("cases")) {
    CaseResult cr;
    cr.id = c.at("id").get<std::string>();
    cr.inputs = c.at("inputs").get<std::string>();
    cr.residual = c.at("residual").get<double>();
    cr.threshold = c.at("threshold").get<double>();
    cr.pass = c.at("pass").get<bool>();
    report.cases.push_back(std::move(cr));
  }
  if (doc.contains("aggregate_pass") &&
      doc.at("aggregate_pass").get<bool>() != report.aggregate_pass())
    throw ValidationError("report: aggregate flag inconsistent with cases");
  return report;
}

std::string report_to_canonical_json(const SuiteReport& report) {
  return report_to_json(report).dump(2) + "\n";
}

std::string report_to_csv(const SuiteReport& report) {
  std::string out = "suite,case_id,residual,threshold,pass\n";
  for (const auto& c : report.cases)
    out += report.suite + "," + c.id + "," + num(c.residual) + "," +
           num(c.threshold) + "," + (c.pass ? "true" : "false") + "\n";
  return out;
}

std::string report_to_text(const SuiteReport& report) {
  std::size_t id_width = 4;
  std::size_t in_width = 6;
  for (const auto& c : report.cases) {
    id_width = std::max(id_width, c.id.size());
    in_width = std::max(in_width, c.inputs.size());
  }
  std::ostringstream os;
  os << "suite: " << report.suite << "\n";
  os << "parameters: " << report.parameters.dump() << "\n";
  os << std::left << std::setw(static_cast<int>(id_width) + 2) << "case"
     << std::setw(static_cast<int>(in_width) + 2) << "inputs"
     << std::right << std::setw(13) << "residual" << std::setw(13)
     << "threshold"
     << "  verdict\n";
  for (const auto& c : report.cases) {
    char res[32], thr[32];
    std::snprintf(res, sizeof(res), "%.4e", c.residual);
    std::snprintf(thr, sizeof(thr), "%.4e", c.threshold);
    os << std::left << std::setw(static_cast<int>(id_width) + 2) << c.id
       << std::setw(static_cast<int>(in_width) + 2) << c.inputs << std::right
       << std::setw(13) << res << std::setw(13) << thr << "  "
       << (c.pass ? "pass" : "FAIL") << "\n";
  }
  char wall[32];
  std::snprintf(wall, sizeof(wall), "%.1f", report.wall_ms);
  os << "aggregate: " << (report.aggregate_pass() ? "PASS" : "FAIL") << " ("
     << report.cases.size() << " cases, " << wall << " ms)\n";
  return os.str();
}

}  // namespace newtoncurv
