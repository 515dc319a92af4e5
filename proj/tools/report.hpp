#ifndef WICKSELL_TOOLS_REPORT_HPP_
#define WICKSELL_TOOLS_REPORT_HPP_

#include <string>

#include "json.hpp"
#include "wicksell/estimators.hpp"
#include "wicksell/verify.hpp"

namespace wicksell::cli {

inline constexpr const char* kToolName = "wicksell";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kReportSchema = "report_v1";

using nlohmann::json;

json settings_to_json(const ExperimentSettings& settings);

// report_v1 documents. Every document carries:
//   schema   "report_v1"
//   tool     {name, version}
//   kind     "coverage" | "variance" | "verify"
//   config   resolved settings
//   seed     integer
//   results  kind-specific numbers
//   timing   {wall_time_seconds}; the only part that varies between
//            identical invocations
json coverage_to_json(const CoverageReport& report);
json variance_to_json(const VarianceReport& report);
json verify_to_json(const VerifyReport& report, const VerifyOptions& options);

// Throws FormatError naming the first missing or mistyped field.
void validate_report(const json& document);

// The document without its timing block.
json without_timing(const json& document);

}  // namespace wicksell::cli

#endif  // WICKSELL_TOOLS_REPORT_HPP_
