#pragma once

// JSON rendering of every result type. Rationals are always strings "a/b";
// object keys are emitted in sorted order, so output is byte-stable.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hippoc/convert.hpp"
#include "hippoc/extract.hpp"
#include "hippoc/randomness_tests.hpp"
#include "hippoc/verify.hpp"

namespace hippoc {

using json = nlohmann::json;

inline constexpr const char* kReportSchema = "hippoc.run-report/1";
inline constexpr const char* kVersion = "0.1.0";

json to_json(const Rational& x);
json to_json(const CheckpointSummary& summary);
json to_json(const TestVerdict& verdict);
json to_json(const BitCertificate& certificate);
json to_json(const ExtractionReport& report);
json to_json(const DiagonalVerdict& verdict);
json to_json(const MomentReport& report);
json to_json(const MeasureEstimate& estimate);

struct RunReport {
    std::string command;
    std::map<std::string, std::string> params;
    std::vector<std::uint64_t> seeds;
    json results = json::array();
    std::string version = kVersion;

    friend bool operator==(const RunReport&, const RunReport&) = default;
};

enum class ReportFormat { Json, Text };

json to_json(const RunReport& report);
RunReport run_report_from_json(const json& j);

/// Deterministic serialization; JSON ends with a newline.
std::string emit_report(const RunReport& report, ReportFormat format);

}  // namespace hippoc
