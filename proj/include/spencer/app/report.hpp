#pragma once

// JSON serialization of verification results and the report envelope.

#include <chrono>
#include <ctime>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>

#include <json.hpp>

#include "spencer/char_class.hpp"
#include "spencer/spectral.hpp"

namespace spencer::app {

using Json = nlohmann::json;

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kReportSchema = "spencer-mirror/report.v1";

[[nodiscard]] inline std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

[[nodiscard]] inline Json to_json(const MirrorReport& r) {
    Json degrees = Json::array();
    for (const auto& d : r.degrees) {
        degrees.push_back({{"degree", d.degree},
                           {"dim_plus", d.dim_plus},
                           {"dim_minus", d.dim_minus},
                           {"eig_min_plus", d.eig_min_plus},
                           {"eig_min_minus", d.eig_min_minus},
                           {"residual_max", d.residual_max}});
    }
    return {{"config_id", r.config_id},
            {"mode", to_string(r.mode)},
            {"metric", to_string(r.metric)},
            {"lambda", std::vector<double>(r.lambda.data(), r.lambda.data() + r.lambda.size())},
            {"lambda_norm", r.lambda_norm},
            {"degrees", degrees},
            {"eig_min", r.eig_min()},
            {"cochain_defect", r.cochain_defect},
            {"bracket_pairing", r.bracket_pairing},
            {"passed", r.passed}};
}

[[nodiscard]] inline Json to_json(const ModeSummary& s) {
    Json j{{"mode", to_string(s.mode)},
           {"configs", s.configs},
           {"comparisons", s.comparisons},
           {"matches", s.matches},
           {"monotone", s.monotone}};
    j["min_eig_delta"] = s.min_eig_delta ? Json(*s.min_eig_delta) : Json(nullptr);
    return j;
}

[[nodiscard]] inline Json to_json(const SweepResult& result) {
    Json rows = Json::array();
    int comparisons = 0;
    int matches = 0;
    for (const auto& row : result.rows) {
        Json r{{"config_id", row.config.id}, {"passed", row.passed()}};
        if (row.report) {
            r["report"] = to_json(*row.report);
        } else {
            r["error"] = row.error;
            r["error_kind"] = row.error_kind ? to_string(*row.error_kind) : "unknown";
        }
        rows.push_back(r);
    }
    Json summaries = Json::array();
    for (const auto& s : result.summaries) {
        summaries.push_back(to_json(s));
        comparisons += s.comparisons;
        matches += s.matches;
    }
    return {{"rows", rows},
            {"summary", summaries},
            {"comparisons", comparisons},
            {"matches", matches},
            {"passed", result.passed()}};
}

/// Values of an SRR report. The λ tag is deliberately not part of this object.
[[nodiscard]] inline Json srr_values_json(const SRRReport& r) {
    return {{"A0", to_string(r.A0)}, {"A2", to_string(r.A2)}, {"A3", to_string(r.A3)},
            {"A4", to_string(r.A4)}, {"chi", to_string(r.chi)}};
}

[[nodiscard]] inline Json make_envelope(const std::string& command, Json config_echo, Json results, bool passed,
                                        const std::map<std::string, double>& timings_ms) {
    Json timings = Json::object();
    for (const auto& [k, v] : timings_ms) timings[k] = v;
    return {{"schema", kReportSchema},
            {"tool_version", kToolVersion},
            {"command", command},
            {"timestamp", utc_timestamp()},
            {"config", std::move(config_echo)},
            {"results", std::move(results)},
            {"passed", passed},
            {"timings_ms", timings}};
}

/// Copy of a report without timestamp and timing fields.
[[nodiscard]] inline Json strip_volatile(Json report) {
    report.erase("timestamp");
    report.erase("timings_ms");
    return report;
}

}  // namespace spencer::app
