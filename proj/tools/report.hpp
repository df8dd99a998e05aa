#pragma once

#include <string>
#include <string_view>

#include "json.hpp"

#include "bowtie/capacity.hpp"
#include "bowtie/decider.hpp"
#include "bowtie/measure.hpp"
#include "bowtie/muckenhoupt.hpp"

namespace bowtie::cli {

inline constexpr int kSchemaVersion = 1;

enum class Format { Json, Csv, Text };
Format format_from_string(std::string_view s);

/// "0", "inf", "0.25", "2^-256", "e^-31".
Radius parse_radius(std::string_view text);

/// Non-finite numbers become the strings "inf", "-inf", "nan" so that JSON
/// stays valid and CSV shows the same token.
nlohmann::json num(double x);
/// {"value": r, "log2": log2 r}; radii like 2^-2^600 have value 0.
nlohmann::json radius(Radius r);
nlohmann::json window(const Window& w);

nlohmann::json to_json(const CapacityResult& r);
nlohmann::json to_json(const OracleResult& r);
nlohmann::json to_json(const PointCapacityLimit& r);
nlohmann::json to_json(const CapacityConditionReport& r);
nlohmann::json to_json(const ApReport& r);
nlohmann::json to_json(const ExponentEstimate& r);
nlohmann::json to_json(const ExponentComparison& r);
nlohmann::json to_json(const P1SlopeReport& r);
nlohmann::json to_json(const DoublingReport& r);
nlohmann::json to_json(const DecisionReport& r);

/// Renders a report. CSV is one "path,value" row per leaf with the same
/// number text as JSON; text rounds numbers to 6 significant digits.
std::string render(const nlohmann::json& report, Format f);

}  // namespace bowtie::cli
