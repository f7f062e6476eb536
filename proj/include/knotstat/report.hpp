#pragma once

#include <json.hpp>
#include <string>
#include <string_view>

#include "knotstat/experiments.hpp"
#include "knotstat/knot_data.hpp"

namespace knotstat {

inline constexpr int kSchemaVersion = 1;

enum class OutputFormat { Json, Text, Csv };

OutputFormat parse_output_format(std::string_view text);

// Typed results to JSON. Absent optionals serialize as null.
nlohmann::json to_json(const ValidationReport& r);
nlohmann::json to_json(const ResultCell& c);
nlohmann::json to_json(const CorrelationTable& t);
nlohmann::json to_json(const ErrorTable& t);
nlohmann::json to_json(const FormulaFit& f);
nlohmann::json to_json(const std::vector<SweepEntry>& entries);
nlohmann::json to_json(const FeatureLayout& layout);
FeatureLayout feature_layout_from_json(const nlohmann::json& j);

/// Renders a command envelope {schema_version, command, config, result}.
/// JSON output is indented and ends with a newline. Text renders tables with
/// one decimal for MAPE and two for relative MSE; bold cells are wrapped in
/// asterisks. UsageError if the command has no CSV form.
std::string render(const nlohmann::json& envelope, OutputFormat format);

}  // namespace knotstat
