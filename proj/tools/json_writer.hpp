#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace forest::cli {

/// Shortest text for a double at 17 significant digits; "null" when not finite.
std::string format_number(double x);

/// Compact JSON with every floating-point number written by format_number.
std::string write_json(const nlohmann::ordered_json& doc);

/// "key,value" rows, nested keys joined by '.', array positions as indices.
std::string write_csv(const nlohmann::ordered_json& doc, const std::string& prefix = {});

}  // namespace forest::cli
