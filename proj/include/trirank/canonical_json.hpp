#pragma once

#include "trirank/simulate.hpp"

#include <string>
#include <string_view>

#include <json.hpp>

namespace trirank {

using Json = nlohmann::json;

/// Sorted keys, no whitespace, floats with 17 significant digits, NaN and
/// infinities as null. Equal values always give equal bytes.
std::string to_canonical(const Json& value);

/// Parses JSON text; malformed input is a ValidationError.
Json parse_json(std::string_view text);

Json histogram_to_json(const FluctuationHistogram& hist);
FluctuationHistogram histogram_from_json(const Json& j);

/// tv, chi2, chi2_pvalue and points are null / empty when the report has no pmf.
Json report_to_json(const FitReport& report);
FitReport report_from_json(const Json& j);

/// The per-point table, header "x,empirical,theory".
std::string report_to_csv(const FitReport& report);

} // namespace trirank
