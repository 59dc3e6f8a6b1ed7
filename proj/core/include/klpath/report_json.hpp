#pragma once

#include <filesystem>
#include <nlohmann/json.hpp>

#include "klpath/verify.hpp"

namespace klpath {

/// Library version string embedded in every report.
const char* version() noexcept;

/// Report documents share one schema: modulus {p, n}, b0, alpha, gaps[],
/// moments[], fitted_slope, violations[], ks[], zero_mass_fraction, seed,
/// version. Fields a report does not produce are null or empty.
nlohmann::json to_json(const MomentReport& report);
nlohmann::json to_json(const LawComparisonReport& report);

/// Writes `doc` pretty-printed with a trailing newline. Doubles are printed
/// in shortest round-trip form, so the file is a faithful copy of the values.
void write_json(const std::filesystem::path& file, const nlohmann::json& doc);

}  // namespace klpath
