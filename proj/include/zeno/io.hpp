#pragma once

#include <json.hpp>

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "zeno/diagnostics.hpp"
#include "zeno/engine.hpp"
#include "zeno/measure.hpp"

namespace zeno {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// 17 significant digits, locale independent ("nan", "inf", "-inf" for non-finite values).
std::string format_double(double value);

/// {"rows": r, "cols": c, "re": [[...]], "im": [[...]]}; "im" may be omitted on input.
Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);

/// {"label": ..., "hamiltonian": matrix, "projection": matrix}
Json scenario_to_json(const ZenoScenario& s);
ZenoScenario scenario_from_json(const Json& j);

/// Measures are {"family": name, ...parameters}:
///   heavy_log_tail {a}, cauchy {gamma, center}, gaussian {mean, sigma},
///   point_mass {location}, discrete_atoms {locations, weights},
///   symmetrized {of: measure}.
/// {"builtin": "<spec string>"} is accepted as well.
Json measure_to_json(const SpectralMeasure1D& mu);
SpectralMeasure1D measure_from_json(const Json& j);

Json report_to_json(const ConvergenceReport& report);

/// Sorted keys, two-space indent, trailing newline.
std::string dump_json(const Json& j);

/// Parses JSON text; syntax errors become ConfigError naming `origin` and the line.
Json parse_json(std::string_view text, std::string_view origin);
Json read_json_file(const std::filesystem::path& path);

/// Header plus rows of numbers.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

std::string write_csv(const CsvTable& table);

/// Throws MalformedCsv on a missing header, ragged or non-numeric rows, or no data rows.
CsvTable parse_csv(std::string_view text);

std::string read_text_file(const std::filesystem::path& path);
/// Writes through a temporary file in the same directory, then renames.
void write_text_file(const std::filesystem::path& path, std::string_view contents);

/// Replaces every character outside [A-Za-z0-9._-] by '_'.
std::string file_stem_for(std::string_view label);

}  // namespace zeno
