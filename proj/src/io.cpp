#include "zeno/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "zeno/errors.hpp"
#include "zeno/registry.hpp"

namespace zeno {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  if (ec != std::errc()) throw InvalidArgument("format_double: conversion failed");
  return std::string(buf, ptr);
}

namespace {

double require_number(const Json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
  if (!j.at(key).is_number()) throw ConfigError(std::string("field '") + key + "' must be a number");
  return j.at(key).get<double>();
}

double optional_number(const Json& j, const char* key, double fallback) {
  return j.contains(key) ? require_number(j, key) : fallback;
}

std::vector<double> number_array(const Json& j, const char* what) {
  if (!j.is_array()) throw ConfigError(std::string(what) + " must be an array of numbers");
  std::vector<double> out;
  for (const Json& v : j) {
    if (!v.is_number()) throw ConfigError(std::string(what) + " must be an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

Json series_to_json(const Series& s) {
  Json points = Json::array();
  for (const SeriesPoint& p : s.points) {
    points.push_back({{"x", p.x}, {"value", p.value}, {"error_bound", p.error_bound}});
  }
  return {{"name", s.name}, {"x", s.x_name}, {"points", std::move(points)}};
}

}  // namespace

Json matrix_to_json(const ComplexMatrix& m) {
  Json re = Json::array();
  Json im = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json re_row = Json::array();
    Json im_row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) {
      re_row.push_back(m(i, j).real());
      im_row.push_back(m(i, j).imag());
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

ComplexMatrix matrix_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("matrix must be an object with rows, cols, re and optionally im");
  const double rows_d = require_number(j, "rows");
  const double cols_d = require_number(j, "cols");
  if (rows_d < 1 || cols_d < 1 || rows_d != std::floor(rows_d) || cols_d != std::floor(cols_d) || rows_d > 4096 ||
      cols_d > 4096) {
    throw ConfigError("matrix rows and cols must be positive integers");
  }
  const auto rows = static_cast<std::size_t>(rows_d);
  const auto cols = static_cast<std::size_t>(cols_d);
  auto read_part = [&](const char* key, std::vector<double>& out) {
    const Json& part = j.at(key);
    if (!part.is_array() || part.size() != rows) {
      throw ConfigError(std::string("matrix '") + key + "' must have " + std::to_string(rows) + " rows");
    }
    for (const Json& row : part) {
      const std::vector<double> values = number_array(row, "matrix row");
      if (values.size() != cols) {
        throw ConfigError(std::string("matrix '") + key + "' rows must have " + std::to_string(cols) + " entries");
      }
      out.insert(out.end(), values.begin(), values.end());
    }
  };
  if (!j.contains("re")) throw ConfigError("missing field 're'");
  std::vector<double> re;
  std::vector<double> im;
  read_part("re", re);
  if (j.contains("im")) {
    read_part("im", im);
  } else {
    im.assign(re.size(), 0.0);
  }
  std::vector<Complex> entries(re.size());
  for (std::size_t k = 0; k < re.size(); ++k) entries[k] = Complex(re[k], im[k]);
  try {
    return ComplexMatrix(rows, cols, std::move(entries));
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

Json scenario_to_json(const ZenoScenario& s) {
  return {{"label", s.label()},
          {"hamiltonian", matrix_to_json(s.hamiltonian().matrix())},
          {"projection", matrix_to_json(s.projection().matrix())}};
}

ZenoScenario scenario_from_json(const Json& j) {
  if (j.is_string()) return builtin_scenario(j.get<std::string>());
  if (!j.is_object()) throw ConfigError("scenario must be an object or a builtin name");
  if (j.contains("builtin")) return builtin_scenario(j.at("builtin").get<std::string>());
  if (!j.contains("label") || !j.at("label").is_string()) throw ConfigError("scenario needs a string 'label'");
  if (!j.contains("hamiltonian") || !j.contains("projection")) {
    throw ConfigError("scenario needs 'hamiltonian' and 'projection' matrices");
  }
  return ZenoScenario(j.at("label").get<std::string>(), hermitian_eigendecompose(matrix_from_json(j.at("hamiltonian"))),
                      OrthogonalProjection::from_matrix(matrix_from_json(j.at("projection"))));
}

Json measure_to_json(const SpectralMeasure1D& mu) {
  return std::visit(
      [](const auto& m) -> Json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, HeavyLogTail>) {
          return {{"family", "heavy_log_tail"}, {"a", m.a}};
        } else if constexpr (std::is_same_v<T, Cauchy>) {
          return {{"family", "cauchy"}, {"gamma", m.gamma}, {"center", m.center}};
        } else if constexpr (std::is_same_v<T, Gaussian>) {
          return {{"family", "gaussian"}, {"mean", m.mean}, {"sigma", m.sigma}};
        } else if constexpr (std::is_same_v<T, PointMass>) {
          return {{"family", "point_mass"}, {"location", m.location}};
        } else if constexpr (std::is_same_v<T, DiscreteAtoms>) {
          return {{"family", "discrete_atoms"}, {"locations", m.locations}, {"weights", m.weights}};
        } else {
          if (m.mirror_of) return {{"family", "symmetrized"}, {"of", measure_to_json(*m.mirror_of)}};
          return {{"family", "density"}};
        }
      },
      mu.variant());
}

SpectralMeasure1D measure_from_json(const Json& j) {
  if (j.is_string()) return builtin_measure(j.get<std::string>());
  if (!j.is_object()) throw ConfigError("measure must be an object or a builtin spec string");
  if (j.contains("builtin")) return builtin_measure(j.at("builtin").get<std::string>());
  if (!j.contains("family") || !j.at("family").is_string()) throw ConfigError("measure needs a string 'family'");
  const std::string family = j.at("family").get<std::string>();
  if (family == "heavy_log_tail") return HeavyLogTail{optional_number(j, "a", std::numbers::e)};
  if (family == "cauchy") return Cauchy{optional_number(j, "gamma", 1.0), optional_number(j, "center", 0.0)};
  if (family == "gaussian") return Gaussian{optional_number(j, "mean", 0.0), optional_number(j, "sigma", 1.0)};
  if (family == "point_mass") return PointMass{optional_number(j, "location", 0.0)};
  if (family == "discrete_atoms") {
    if (!j.contains("locations") || !j.contains("weights")) {
      throw ConfigError("discrete_atoms needs 'locations' and 'weights'");
    }
    return DiscreteAtoms{number_array(j.at("locations"), "locations"), number_array(j.at("weights"), "weights")};
  }
  if (family == "symmetrized") {
    if (!j.contains("of")) throw ConfigError("symmetrized needs 'of'");
    return symmetrize(measure_from_json(j.at("of")));
  }
  throw ConfigError("unknown measure family '" + family + "'");
}

Json report_to_json(const ConvergenceReport& r) {
  Json quantities = Json::array();
  for (const Series& s : r.quantities) quantities.push_back(series_to_json(s));
  Json fit = nullptr;
  if (r.fit) {
    fit = {{"exponent", r.fit->exponent},
           {"constant", r.fit->constant},
           {"residual", r.fit->residual},
           {"points_used", r.fit->points_used}};
  }
  Json energy = nullptr;
  if (r.zeno_energy) energy = *r.zeno_energy;
  return {{"label", r.label},
          {"kind", r.kind},
          {"t", r.t},
          {"quantities", std::move(quantities)},
          {"fit", std::move(fit)},
          {"fit_status", r.fit_status},
          {"falloff_trend", r.falloff_trend},
          {"mean_trend", r.mean_trend},
          {"classification", std::string(to_string(r.classification))},
          {"oracle", r.oracle},
          {"zeno_energy", std::move(energy)},
          {"errors", r.errors}};
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

Json parse_json(std::string_view text, std::string_view origin) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    const std::size_t offset = std::min<std::size_t>(e.byte, text.size());
    std::size_t line = 1;
    for (std::size_t k = 0; k + 1 < offset; ++k) {
      if (text[k] == '\n') ++line;
    }
    throw ConfigError(std::string(origin) + ":" + std::to_string(line) + ": invalid JSON (" + e.what() + ")");
  }
}

Json read_json_file(const std::filesystem::path& path) { return parse_json(read_text_file(path), path.string()); }

std::string write_csv(const CsvTable& table) {
  std::string out;
  for (std::size_t k = 0; k < table.header.size(); ++k) {
    if (k > 0) out += ',';
    out += table.header[k];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size()) throw InvalidArgument("write_csv: row width differs from header");
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k > 0) out += ',';
      out += format_double(row[k]);
    }
    out += '\n';
  }
  return out;
}

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  auto split = [](std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      std::string_view cell = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
      while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
      while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t')) cell.remove_suffix(1);
      cells.push_back(cell);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return cells;
  };
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    const auto cells = split(line);
    if (table.header.empty()) {
      for (std::string_view c : cells) {
        if (c.empty()) throw MalformedCsv("line " + std::to_string(line_no) + ": empty column name");
        table.header.emplace_back(c);
      }
      if (table.header.size() < 2) throw MalformedCsv("line 1: need an x column and at least one series");
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw MalformedCsv("line " + std::to_string(line_no) + ": expected " + std::to_string(table.header.size()) +
                         " fields, found " + std::to_string(cells.size()));
    }
    std::vector<double> row;
    for (std::string_view c : cells) {
      double v = 0.0;
      const char* first = c.data();
      const char* last = c.data() + c.size();
      if (first != last && *first == '+') ++first;
      const auto [ptr, ec] = std::from_chars(first, last, v);
      if (c.empty() || ec != std::errc() || ptr != last) {
        throw MalformedCsv("line " + std::to_string(line_no) + ": not a number: '" + std::string(c) + "'");
      }
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  if (table.header.empty()) throw MalformedCsv("missing header row");
  if (table.rows.empty()) throw MalformedCsv("no data rows");
  return table;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error("write to '" + tmp.string() + "' failed");
  }
  std::filesystem::rename(tmp, path);
}

std::string file_stem_for(std::string_view label) {
  std::string out;
  for (char c : label) {
    const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.' ||
                      c == '_' || c == '-';
    out += keep ? c : '_';
  }
  if (out.empty()) out = "unnamed";
  return out;
}

}  // namespace zeno
