#include "zeno/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <ostream>
#include <set>

#include "zeno/errors.hpp"
#include "zeno/measure.hpp"
#include "zeno/plot.hpp"
#include "zeno/registry.hpp"

namespace zeno {

namespace {

std::string short_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 6);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("?");
}

double parse_double(std::string_view token, const std::string& context) {
  while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
  while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
  double v = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (token.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw ConfigError(context + ": not a finite number: '" + std::string(token) + "'");
  }
  return v;
}

std::vector<std::size_t> to_counts(const std::vector<double>& values, const char* what) {
  std::vector<std::size_t> out;
  for (double v : values) {
    if (!(v >= 1.0) || v != std::floor(v) || v > 1e15) {
      throw ConfigError(std::string(what) + " entries must be positive integers");
    }
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

std::vector<double> json_numbers(const Json& j, const char* key) {
  if (!j.is_array()) throw ConfigError(std::string("'") + key + "' must be an array of numbers or a grid string");
  std::vector<double> out;
  for (const Json& v : j) {
    if (!v.is_number()) throw ConfigError(std::string("'") + key + "' must contain numbers only");
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<double> json_grid(const Json& j, const char* key) {
  if (j.is_string()) return parse_grid(j.get<std::string>());
  return json_numbers(j, key);
}

std::vector<std::string> json_strings(const Json& j, const char* key) {
  if (j.is_string()) return {j.get<std::string>()};
  if (!j.is_array()) throw ConfigError(std::string("'") + key + "' must be a string or an array of strings");
  std::vector<std::string> out;
  for (const Json& v : j) {
    if (!v.is_string()) throw ConfigError(std::string("'") + key + "' must contain strings only");
    out.push_back(v.get<std::string>());
  }
  return out;
}

Json settings_json(const RunConfig& c) {
  return {{"t_grid", c.t_grid},
          {"n_grid", c.n_grid},
          {"lambda_grid", c.lambda_grid},
          {"s_grid", c.s_grid},
          {"tauberian_orders", c.tauberian_orders},
          {"tol", c.tol},
          {"classifier_tol", c.classifier_tol},
          {"force_sequential", c.force_sequential},
          {"seed", c.seed}};
}

// Hands out unique output stems in input order.
class StemAllocator {
 public:
  std::string take(const std::string& label) {
    const std::string base = file_stem_for(label);
    std::string stem = base;
    for (int k = 2; used_.count(stem) != 0; ++k) stem = base + "_" + std::to_string(k);
    used_.insert(stem);
    return stem;
  }

 private:
  std::set<std::string> used_;
};

struct Loaded {
  std::vector<SweepInput> inputs;
  std::vector<std::string> failures;
};

// JSON files hold one object, an array, or {"scenarios"/"measures": [...]}.
std::vector<Json> file_entries(const RunConfig& config, const std::string& spec, const char* list_key) {
  const std::filesystem::path path = std::filesystem::path(spec).is_absolute() ? std::filesystem::path(spec)
                                                                               : config.base_dir / spec;
  if (!std::filesystem::exists(path)) {
    throw ConfigError("'" + spec + "' is neither a builtin nor an existing file");
  }
  const Json j = read_json_file(path);
  const Json* list = &j;
  if (j.is_object() && j.contains(list_key)) list = &j.at(list_key);
  if (list->is_array()) return std::vector<Json>(list->begin(), list->end());
  return {*list};
}

Loaded load_scenarios(const RunConfig& config) {
  Loaded loaded;
  for (const std::string& spec : config.scenarios) {
    if (is_builtin_scenario(spec)) {
      try {
        loaded.inputs.emplace_back(builtin_scenario(spec, config.seed));
      } catch (const InvalidArgument& e) {
        throw ConfigError("scenario '" + spec + "': " + e.what());
      }
      continue;
    }
    const std::vector<Json> entries = file_entries(config, spec, "scenarios");
    for (std::size_t k = 0; k < entries.size(); ++k) {
      try {
        loaded.inputs.emplace_back(scenario_from_json(entries[k]));
      } catch (const ConfigError& e) {
        throw ConfigError(spec + " entry " + std::to_string(k) + ": " + e.what());
      } catch (const Error& e) {
        loaded.failures.push_back(spec + " entry " + std::to_string(k) + ": " + e.what());
      }
    }
  }
  return loaded;
}

Loaded load_measures(const RunConfig& config) {
  Loaded loaded;
  for (const std::string& spec : config.measures) {
    if (is_builtin_measure(spec)) {
      try {
        loaded.inputs.emplace_back(MeasureScenario{spec, builtin_measure(spec)});
      } catch (const InvalidArgument& e) {
        throw ConfigError("measure '" + spec + "': " + e.what());
      } catch (const Error& e) {
        loaded.failures.push_back(spec + ": " + e.what());
      }
      continue;
    }
    const std::vector<Json> entries = file_entries(config, spec, "measures");
    for (std::size_t k = 0; k < entries.size(); ++k) {
      const Json& entry = entries[k];
      std::string label = spec + "#" + std::to_string(k);
      if (entry.is_object() && entry.contains("label") && entry.at("label").is_string()) {
        label = entry.at("label").get<std::string>();
      } else if (entry.is_string()) {
        label = entry.get<std::string>();
      }
      try {
        loaded.inputs.emplace_back(MeasureScenario{label, measure_from_json(entry)});
      } catch (const ConfigError& e) {
        throw ConfigError(spec + " entry " + std::to_string(k) + ": " + e.what());
      } catch (const Error& e) {
        loaded.failures.push_back(label + ": " + e.what());
      }
    }
  }
  return loaded;
}

// x column plus one column per t; cells missing for a t are NaN.
CsvTable wide_by_t(const std::vector<double>& ts, const std::vector<std::size_t>& ns, const std::string& y_name,
                   const std::map<std::pair<std::size_t, std::size_t>, double>& cells) {
  CsvTable table;
  table.header.push_back("N");
  for (double t : ts) table.header.push_back(y_name + "_t=" + short_number(t));
  for (std::size_t i = 0; i < ns.size(); ++i) {
    std::vector<double> row{static_cast<double>(ns[i])};
    for (std::size_t k = 0; k < ts.size(); ++k) {
      const auto it = cells.find({k, i});
      row.push_back(it == cells.end() ? std::nan("") : it->second);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

void emit_svg(const std::filesystem::path& path, const CsvTable& table, const std::string& title) {
  write_text_file(path, render_svg(chart_from_csv(table, title)));
}

}  // namespace

void RunConfig::validate() const {
  if (t_grid.empty()) throw ConfigError("t grid must be nonempty");
  if (s_grid.empty()) throw ConfigError("s grid must be nonempty");
  for (double t : t_grid) {
    if (!std::isfinite(t)) throw ConfigError("t grid entries must be finite");
  }
  for (double s : s_grid) {
    if (!(s > 0.0) || !std::isfinite(s)) throw ConfigError("s grid entries must be positive and finite");
  }
  if (tauberian_orders.empty()) throw ConfigError("tauberian orders must be nonempty");
  for (int k : tauberian_orders) {
    if (k < 1) throw ConfigError("tauberian orders must be ≥ 1");
  }
  if (!(tol > 0.0)) throw ConfigError("tol must be positive");
  diagnostics().validate();
  if (out_dir.empty()) throw ConfigError("output directory must be set");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (!std::filesystem::is_directory(out_dir)) {
    throw ConfigError("output directory '" + out_dir.string() + "' cannot be created");
  }
  const std::filesystem::path probe = out_dir / ".zenolab_write_probe";
  try {
    write_text_file(probe, "");
  } catch (const Error&) {
    throw ConfigError("output directory '" + out_dir.string() + "' is not writable");
  }
  std::filesystem::remove(probe, ec);
}

DiagnosticsConfig RunConfig::diagnostics() const {
  DiagnosticsConfig d;
  d.n_grid = n_grid;
  d.lambda_grid = lambda_grid;
  d.t_grid = t_grid;
  d.s_grid = s_grid;
  d.quadrature_tol = tol;
  d.classifier_tol = classifier_tol;
  d.force_sequential = force_sequential;
  d.threads = threads;
  return d;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  std::string_view rest = text;
  while (true) {
    const std::size_t comma = rest.find(',');
    const std::string_view token = rest.substr(0, comma);
    const std::size_t dots = token.find("..");
    if (dots != std::string_view::npos) {
      auto exponent = [&](std::string_view part) {
        while (!part.empty() && part.front() == ' ') part.remove_prefix(1);
        if (part.substr(0, 2) != "2^") throw ConfigError("grid range must look like 2^a..2^b: '" + text + "'");
        const double e = parse_double(part.substr(2), "grid");
        if (e != std::floor(e) || std::abs(e) > 1000) throw ConfigError("grid exponents must be integers");
        return static_cast<int>(e);
      };
      const int lo = exponent(token.substr(0, dots));
      const int hi = exponent(token.substr(dots + 2));
      if (hi < lo) throw ConfigError("grid range is empty: '" + text + "'");
      for (int k = lo; k <= hi; ++k) out.push_back(std::ldexp(1.0, k));
    } else if (token.find("2^") != std::string_view::npos) {
      std::string_view t = token;
      while (!t.empty() && t.front() == ' ') t.remove_prefix(1);
      const double e = parse_double(t.substr(2), "grid");
      if (t.substr(0, 2) != "2^" || e != std::floor(e)) throw ConfigError("bad grid entry '" + std::string(token) + "'");
      out.push_back(std::ldexp(1.0, static_cast<int>(e)));
    } else {
      out.push_back(parse_double(token, "grid"));
    }
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

RunConfig run_config_from_json(const Json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> kKeys{"scenarios",   "measures",        "out",         "t_grid",
                                           "n_grid",      "lambda_grid",     "s_grid",      "tauberian_orders",
                                           "tol",         "classifier_tol",  "force_sequential",
                                           "emit_svg",    "seed",            "threads"};
  for (const auto& [key, value] : j.items()) {
    if (kKeys.count(key) == 0) throw ConfigError("unknown config key '" + key + "'");
  }
  RunConfig c;
  c.base_dir = base_dir;
  try {
    if (j.contains("scenarios")) c.scenarios = json_strings(j.at("scenarios"), "scenarios");
    if (j.contains("measures")) c.measures = json_strings(j.at("measures"), "measures");
    if (j.contains("out")) {
      const std::filesystem::path out = j.at("out").get<std::string>();
      c.out_dir = out.is_absolute() ? out : base_dir / out;
    }
    if (j.contains("t_grid")) c.t_grid = json_grid(j.at("t_grid"), "t_grid");
    if (j.contains("n_grid")) c.n_grid = to_counts(json_grid(j.at("n_grid"), "n_grid"), "n_grid");
    if (j.contains("lambda_grid")) c.lambda_grid = json_grid(j.at("lambda_grid"), "lambda_grid");
    if (j.contains("s_grid")) c.s_grid = json_grid(j.at("s_grid"), "s_grid");
    if (j.contains("tauberian_orders")) c.tauberian_orders = j.at("tauberian_orders").get<std::vector<int>>();
    if (j.contains("tol")) c.tol = j.at("tol").get<double>();
    if (j.contains("classifier_tol")) c.classifier_tol = j.at("classifier_tol").get<double>();
    if (j.contains("force_sequential")) c.force_sequential = j.at("force_sequential").get<bool>();
    if (j.contains("emit_svg")) c.emit_svg = j.at("emit_svg").get<bool>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("threads")) c.threads = j.at("threads").get<std::size_t>();
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("config value has the wrong type: ") + e.what());
  }
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  const Json j = read_json_file(path);
  try {
    return run_config_from_json(j, path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  Loaded loaded;
  try {
    if (config.scenarios.empty()) throw ConfigError("no scenarios given (use --scenario or \"scenarios\")");
    config.validate();
    loaded = load_scenarios(config);
  } catch (const Error& e) {
    err << "zenolab simulate: " << e.what() << "\n";
    return kExitUsage;
  }
  for (const std::string& f : loaded.failures) err << "scenario failed: " << f << "\n";
  bool failed = !loaded.failures.empty();
  if (loaded.inputs.empty()) return kExitFailure;

  const DiagnosticsConfig diagnostics = config.diagnostics();
  const std::vector<ConvergenceReport> reports = run_sweep(loaded.inputs, config.t_grid, config.n_grid, diagnostics);

  StemAllocator stems;
  const std::size_t nt = config.t_grid.size();
  for (std::size_t s = 0; s < loaded.inputs.size(); ++s) {
    const auto& scenario = std::get<ZenoScenario>(loaded.inputs[s]);
    const std::string stem = stems.take(scenario.label());
    CsvTable csv{{"t", "N", "error"}, {}};
    std::map<std::pair<std::size_t, std::size_t>, double> cells;
    Json doc{{"schema_version", kSchemaVersion},
             {"command", "simulate"},
             {"scenario", scenario_to_json(scenario)},
             {"settings", settings_json(config)}};
    Json report_list = Json::array();
    for (std::size_t k = 0; k < nt; ++k) {
      const ConvergenceReport& r = reports[s * nt + k];
      report_list.push_back(report_to_json(r));
      for (const std::string& e : r.errors) {
        err << "scenario failed: " << r.label << " t=" << short_number(r.t) << ": " << e << "\n";
        failed = true;
      }
      if (const Series* errors = r.find("qzd_error")) {
        for (std::size_t i = 0; i < errors->points.size(); ++i) {
          const SeriesPoint& p = errors->points[i];
          csv.rows.push_back({r.t, p.x, p.value});
          cells[{k, i}] = p.value;
        }
      }
      out << r.label << " t=" << short_number(r.t) << ": " << to_string(r.classification);
      if (r.fit) out << ", rate exponent " << short_number(r.fit->exponent);
      out << " (fit " << r.fit_status << ")\n";
    }
    doc["reports"] = std::move(report_list);
    try {
      write_text_file(config.out_dir / (stem + "_qzd.csv"), write_csv(csv));
      write_text_file(config.out_dir / (stem + "_qzd.json"), dump_json(doc));
      if (config.emit_svg) {
        emit_svg(config.out_dir / (stem + "_qzd.svg"), wide_by_t(config.t_grid, config.n_grid, "error", cells),
                 scenario.label() + ": ||V_N(t) - P exp(-itPHP)||");
      }
    } catch (const std::exception& e) {
      err << "cannot write outputs for " << scenario.label() << ": " << e.what() << "\n";
      failed = true;
    }
  }
  return failed ? kExitFailure : kExitOk;
}

int cmd_measure(const RunConfig& config, std::ostream& out, std::ostream& err) {
  Loaded loaded;
  try {
    if (config.measures.empty()) throw ConfigError("no measures given (use --scenario or \"measures\")");
    config.validate();
    loaded = load_measures(config);
  } catch (const Error& e) {
    err << "zenolab measure: " << e.what() << "\n";
    return kExitUsage;
  }
  for (const std::string& f : loaded.failures) err << "measure failed: " << f << "\n";
  bool failed = !loaded.failures.empty();
  if (loaded.inputs.empty()) return kExitFailure;

  const DiagnosticsConfig diagnostics = config.diagnostics();
  const std::vector<ConvergenceReport> reports = run_sweep(loaded.inputs, config.t_grid, config.n_grid, diagnostics);

  StemAllocator stems;
  const std::size_t nt = config.t_grid.size();
  for (std::size_t m = 0; m < loaded.inputs.size(); ++m) {
    const auto& scenario = std::get<MeasureScenario>(loaded.inputs[m]);
    const SpectralMeasure1D& mu = scenario.measure;
    const std::string stem = stems.take(scenario.label);
    std::vector<std::string> errors;
    auto attempt = [&](const std::string& what, auto&& body) {
      try {
        body();
      } catch (const Error& e) {
        errors.push_back(what + ": " + e.what());
      }
    };

    Json doc{{"schema_version", kSchemaVersion},
             {"command", "measure"},
             {"label", scenario.label},
             {"kind", mu.kind()},
             {"measure", measure_to_json(mu)},
             {"settings", settings_json(config)}};

    CsvTable falloff{{"lambda", "value", "error_bound"}, {}};
    attempt("falloff", [&] {
      for (const FalloffPoint& p : falloff_diagnostic(mu, config.lambda_grid)) {
        falloff.rows.push_back({p.lambda_cut, p.value, p.error_bound});
      }
    });

    CsvTable probability{{"t", "N", "value", "error_bound", "log_error_bound"}, {}};
    std::map<std::pair<std::size_t, std::size_t>, double> probability_cells;
    for (std::size_t k = 0; k < nt; ++k) {
      const double t = config.t_grid[k];
      for (std::size_t i = 0; i < config.n_grid.size(); ++i) {
        const std::size_t n = config.n_grid[i];
        attempt("zeno_probability t=" + short_number(t) + " N=" + std::to_string(n), [&] {
          const ZenoProbability p = zeno_probability(mu, t, n, config.tol);
          probability.rows.push_back({t, static_cast<double>(n), p.value, p.error_bound, p.log_error_bound});
          probability_cells[{k, i}] = p.value;
        });
      }
    }

    CsvTable phase{{"t", "N", "modulus", "phase", "error_bound"}, {}};
    Json phase_summary = Json::array();
    for (double t : config.t_grid) {
      if (t == 0.0) continue;
      attempt("zeno_phase t=" + short_number(t), [&] {
        const ZenoPhaseReport r = zeno_phase(mu, t, config.n_grid, config.tol, config.classifier_tol);
        for (const ZenoPhasePoint& p : r.points) {
          phase.rows.push_back({t, static_cast<double>(p.n), p.modulus, p.phase, p.error_bound});
        }
        Json energy = nullptr;
        if (r.zeno_energy) energy = *r.zeno_energy;
        phase_summary.push_back({{"t", t},
                                 {"status", std::string(to_string(r.status))},
                                 {"modulus_deficit_trend", std::string(to_string(r.modulus_deficit_trend))},
                                 {"phase_trend", std::string(to_string(r.phase_trend))},
                                 {"divergence_flag", r.divergence_flag},
                                 {"zeno_energy", energy}});
      });
    }

    CsvTable tauberian{{"k", "lambda", "lhs", "rhs"}, {}};
    Json tauberian_summary = Json::array();
    for (int k : config.tauberian_orders) {
      attempt("tauberian k=" + std::to_string(k), [&] {
        const TauberianReport r = tauberian_check(mu, k, config.lambda_grid, config.classifier_tol);
        for (std::size_t i = 0; i < r.lambda_grid.size(); ++i) {
          tauberian.rows.push_back({static_cast<double>(k), r.lambda_grid[i], r.lhs[i], r.rhs[i]});
        }
        tauberian_summary.push_back({{"k", k},
                                     {"lhs_trend", std::string(to_string(r.lhs_trend))},
                                     {"rhs_trend", std::string(to_string(r.rhs_trend))},
                                     {"consistent", r.consistent}});
      });
    }

    CsvTable derivative{{"s", "re_part", "im_part", "error_bound"}, {}};
    attempt("derivative_parts", [&] {
      const DerivativePartsReport r = amplitude_derivative_parts(mu, config.s_grid, config.tol);
      for (std::size_t i = 0; i < r.s.size(); ++i) {
        derivative.rows.push_back({r.s[i], r.re_part[i], r.im_part[i], r.error_bound[i]});
      }
    });

    Json report_list = Json::array();
    for (std::size_t k = 0; k < nt; ++k) {
      const ConvergenceReport& r = reports[m * nt + k];
      report_list.push_back(report_to_json(r));
      for (const std::string& e : r.errors) errors.push_back("classification t=" + short_number(r.t) + ": " + e);
      out << r.label << " t=" << short_number(r.t) << ": " << to_string(r.classification);
      if (r.zeno_energy) out << ", E_Z = " << short_number(*r.zeno_energy);
      out << "\n";
    }

    doc["falloff"] = Json::array();
    for (const auto& row : falloff.rows) {
      doc["falloff"].push_back({{"lambda", row[0]}, {"value", row[1]}, {"error_bound", row[2]}});
    }
    doc["zeno_phase"] = std::move(phase_summary);
    doc["tauberian"] = std::move(tauberian_summary);
    doc["reports"] = std::move(report_list);
    doc["errors"] = errors;
    for (const std::string& e : errors) err << "measure failed: " << scenario.label << ": " << e << "\n";
    failed = failed || !errors.empty();

    try {
      write_text_file(config.out_dir / (stem + "_falloff.csv"), write_csv(falloff));
      write_text_file(config.out_dir / (stem + "_zeno_probability.csv"), write_csv(probability));
      write_text_file(config.out_dir / (stem + "_zeno_phase.csv"), write_csv(phase));
      write_text_file(config.out_dir / (stem + "_tauberian.csv"), write_csv(tauberian));
      write_text_file(config.out_dir / (stem + "_derivative_parts.csv"), write_csv(derivative));
      write_text_file(config.out_dir / (stem + "_measure.json"), dump_json(doc));
      if (config.emit_svg) {
        if (!falloff.rows.empty()) {
          emit_svg(config.out_dir / (stem + "_falloff.svg"), falloff,
                   scenario.label + ": lambda * mu((-lambda, lambda)^c)");
        }
        emit_svg(config.out_dir / (stem + "_zeno_probability.svg"),
                 wide_by_t(config.t_grid, config.n_grid, "p", probability_cells),
                 scenario.label + ": [p(t/N)]^N");
      }
    } catch (const std::exception& e) {
      err << "cannot write outputs for " << scenario.label << ": " << e.what() << "\n";
      failed = true;
    }
  }
  return failed ? kExitFailure : kExitOk;
}

int cmd_plot(const std::filesystem::path& csv, const std::filesystem::path& svg, std::ostream& out,
             std::ostream& err) {
  std::string text;
  try {
    text = read_text_file(csv);
  } catch (const Error& e) {
    err << "zenolab plot: " << e.what() << "\n";
    return kExitUsage;
  }
  try {
    const CsvTable table = parse_csv(text);
    write_text_file(svg, render_svg(chart_from_csv(table, csv.stem().string())));
  } catch (const MalformedCsv& e) {
    err << "zenolab plot: MalformedCsv: " << csv.string() << ": " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "zenolab plot: " << e.what() << "\n";
    return kExitFailure;
  }
  out << "wrote " << svg.string() << "\n";
  return kExitOk;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum Zeno product-formula laboratory", "zenolab"};
  app.require_subcommand(1);

  struct Flags {
    std::string config;
    std::vector<std::string> scenarios;
    std::string out;
    std::string n_grid, t_grid, lambda_grid, s_grid;
    double tol = 0.0;
    double classifier_tol = 0.0;
    std::uint64_t seed = 0;
    std::size_t threads = 0;
  };
  Flags simulate_flags;
  Flags measure_flags;
  auto add_common = [](CLI::App* sub, Flags& f, const char* scenario_help) {
    sub->add_option("--config", f.config, "JSON run configuration");
    sub->add_option("--scenario", f.scenarios, scenario_help);
    sub->add_option("--out", f.out, "Output directory");
    sub->add_option("--n-grid", f.n_grid, "N values: \"64,128\" or \"2^6..2^20\"");
    sub->add_option("--t-grid", f.t_grid, "t values");
    sub->add_option("--lambda-grid", f.lambda_grid, "Λ cut-offs");
    sub->add_option("--tol", f.tol, "Quadrature tolerance");
    sub->add_option("--classifier-tol", f.classifier_tol, "Trend classifier tolerance");
    sub->add_option("--seed", f.seed, "Seed for random scenarios");
    sub->add_option("--threads", f.threads, "Sweep worker threads (0 = hardware)");
    sub->add_flag("--force-sequential", "Multiply products one factor at a time");
    sub->add_flag("--emit-svg", "Write SVG charts next to the CSV files");
  };
  CLI::App* simulate = app.add_subcommand("simulate", "Finite-dimensional V_N(t) convergence");
  add_common(simulate, simulate_flags, "Builtin scenario spec or scenario JSON file (repeatable)");
  CLI::App* measure = app.add_subcommand("measure", "Spectral-measure diagnostics");
  add_common(measure, measure_flags, "Builtin measure spec or measure JSON file (repeatable)");
  measure->add_option("--s-grid", measure_flags.s_grid, "s values for the amplitude derivative parts");
  CLI::App* plot = app.add_subcommand("plot", "Render a CSV (x, series...) as an SVG line chart");
  std::string plot_csv;
  std::string plot_svg;
  plot->add_option("csv", plot_csv, "Input CSV")->required();
  plot->add_option("svg", plot_svg, "Output SVG")->required();
  CLI::App* list = app.add_subcommand("list", "List builtin scenarios and measures");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*list) {
    out << "scenarios:";
    for (const std::string& n : builtin_scenario_names()) out << " " << n;
    out << "\nmeasures:";
    for (const std::string& n : builtin_measure_names()) out << " " << n;
    out << "\n";
    return kExitOk;
  }
  if (*plot) return cmd_plot(plot_csv, plot_svg, out, err);

  const bool is_measure = measure->parsed();
  CLI::App* sub = is_measure ? measure : simulate;
  const Flags& f = is_measure ? measure_flags : simulate_flags;
  RunConfig config;
  try {
    if (!f.config.empty()) config = load_run_config(f.config);
    if (!f.scenarios.empty()) {
      (is_measure ? config.measures : config.scenarios) = f.scenarios;
    }
    if (!f.out.empty()) config.out_dir = f.out;
    if (!f.n_grid.empty()) config.n_grid = to_counts(parse_grid(f.n_grid), "--n-grid");
    if (!f.t_grid.empty()) config.t_grid = parse_grid(f.t_grid);
    if (!f.lambda_grid.empty()) config.lambda_grid = parse_grid(f.lambda_grid);
    if (!f.s_grid.empty()) config.s_grid = parse_grid(f.s_grid);
    if (sub->count("--tol") > 0) config.tol = f.tol;
    if (sub->count("--classifier-tol") > 0) config.classifier_tol = f.classifier_tol;
    if (sub->count("--seed") > 0) config.seed = f.seed;
    if (sub->count("--threads") > 0) config.threads = f.threads;
    if (sub->count("--force-sequential") > 0) config.force_sequential = true;
    if (sub->count("--emit-svg") > 0) config.emit_svg = true;
  } catch (const Error& e) {
    err << "zenolab: " << e.what() << "\n";
    return kExitUsage;
  }
  return is_measure ? cmd_measure(config, out, err) : cmd_simulate(config, out, err);
}

}  // namespace zeno
