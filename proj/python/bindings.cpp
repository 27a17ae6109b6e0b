#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "zeno/cli.hpp"
#include "zeno/diagnostics.hpp"
#include "zeno/engine.hpp"
#include "zeno/errors.hpp"
#include "zeno/io.hpp"
#include "zeno/measure.hpp"
#include "zeno/registry.hpp"

namespace py = pybind11;
using namespace zeno;

namespace {

using Rows = std::vector<std::vector<Complex>>;

Rows to_rows(const ComplexMatrix& m) {
  Rows out(m.rows(), std::vector<Complex>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  }
  return out;
}

ComplexMatrix from_rows(const Rows& rows) {
  if (rows.empty() || rows.front().empty()) throw InvalidArgument("matrix must be nonempty");
  std::vector<Complex> entries;
  for (const auto& row : rows) {
    if (row.size() != rows.front().size()) throw DimensionMismatch("ragged matrix rows");
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return ComplexMatrix(rows.size(), rows.front().size(), std::move(entries));
}

ZenoScenario make_scenario(const std::string& label, const Rows& h, const Rows& p) {
  return ZenoScenario(label, hermitian_eigendecompose(from_rows(h)), OrthogonalProjection::from_matrix(from_rows(p)));
}

DiagnosticsConfig diagnostics_config(const std::vector<std::size_t>& n_grid, const std::vector<double>& lambda_grid,
                                     double tol) {
  DiagnosticsConfig c;
  if (!n_grid.empty()) c.n_grid = n_grid;
  if (!lambda_grid.empty()) c.lambda_grid = lambda_grid;
  c.quadrature_tol = tol;
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Zeno product formulas, spectral-measure diagnostics and report tooling";

  // Registered base first: later translators are tried first, so subclasses win.
  const auto base = py::register_exception<Error>(m, "ZenoError");
  py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
  py::register_exception<PrecisionLoss>(m, "PrecisionLoss", base.ptr());
  py::register_exception<DegenerateFit>(m, "DegenerateFit", base.ptr());
  py::register_exception<QuadratureBudgetExceeded>(m, "QuadratureBudgetExceeded", base.ptr());

  py::class_<ZenoScenario>(m, "Scenario")
      .def(py::init(&make_scenario), py::arg("label"), py::arg("hamiltonian"), py::arg("projection"))
      .def_static(
          "builtin", [](const std::string& spec, std::uint64_t seed) { return builtin_scenario(spec, seed); },
          py::arg("spec"), py::arg("seed") = 0)
      .def_property_readonly("label", &ZenoScenario::label)
      .def_property_readonly("dim", &ZenoScenario::dim)
      .def_property_readonly("rank", &ZenoScenario::rank)
      .def("__repr__", [](const ZenoScenario& s) {
        return "<Scenario " + s.label() + " dim=" + std::to_string(s.dim()) + " rank=" + std::to_string(s.rank()) +
               ">";
      });

  m.def(
      "zeno_product",
      [](const ZenoScenario& s, double t, std::size_t n, bool sequential) {
        return to_rows(zeno_product(s, t, n, ProductOptions{sequential}));
      },
      py::arg("scenario"), py::arg("t"), py::arg("n"), py::arg("force_sequential") = false,
      "(P e^{-itH/N} P)^N as nested lists.");
  m.def(
      "qze_product",
      [](const ZenoScenario& s, double t, std::size_t n) { return to_rows(qze_product(s, t, n)); },
      py::arg("scenario"), py::arg("t"), py::arg("n"));
  m.def(
      "zeno_hamiltonian", [](const ZenoScenario& s) { return to_rows(zeno_hamiltonian(s)); }, py::arg("scenario"));
  m.def(
      "qzd_errors",
      [](const ZenoScenario& s, double t, const std::vector<std::size_t>& n_grid) {
        return qzd_limit(s, t, n_grid).per_n_errors;
      },
      py::arg("scenario"), py::arg("t"), py::arg("n_grid"), "[(N, ||V_N(t) - P e^{-itPHP}||)]");
  m.def(
      "telescoping_residual", [](const ZenoScenario& s, double t, std::size_t n) { return telescoping_residual(s, t, n); },
      py::arg("scenario"), py::arg("t"), py::arg("n"));

  py::class_<SpectralMeasure1D>(m, "Measure")
      .def_static("builtin", &builtin_measure, py::arg("spec"))
      .def_static(
          "from_json", [](const std::string& text) { return measure_from_json(parse_json(text, "<python>")); },
          py::arg("text"))
      .def("to_json", [](const SpectralMeasure1D& mu) { return measure_to_json(mu).dump(); })
      .def_property_readonly("kind", &SpectralMeasure1D::kind)
      .def_property_readonly("is_symmetric", &SpectralMeasure1D::is_symmetric)
      .def("symmetrized", [](const SpectralMeasure1D& mu) { return symmetrize(mu); })
      .def("__repr__", [](const SpectralMeasure1D& mu) { return "<Measure " + measure_to_json(mu).dump() + ">"; });

  m.def("tail_mass", &tail_mass, py::arg("measure"), py::arg("cut"));
  m.def("truncated_moment", &truncated_moment, py::arg("measure"), py::arg("k"), py::arg("cut"));
  m.def("truncated_abs_moment", &truncated_abs_moment, py::arg("measure"), py::arg("k"), py::arg("cut"));
  m.def(
      "falloff_diagnostic",
      [](const SpectralMeasure1D& mu, const std::vector<double>& grid) {
        std::vector<std::tuple<double, double, double>> out;
        for (const FalloffPoint& p : falloff_diagnostic(mu, grid)) out.emplace_back(p.lambda_cut, p.value, p.error_bound);
        return out;
      },
      py::arg("measure"), py::arg("lambda_grid"), "[(cut, cut * tail, error bound)]");
  m.def(
      "survival_amplitude",
      [](const SpectralMeasure1D& mu, double s, double tol) {
        const AmplitudeValue a = survival_amplitude(mu, s, tol);
        return std::make_pair(a.amplitude, a.quadrature_error_bound);
      },
      py::arg("measure"), py::arg("s"), py::arg("tol") = 1e-11);
  m.def(
      "zeno_probability",
      [](const SpectralMeasure1D& mu, double t, std::size_t n, double tol) {
        const ZenoProbability p = zeno_probability(mu, t, n, tol);
        py::dict d;
        d["value"] = p.value;
        d["error_bound"] = p.error_bound;
        d["log_error_bound"] = p.log_error_bound;
        return d;
      },
      py::arg("measure"), py::arg("t"), py::arg("n"), py::arg("tol") = 1e-11);
  m.def(
      "zeno_phase",
      [](const SpectralMeasure1D& mu, double t, const std::vector<std::size_t>& n_grid, double tol) {
        const ZenoPhaseReport r = zeno_phase(mu, t, n_grid, tol);
        py::dict d;
        d["status"] = std::string(to_string(r.status));
        d["divergence_flag"] = r.divergence_flag;
        d["zeno_energy"] = r.zeno_energy ? py::cast(*r.zeno_energy) : py::none();
        std::vector<std::tuple<std::size_t, Complex, double>> points;
        for (const ZenoPhasePoint& p : r.points) points.emplace_back(p.n, p.power, p.phase);
        d["points"] = points;
        return d;
      },
      py::arg("measure"), py::arg("t"), py::arg("n_grid"), py::arg("tol") = 1e-11);
  m.def(
      "tauberian_check",
      [](const SpectralMeasure1D& mu, int k, const std::vector<double>& grid) {
        const TauberianReport r = tauberian_check(mu, k, grid);
        py::dict d;
        d["consistent"] = r.consistent;
        d["lhs_trend"] = std::string(to_string(r.lhs_trend));
        d["rhs_trend"] = std::string(to_string(r.rhs_trend));
        d["lhs"] = r.lhs;
        d["rhs"] = r.rhs;
        return d;
      },
      py::arg("measure"), py::arg("k"), py::arg("lambda_grid"));
  m.def(
      "amplitude_derivative_parts",
      [](const SpectralMeasure1D& mu, const std::vector<double>& s, double tol) {
        const DerivativePartsReport r = amplitude_derivative_parts(mu, s, tol);
        py::dict d;
        d["s"] = r.s;
        d["re_part"] = r.re_part;
        d["im_part"] = r.im_part;
        d["error_bound"] = r.error_bound;
        return d;
      },
      py::arg("measure"), py::arg("s_grid"), py::arg("tol") = 1e-11);

  m.def(
      "fit_rate",
      [](const std::vector<std::pair<double, double>>& points) {
        const RateFit f = fit_rate(points);
        py::dict d;
        d["exponent"] = f.exponent;
        d["constant"] = f.constant;
        d["residual"] = f.residual;
        return d;
      },
      py::arg("points"));
  m.def(
      "_classify_scenario_json",
      [](const ZenoScenario& s, double t, const std::vector<std::size_t>& n_grid,
         const std::vector<double>& lambda_grid) {
        return report_to_json(classify_scenario(s, diagnostics_config(n_grid, lambda_grid, 1e-11), t)).dump();
      },
      py::arg("scenario"), py::arg("t"), py::arg("n_grid"), py::arg("lambda_grid"));
  m.def(
      "_classify_measure_json",
      [](const SpectralMeasure1D& mu, const std::string& label, double t, const std::vector<std::size_t>& n_grid,
         const std::vector<double>& lambda_grid, double tol) {
        return report_to_json(classify_scenario(MeasureScenario{label, mu}, diagnostics_config(n_grid, lambda_grid, tol), t))
            .dump();
      },
      py::arg("measure"), py::arg("label"), py::arg("t"), py::arg("n_grid"), py::arg("lambda_grid"), py::arg("tol"));
  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out;
        std::ostringstream err;
        int code = 0;
        {
          py::gil_scoped_release release;
          code = zeno::run_cli(args, out, err);
        }
        return std::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the zenolab command line; returns (exit code, stdout, stderr).");
  m.def("builtin_measure_names", &builtin_measure_names);
  m.def("builtin_scenario_names", &builtin_scenario_names);
}
