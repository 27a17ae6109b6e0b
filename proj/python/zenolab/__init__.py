"""Quantum Zeno product formulas and spectral-measure diagnostics."""

import json

from ._core import (
    DegenerateFit,
    InvalidArgument,
    Measure,
    PrecisionLoss,
    QuadratureBudgetExceeded,
    Scenario,
    ZenoError,
    amplitude_derivative_parts,
    builtin_measure_names,
    builtin_scenario_names,
    falloff_diagnostic,
    fit_rate,
    qze_product,
    qzd_errors,
    run_cli,
    survival_amplitude,
    tail_mass,
    tauberian_check,
    telescoping_residual,
    truncated_abs_moment,
    truncated_moment,
    zeno_hamiltonian,
    zeno_phase,
    zeno_probability,
    zeno_product,
)
from . import _core

__all__ = [
    "DegenerateFit",
    "InvalidArgument",
    "Measure",
    "PrecisionLoss",
    "QuadratureBudgetExceeded",
    "Scenario",
    "ZenoError",
    "amplitude_derivative_parts",
    "builtin_measure_names",
    "builtin_scenario_names",
    "classify",
    "falloff_diagnostic",
    "fit_rate",
    "geometric_grid",
    "qze_product",
    "qzd_errors",
    "run_cli",
    "survival_amplitude",
    "tail_mass",
    "tauberian_check",
    "telescoping_residual",
    "truncated_abs_moment",
    "truncated_moment",
    "zeno_hamiltonian",
    "zeno_phase",
    "zeno_probability",
    "zeno_product",
]


def geometric_grid(first_exponent, last_exponent):
    """Powers of two 2**first_exponent .. 2**last_exponent."""
    return [2**k for k in range(first_exponent, last_exponent + 1)]


def classify(target, t=1.0, n_grid=None, lambda_grid=None, tol=1e-11, label=None):
    """Convergence report for a Scenario or a Measure, as a dict."""
    n_grid = list(n_grid) if n_grid is not None else geometric_grid(6, 20)
    lambda_grid = [float(x) for x in lambda_grid] if lambda_grid is not None else [
        float(x) for x in geometric_grid(4, 40)
    ]
    if isinstance(target, Scenario):
        text = _core._classify_scenario_json(target, t, n_grid, lambda_grid)
    elif isinstance(target, Measure):
        text = _core._classify_measure_json(target, label or target.kind, t, n_grid, lambda_grid, tol)
    else:
        raise TypeError("classify expects a Scenario or a Measure")
    return json.loads(text)
