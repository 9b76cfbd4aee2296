"""
Command orchestration.

Each runner turns a loaded configuration into a structured result
dictionary: the frames and fields to write, a validation summary and the
scalars shown in the summary table. Nothing here writes files or decides
exit codes.

Independent jobs (mode fields, propagation times, OPA pairs and width
times) are fanned out over a thread pool. `Executor.map` returns results
in submission order, so the worker count never changes the output.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Dict, Iterable, List
import logging
import math

import numpy as np
import pandas as pd

from .. import __version__
from ..data.config_loader import ConfigLoader, config_hash, load_spectrum_csv
from ..data.defaults import DEFAULT_BASIS
from ..errors import XWaveError
from ..evaluation.accuracy_validator import validate_run
from ..models.basis import XWaveSpectrum
from .opa import (
    check_small_momenta,
    fit_width_exponent,
    joint_amplitude,
    phase_decomposition_residual,
    probability_map,
    schmidt_decompose,
    schmidt_decompose_modes,
    separable_test_amplitude,
    velocity_locking_width,
)
from .propagate import compare_methods
from .xwave import basis_spectra, eval_field, orthonormality_matrix, project_coefficients, xwave_transform

logger = logging.getLogger("xwave_quant.tools.experiments")

REPORT_COLUMNS = ["t", "l2_discrepancy", "energy_drift_direct", "energy_drift_xwave"]


def _ordered_map(function: Callable, items: Iterable, threads: int) -> List:
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [function(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(function, items))


def _symmetric_grid(half_width: float, points: int) -> np.ndarray:
    return np.linspace(-half_width, half_width, points)


def run_basis(loader: ConfigLoader, threads: int = 1) -> Dict[str, Any]:
    """Basis spectra samples, orthonormality matrix and mode fields."""
    section = loader.config.basis
    params = loader.medium()
    cfg = loader.basis(params)
    logger.info("Running basis: delta=%s, p_max=%d", cfg.delta, cfg.p_max)

    alpha_max = section.alpha_sample_max or DEFAULT_BASIS["alpha_sample_span"] / cfg.delta
    alpha = np.linspace(0.0, alpha_max, section.alpha_samples)
    table = basis_spectra(params, cfg.delta, cfg.p_max, alpha)
    spectra = pd.DataFrame({
        "p": np.repeat(cfg.orders, alpha.size),
        "alpha": np.tile(alpha, cfg.p_max + 1),
        "f": table.ravel(),
    })

    overlaps_matrix = orthonormality_matrix(cfg, params)
    p_index, q_index = np.meshgrid(cfg.orders, cfg.orders, indexing="ij")
    overlaps = pd.DataFrame({
        "p": p_index.ravel(),
        "q": q_index.ravel(),
        "overlap": overlaps_matrix.ravel(),
    })

    window = DEFAULT_BASIS["field_window"] * cfg.delta
    r_grid = np.linspace(0.0, section.r_max or window / params.transverse_scale, section.r_points)
    zeta_grid = _symmetric_grid(section.zeta_max or window, section.zeta_points)
    orders = section.field_orders if section.field_orders is not None else list(range(cfg.p_max + 1))
    jobs = [(p, v) for p in orders for v in section.field_velocities]

    def mode_field(job):
        p, v = job
        spec = XWaveSpectrum(p=p, params=params, delta=cfg.delta)
        return eval_field(spec, v, r_grid, zeta_grid, rule=cfg.alpha_rule, tolerance=cfg.convergence_tolerance)

    values = _ordered_map(mode_field, jobs, threads)
    fields = [
        {"p": p, "v": v, "r_grid": r_grid, "zeta_grid": zeta_grid, "values": grid}
        for (p, v), grid in zip(jobs, values)
    ]

    validation = validate_run(loader.config.tolerances, params=params, orthonormality=overlaps_matrix)
    norm = params.k / (4.0 * math.pi**2 * params.omega1)
    return {
        "command": "basis",
        "params": params,
        "basis": cfg,
        "spectra": spectra,
        "overlaps": overlaps,
        "fields": fields,
        "validation": validation,
        "summary": {
            "delta": cfg.delta,
            "p_max": cfg.p_max,
            "alpha_nodes": cfg.alpha_rule.size,
            "orthonormality_error": float(np.max(np.abs(overlaps_matrix - norm * np.eye(cfg.p_max + 1)))) / norm,
            "mode_fields": len(fields),
        },
    }


def run_propagate(loader: ConfigLoader, threads: int = 1) -> Dict[str, Any]:
    """
    Propagate the input spectrum with both methods at every requested time.

    A numerical failure while comparing the two paths is returned under
    "error" with an empty report. Earlier failures reach the caller.
    """
    section = loader.config.propagate
    tolerances = loader.config.tolerances
    spectrum = load_spectrum_csv(loader.spectrum_path(), interpolation=section.interpolation)
    params = loader.medium()
    cfg = loader.basis(params)
    r_grid = np.linspace(0.0, section.r_max, section.r_points)
    zeta_grid = _symmetric_grid(section.zeta_max, section.zeta_points)
    logger.info("Running propagate: times=%s, grid=(%d, %d)", section.times, r_grid.size, zeta_grid.size)

    coefficients = project_coefficients(xwave_transform(spectrum, params), cfg, params)

    def compare_at(t):
        return compare_methods(
            spectrum, cfg, params, [t], r_grid, zeta_grid,
            kperp_nodes=section.kperp_nodes, kz_nodes=section.kz_nodes,
            aliasing_tolerance=tolerances.aliasing, coefficients=coefficients,
        )[0]

    error = None
    try:
        rows = _ordered_map(compare_at, section.times, threads)
    except XWaveError as exc:
        logger.error("Propagation failed: %s", exc)
        rows, error = [], exc
    validation = validate_run(tolerances, params=params, comparison=rows, coefficients=coefficients)
    report = pd.DataFrame([{key: row[key] for key in REPORT_COLUMNS} for row in rows], columns=REPORT_COLUMNS)
    return {
        "command": "propagate",
        "params": params,
        "basis": cfg,
        "comparison": rows,
        "report": report,
        "validation": validation,
        "error": error,
        "summary": {
            "times": len(rows),
            "residual": coefficients.residual,
            "max_l2_discrepancy": float(max(report["l2_discrepancy"], default=math.nan)),
            "max_energy_drift": float(max(
                report[["energy_drift_direct", "energy_drift_xwave"]].to_numpy().ravel(), default=math.nan
            )),
        },
    }


def run_opa(
    loader: ConfigLoader, threads: int = 1, separable_test: bool = False, combined_modes: bool = False
) -> Dict[str, Any]:
    """
    Pair probability maps, locking widths over time and the Schmidt spectrum.

    Widths and the Schmidt decomposition use the first configured (p, q)
    pair. With combined_modes the decomposition runs over all orders up to
    p_max at once. With separable_test it runs on a synthetic product
    amplitude instead, whose entropy must vanish.
    """
    section = loader.config.opa
    cfg = loader.opa()
    times = loader.width_times(cfg)
    logger.info("Running opa: pairs=%s, t=%s, grid=%d", section.pairs, cfg.t, cfg.uv_grid.points)

    ratio = check_small_momenta(cfg)
    u_grid, v_grid = np.meshgrid(cfg.uv_grid.values, cfg.uv_grid.values, indexing="ij")

    def pair_map(pair):
        p, q = pair
        return probability_map(p, q, cfg)

    maps = [
        {"p": p, "q": q, "frame": pd.DataFrame({"u": u_grid.ravel(), "v": v_grid.ravel(), "prob": grid.ravel()})}
        for (p, q), grid in zip(section.pairs, _ordered_map(pair_map, section.pairs, threads))
    ]

    p, q = section.pairs[0]
    widths = _ordered_map(lambda t: velocity_locking_width(p, q, t, cfg), times, threads)
    fit = fit_width_exponent(times, widths)

    if separable_test:
        schmidt_source = "separable"
        schmidt = schmidt_decompose(separable_test_amplitude(cfg))
    elif combined_modes:
        schmidt_source = "combined"
        schmidt = schmidt_decompose_modes(cfg)
    else:
        schmidt_source = f"p={p},q={q}"
        schmidt = schmidt_decompose(joint_amplitude(p, q, cfg, normalize=True))
    phase_residual = float(np.max(np.abs(phase_decomposition_residual(u_grid, v_grid, cfg))))

    validation = validate_run(loader.config.tolerances, regime_ratio=ratio)
    return {
        "command": "opa",
        "config": cfg,
        "maps": maps,
        "widths": pd.DataFrame({"t": times, "width": widths}),
        "schmidt": pd.DataFrame({"i": np.arange(schmidt.singular_values.size), "lambda": schmidt.singular_values}),
        "validation": validation,
        "summary": {
            "entropy_nats": schmidt.entropy,
            "schmidt_number": schmidt.schmidt_number,
            "width_exponent": fit.exponent,
            "width_exponent_stderr": fit.stderr,
            "config_hash": config_hash(loader.config),
            "version": __version__,
        },
        "diagnostics": {
            "rho": cfg.rho,
            "t": cfg.t,
            "small_momenta_ratio": ratio,
            "phase_residual": phase_residual,
            "schmidt_source": schmidt_source,
        },
    }
