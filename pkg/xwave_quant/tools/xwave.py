"""
X-wave basis: Laguerre spectra, mode fields, projection and energies.

Spectra are indexed by the transverse variable alpha (k_perp = b * alpha with
b = sqrt(omega2 k / omega1)) and the mode velocity v. A classical field is
represented by its X-wave spectrum X(alpha, v) or equivalently by the
coefficients C_p(v) of its Laguerre expansion.

Array conventions used throughout:
- spectrum maps take (alpha, v) 1-D arrays and return shape (len(v), len(alpha));
- basis tables have shape (p_max + 1, len(alpha));
- fields have shape (len(r), len(zeta)).
"""

import logging
import math
import warnings
from typing import Callable, Optional, Tuple

import numpy as np
from scipy import special
from scipy.integrate import simpson, trapezoid

from ..errors import AccuracyError, DomainError, NumericError, TruncationWarning
from ..models.basis import BasisConfig, QuadratureRule, VelocityGrid, XWaveSpectrum
from ..models.field import FieldEnvelope, Spectrum, VelocityCoefficients
from ..models.medium import MediumParams
from .specfun import (
    gauss_laguerre,
    gauss_legendre,
    laguerre_table,
    laplace_hankel_j0,
    refine_rule,
    trapezoid_weights,
)

logger = logging.getLogger("xwave_quant.tools.xwave")

SpectrumMap = Callable[[np.ndarray, np.ndarray], np.ndarray]

# f_p is below double precision beyond alpha delta = 3 p + FIELD_ALPHA_MARGIN
FIELD_ALPHA_MARGIN = 45.0
MAX_FIELD_REFINEMENTS = 6


def default_alpha_rule(delta: float, nodes: int = 128) -> QuadratureRule:
    return gauss_laguerre(nodes, delta)


def build_basis_config(
    delta: float,
    p_max: int = 24,
    v_max: float = 1.0,
    v_points: int = 257,
    alpha_rule: Optional[QuadratureRule] = None,
    projection_nodes: int = 128,
    residual_tolerance: float = 1e-6,
    convergence_tolerance: float = 1e-8,
) -> BasisConfig:
    """BasisConfig with a Gauss-Laguerre alpha rule matched to delta unless given."""
    return BasisConfig(
        delta=delta,
        p_max=p_max,
        alpha_rule=alpha_rule if alpha_rule is not None else default_alpha_rule(delta),
        v_grid=VelocityGrid(v_max=v_max, points=v_points),
        projection_nodes=projection_nodes,
        residual_tolerance=residual_tolerance,
        convergence_tolerance=convergence_tolerance,
    )


def spectrum_normalization(params: MediumParams, p: int) -> float:
    return math.sqrt(params.k / (math.pi**2 * params.omega1 * (p + 1)))


def spectral_norm(params: MediumParams) -> float:
    """Diagonal of the orthonormality relation, k / (4 pi^2 omega1)."""
    return params.k / (4.0 * math.pi**2 * params.omega1)


def basis_spectra(params: MediumParams, delta: float, p_max: int, alpha) -> np.ndarray:
    """Table of f_0 .. f_pmax at alpha, shape (p_max + 1,) + shape(alpha)."""
    alpha = np.asarray(alpha, dtype=float)
    if np.any(alpha < 0):
        raise DomainError("spectra are defined for alpha >= 0 only")
    x = alpha * delta
    table = laguerre_table(p_max, 1, 2.0 * x)
    orders = np.arange(p_max + 1).reshape((-1,) + (1,) * alpha.ndim)
    norms = np.sqrt(params.k / (math.pi**2 * params.omega1 * (orders + 1)))
    return norms * x * table * np.exp(-x)


def eval_spectrum(spec: XWaveSpectrum, alpha):
    """f_p(alpha) for a single order."""
    alpha = np.asarray(alpha, dtype=float)
    if np.any(alpha < 0):
        raise DomainError("spectra are defined for alpha >= 0 only")
    x = alpha * spec.delta
    value = spectrum_normalization(spec.params, spec.p) * x * laguerre_table(spec.p, 1, 2.0 * x)[spec.p] * np.exp(-x)
    return float(value) if value.ndim == 0 else value


def _projection_rule(cfg: BasisConfig) -> QuadratureRule:
    # Products of two basis spectra decay like exp(-2 delta alpha)
    return gauss_laguerre(cfg.projection_nodes, 2.0 * cfg.delta)


def _check_order_in_basis(p: int, cfg: BasisConfig) -> None:
    if not 0 <= p <= cfg.p_max:
        raise DomainError(f"order {p} outside 0..p_max={cfg.p_max}")


def _overlap(p: int, q: int, cfg: BasisConfig, params: MediumParams, rule: QuadratureRule) -> float:
    table = basis_spectra(params, cfg.delta, max(p, q), rule.nodes)
    terms = rule.weights * table[p] * table[q] / rule.nodes
    return math.fsum(terms)


def orthonormality_integral(p: int, q: int, cfg: BasisConfig, params: MediumParams) -> float:
    """Integral of f_p f_q / alpha over [0, inf); k/(4 pi^2 omega1) when p == q, else 0."""
    _check_order_in_basis(p, cfg)
    _check_order_in_basis(q, cfg)
    rule = _projection_rule(cfg)
    coarse = _overlap(p, q, cfg, params, rule)
    fine = _overlap(p, q, cfg, params, refine_rule(rule))
    change = abs(fine - coarse) / spectral_norm(params)
    if change > cfg.convergence_tolerance:
        raise AccuracyError(f"orthonormality integral ({p}, {q}) not converged", relative_change=change)
    return fine


def orthonormality_matrix(cfg: BasisConfig, params: MediumParams) -> np.ndarray:
    """All overlaps for 0 <= p, q <= p_max in one pass."""
    rule = _projection_rule(cfg)
    table = basis_spectra(params, cfg.delta, cfg.p_max, rule.nodes)
    return (table * (rule.weights / rule.nodes)) @ table.T


def synthesize_field(
    rule: QuadratureRule,
    spectrum_values: np.ndarray,
    v: np.ndarray,
    v_weights: np.ndarray,
    r_grid: np.ndarray,
    zeta_grid: np.ndarray,
    t: float,
    params: MediumParams,
) -> np.ndarray:
    """
    Sum X-wave modes into a field on an (r, zeta) grid.

    A(r, Z) = sum_v w_v exp(-i v^2 t / (2 omega2))
              * int dalpha X(alpha, v) J0(b alpha r) exp(i (alpha - v/omega2)(Z - v t))

    spectrum_values holds X at (v, rule.nodes) with shape (len(v), len(nodes)).
    The double sum is factorized into two matrix products.
    """
    alpha, alpha_weights = rule.nodes, rule.weights
    v = np.asarray(v, dtype=float)
    zeta_grid = np.asarray(zeta_grid, dtype=float)
    r_grid = np.asarray(r_grid, dtype=float)

    chirp = np.asarray(v_weights) * np.exp(1j * v * v * t / (2.0 * params.omega2))
    modes = spectrum_values * chirp[:, None]
    if t != 0.0:
        modes = modes * np.exp(-1j * t * np.outer(v, alpha))
    carrier = np.exp(-1j * np.outer(zeta_grid, v) / params.omega2)
    longitudinal = (carrier @ modes).T * np.exp(1j * np.outer(alpha, zeta_grid))
    bessel = special.j0(params.transverse_scale * np.outer(r_grid, alpha))
    field = bessel @ (alpha_weights[:, None] * longitudinal)
    if not np.all(np.isfinite(field)):
        raise NumericError("field synthesis produced non-finite values")
    return field


def check_convergence(
    coarse: np.ndarray, fine: np.ndarray, tolerance: float, what: str, scale: Optional[float] = None
) -> float:
    """
    Raise AccuracyError when two quadrature levels disagree beyond tolerance.

    The change is measured against scale, or against max |fine| when no
    scale is given.
    """
    if scale is None:
        scale = float(np.max(np.abs(fine))) if np.size(fine) else 0.0
    change = float(np.max(np.abs(fine - coarse))) if np.size(fine) else 0.0
    if scale > 0:
        change /= scale
    if change > tolerance:
        raise AccuracyError(f"{what} not converged: relative change {change:.3e}", relative_change=change)
    return change


def field_alpha_rule(spec: XWaveSpectrum, r_max: float, zeta_max: float) -> QuadratureRule:
    """
    Gauss-Legendre rule for the mode-field integral over the window r <= r_max, |zeta'| <= zeta_max.

    The interval ends where f_p has decayed below double precision; the
    node count follows the Laguerre oscillations and the number of
    periods of J0(b alpha r) exp(i alpha zeta') across the interval.
    """
    upper = (3.0 * spec.p + FIELD_ALPHA_MARGIN) / spec.delta
    frequency = spec.params.transverse_scale * r_max + zeta_max
    nodes = 64 + 4 * (spec.p + 1) + math.ceil(1.5 * upper * frequency)
    return gauss_legendre(nodes, 0.0, upper)


def eval_field(
    spec: XWaveSpectrum,
    v: float,
    r,
    zeta_shifted,
    rule: Optional[QuadratureRule] = None,
    tolerance: float = 1e-8,
):
    """
    Mode field psi_p^v(r, zeta') where zeta' = Z - v t.

    Scalars give a complex scalar; 1-D arrays give a grid of shape
    (len(r), len(zeta_shifted)). Without a rule, one sized for the
    requested window is used. The rule is refined until two levels agree
    to tolerance relative to int |f_p| dalpha, the largest value
    |psi_p^v| can take.
    """
    r_arr = np.atleast_1d(np.asarray(r, dtype=float))
    zeta_arr = np.atleast_1d(np.asarray(zeta_shifted, dtype=float))
    if np.any(r_arr < 0):
        raise DomainError("radial coordinate must be non-negative")
    if not (np.all(np.isfinite(r_arr)) and np.all(np.isfinite(zeta_arr)) and math.isfinite(v)):
        raise DomainError("field coordinates must be finite")

    if rule is None:
        r_max = float(r_arr.max()) if r_arr.size else 0.0
        zeta_max = float(np.abs(zeta_arr).max()) if zeta_arr.size else 0.0
        rule = field_alpha_rule(spec, r_max, zeta_max)

    def synthesize(active: QuadratureRule) -> Tuple[np.ndarray, float]:
        spectrum_values = eval_spectrum(spec, active.nodes)
        scale = float(np.sum(active.weights * np.abs(spectrum_values)))
        field = synthesize_field(
            active, spectrum_values[None, :], np.array([v]), np.ones(1), r_arr, zeta_arr, 0.0, spec.params
        )
        return field, scale

    coarse, _ = synthesize(rule)
    for level in range(MAX_FIELD_REFINEMENTS):
        rule = refine_rule(rule)
        fine, scale = synthesize(rule)
        try:
            check_convergence(coarse, fine, tolerance, f"mode field p={spec.p}", scale=scale)
        except AccuracyError:
            if level == MAX_FIELD_REFINEMENTS - 1:
                raise
            logger.debug("Mode field p=%d not converged with %d alpha nodes", spec.p, rule.size)
            coarse = fine
        else:
            break
    if np.ndim(r) == 0 and np.ndim(zeta_shifted) == 0:
        return complex(fine[0, 0])
    return fine


def fundamental_field_closed_form(params: MediumParams, delta: float, v: float, r, zeta_shifted):
    """Closed form of psi_0^v, grid shape (len(r), len(zeta_shifted)) for arrays."""
    r_arr = np.atleast_1d(np.asarray(r, dtype=float))
    zeta_arr = np.atleast_1d(np.asarray(zeta_shifted, dtype=float))
    s = delta - 1j * zeta_arr[None, :]
    b = params.transverse_scale * r_arr[:, None]
    carrier = np.exp(-1j * v * zeta_arr / params.omega2)[None, :]
    value = spectrum_normalization(params, 0) * delta * carrier * laplace_hankel_j0(s, b)
    if np.ndim(r) == 0 and np.ndim(zeta_shifted) == 0:
        return complex(value[0, 0])
    return value


class XWaveTransform:
    """
    X-wave spectrum of a (k_perp, k_z) spectrum.

    X(alpha, v) = (k alpha / omega1) S(b alpha, alpha - v / omega2).
    """

    def __init__(self, spectrum: Spectrum, params: MediumParams):
        self.spectrum = spectrum
        self.params = params

    def evaluate(self, alpha, v) -> Tuple[np.ndarray, np.ndarray]:
        """Values of shape (len(v), len(alpha)) and the in-support mask."""
        alpha = np.atleast_1d(np.asarray(alpha, dtype=float))
        v = np.atleast_1d(np.asarray(v, dtype=float))
        if np.any(alpha < 0):
            raise DomainError("X-wave spectra are defined for alpha >= 0 only")
        alpha_mesh, v_mesh = np.meshgrid(alpha, v)
        kperp = self.params.transverse_scale * alpha_mesh
        kz = alpha_mesh - v_mesh / self.params.omega2
        values, inside = self.spectrum.evaluate(kperp, kz)
        return (self.params.k / self.params.omega1) * alpha_mesh * values, inside

    def __call__(self, alpha, v) -> np.ndarray:
        values, inside = self.evaluate(alpha, v)
        outside = int(inside.size - np.count_nonzero(inside))
        if outside:
            logger.debug("X-wave transform: %d of %d points outside spectrum support", outside, inside.size)
        return values


def xwave_transform(spectrum: Spectrum, params: MediumParams) -> XWaveTransform:
    return XWaveTransform(spectrum, params)


def project_coefficients(field_spectrum: SpectrumMap, cfg: BasisConfig, params: MediumParams) -> VelocityCoefficients:
    """
    Laguerre coefficients C_p(v) of an X-wave spectrum on the basis velocity grid.

    C_p(v) = (4 pi^2 omega1 / k) int X(alpha, v) f_p(alpha) dalpha / alpha

    Warns with TruncationWarning when the L2 residual of the truncated
    expansion exceeds the configured tolerance.
    """
    logger.info(
        "Tool project_coefficients called with delta=%s, p_max=%d, v_points=%d",
        cfg.delta, cfg.p_max, cfg.v_grid.points,
    )
    rule = _projection_rule(cfg)
    v = cfg.v_grid.values
    samples = np.asarray(field_spectrum(rule.nodes, v), dtype=complex)
    if samples.shape != (v.size, rule.size):
        raise DomainError(f"spectrum map returned shape {samples.shape}, expected {(v.size, rule.size)}")
    bad = np.argwhere(~np.isfinite(samples))
    if bad.size:
        raise NumericError("spectrum is not finite at a projection node", node_index=int(bad[0][1]))

    table = basis_spectra(params, cfg.delta, cfg.p_max, rule.nodes)
    measure = rule.weights / rule.nodes
    coeffs = (1.0 / spectral_norm(params)) * ((samples * measure) @ table.T).T

    remainder = samples - coeffs.T @ table
    v_weights = cfg.v_grid.weights
    total = float(v_weights @ (np.abs(samples) ** 2 @ measure))
    lost = float(v_weights @ (np.abs(remainder) ** 2 @ measure))
    residual = math.sqrt(lost / total) if total > 0 else 0.0
    if residual > cfg.residual_tolerance:
        message = f"basis truncation at p_max={cfg.p_max} leaves relative residual {residual:.3e}"
        logger.warning(message)
        warnings.warn(TruncationWarning(message, residual))

    logger.info("Tool project_coefficients result: residual=%.3e", residual)
    return VelocityCoefficients(v_grid=v, coeffs=coeffs, residual=residual)


def reconstruct_spectrum(coefficients: VelocityCoefficients, cfg: BasisConfig, params: MediumParams) -> SpectrumMap:
    """Spectrum map sum_p C_p(v) f_p(alpha), linear in v between grid points."""

    def spectrum_map(alpha, v) -> np.ndarray:
        alpha = np.atleast_1d(np.asarray(alpha, dtype=float))
        v = np.atleast_1d(np.asarray(v, dtype=float))
        grid = coefficients.v_grid
        coeffs = np.array([
            np.interp(v, grid, row.real, left=0.0, right=0.0)
            + 1j * np.interp(v, grid, row.imag, left=0.0, right=0.0)
            for row in coefficients.coeffs
        ])
        table = basis_spectra(params, cfg.delta, coefficients.p_max, alpha)
        return coeffs.T @ table

    return spectrum_map


def energy(field: FieldEnvelope) -> float:
    """2 pi times the integral of r |A|^2 over the sampled window."""
    density = field.r_grid[:, None] * np.abs(field.values) ** 2
    longitudinal = simpson(density, x=field.zeta_grid, axis=1)
    return float(2.0 * math.pi * simpson(longitudinal, x=field.r_grid))


def energy_of_coefficients(coefficients: VelocityCoefficients) -> float:
    """Sum over p of the velocity integral of |C_p(v)|^2."""
    density = np.sum(np.abs(coefficients.coeffs) ** 2, axis=0)
    return float(trapezoid(density, x=coefficients.v_grid))


def field_spectrum(field: FieldEnvelope, kperp_grid, kz_grid) -> Spectrum:
    """
    Fourier-Bessel transform of a sampled field.

    S(k_perp, k_z) = (1/2 pi) int dZ exp(-i k_z Z) int r dr J0(k_perp r) A(r, Z)
    """
    kperp_grid = np.asarray(kperp_grid, dtype=float)
    kz_grid = np.asarray(kz_grid, dtype=float)
    radial = field.r_grid * trapezoid_weights(field.r_grid)
    longitudinal = trapezoid_weights(field.zeta_grid)
    bessel = special.j0(np.outer(kperp_grid, field.r_grid))
    fourier = np.exp(-1j * np.outer(field.zeta_grid, kz_grid))
    values = (bessel * radial) @ (field.values * longitudinal) @ fourier / (2.0 * math.pi)
    return Spectrum(kperp_grid=kperp_grid, kz_grid=kz_grid, values=values)


def spectrum_energy(spectrum: Spectrum) -> float:
    """4 pi^2 times the integral of k_perp |S|^2 over the spectrum grid."""
    density = spectrum.kperp_grid[:, None] * np.abs(spectrum.values) ** 2
    return float(4.0 * math.pi**2 * trapezoid(trapezoid(density, x=spectrum.kz_grid, axis=1), x=spectrum.kperp_grid))


def choose_delta(spectrum: Spectrum, params: MediumParams) -> float:
    """Spectral scale 1/<alpha> under the energy density of the spectrum."""
    density = spectrum.kperp_grid[:, None] * np.abs(spectrum.values) ** 2
    weights = np.outer(trapezoid_weights(spectrum.kperp_grid), trapezoid_weights(spectrum.kz_grid)) * density
    total = float(np.sum(weights))
    if total <= 0:
        raise DomainError("cannot choose delta for a spectrum with zero energy")
    alpha = spectrum.kperp_grid / params.transverse_scale
    mean_alpha = float(np.sum(weights.sum(axis=1) * alpha)) / total
    if mean_alpha <= 0:
        raise DomainError("spectrum has no transverse content")
    return 1.0 / mean_alpha
