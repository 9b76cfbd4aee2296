"""
X-wave optical parametric amplifier at first order in the coupling.

A constant classical pump couples X-wave modes of two fields. The first
order state is a continuous superposition of pairs with velocities u
(field 2) and v (field 1) weighted by the joint amplitude Phi_pq(u, v; t).
For long interactions the pair distribution collapses onto the locking
line v = rho u.

Grid convention: arrays on the (u, v) grid have u along axis 0.
"""

import logging
import math
import warnings
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg, special, stats
from scipy.integrate import simpson

from ..errors import DegenerateStateError, DomainError, RegimeWarning
from ..models.opa import JointAmplitude, OpaConfig, PhaseConvention, SchmidtResult, WidthFit
from .xwave import basis_spectra

logger = logging.getLogger("xwave_quant.tools.opa")

# Interquartile range of a unit normal; converts an IQR into a sigma-like width
NORMAL_IQR = 1.3489795003921634


def _check_orders(p: int, q: int, cfg: OpaConfig) -> None:
    if not 0 <= p <= cfg.basis1.p_max:
        raise DomainError(f"order p={p} outside 0..{cfg.basis1.p_max}")
    if not 0 <= q <= cfg.basis2.p_max:
        raise DomainError(f"order q={q} outside 0..{cfg.basis2.p_max}")


def _check_time(t: float) -> None:
    if not (math.isfinite(t) and t >= 0):
        raise DomainError(f"interaction time must be finite and non-negative, got {t}")


def coupling_kernel(p: int, q: int, nu, cfg: OpaConfig):
    """
    chi_pq(nu) = (4 pi^2 chi / nu) sqrt(omega1_1 omega1_2 / (k1 k2))
                 f_p,1(nu / ((1 + rho) omega2)) f_q,2(rho nu / ((1 + rho) omega2)) theta(nu)

    Extended by continuity to 0 at nu = 0.
    """
    _check_orders(p, q, cfg)
    nu = np.asarray(nu, dtype=float)
    rho = cfg.rho
    positive = nu > 0
    safe = np.where(positive, nu, 1.0)
    scale = (1.0 + rho) * cfg.omega2
    f1 = basis_spectra(cfg.field1, cfg.basis1.delta, p, safe / scale)[p]
    f2 = basis_spectra(cfg.field2, cfg.basis2.delta, q, rho * safe / scale)[q]
    prefactor = 4.0 * math.pi**2 * cfg.chi * math.sqrt(
        cfg.field1.omega1 * cfg.field2.omega1 / (cfg.field1.k * cfg.field2.k)
    )
    value = np.where(positive, prefactor * f1 * f2 / safe, 0.0)
    return float(value) if value.ndim == 0 else value


def _mismatch_product(u, v, cfg: OpaConfig):
    return (u - v + cfg.group_velocity_mismatch) * (v - cfg.rho * u)


def interaction_phase(u, v, cfg: OpaConfig):
    """F(u, v) = (u^2 + v^2) / (2 omega2) + (u - v + dw)(v - rho u) / omega2."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return (u * u + v * v) / (2.0 * cfg.omega2) + _mismatch_product(u, v, cfg) / cfg.omega2


def phase_functions(u, v, cfg: OpaConfig) -> Tuple:
    """
    Phase K(u, v) and detuning g(u, v) of the first-order amplitude.

    With AS_WRITTEN:
        K = (u - v + dw)(v - rho u) / (2 (1 + rho) omega2)
        g = (u^2 + v^2) / omega2 + (u - v + dw)(v - rho u) / ((1 + rho) omega2)
    With FROM_INTERACTION, g = F and K = F / 2.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if cfg.phase_convention == PhaseConvention.FROM_INTERACTION:
        detuning = interaction_phase(u, v, cfg)
        return 0.5 * detuning, detuning
    product = _mismatch_product(u, v, cfg)
    denominator = (1.0 + cfg.rho) * cfg.omega2
    phase = product / (2.0 * denominator)
    detuning = (u * u + v * v) / cfg.omega2 + product / denominator
    return phase, detuning


def phase_decomposition_residual(u, v, cfg: OpaConfig):
    """F - g, zero under FROM_INTERACTION."""
    _, detuning = phase_functions(u, v, cfg)
    return interaction_phase(u, v, cfg) - detuning


def sinc_factor(g, t: float):
    """G = 2 sin(g t / 2) / g, equal to t at g = 0; |G| <= t."""
    _check_time(t)
    g = np.asarray(g, dtype=float)
    value = t * np.sinc(g * t / (2.0 * math.pi))
    return float(value) if value.ndim == 0 else value


def _omega(velocity, cfg: OpaConfig):
    return velocity * velocity / (2.0 * cfg.omega2)


def transition_probability(p: int, q: int, u, v, t: float, cfg: OpaConfig):
    """P_pq = omega_p(v) omega_q(u) |chi_pq(u + v)|^2 G(g, t)^2."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    _, detuning = phase_functions(u, v, cfg)
    value = _omega(v, cfg) * _omega(u, cfg) * np.abs(coupling_kernel(p, q, u + v, cfg)) ** 2 * sinc_factor(detuning, t) ** 2
    return float(value) if np.ndim(value) == 0 else value


def _uv_mesh(cfg: OpaConfig) -> Tuple[np.ndarray, np.ndarray]:
    grid = cfg.uv_grid.values
    return np.meshgrid(grid, grid, indexing="ij")


def _normalize(values: np.ndarray, cfg: OpaConfig) -> np.ndarray:
    weights = cfg.uv_grid.weights
    norm = float(np.sum(np.outer(weights, weights) * np.abs(values) ** 2))
    if norm <= 0 or not math.isfinite(norm):
        raise DegenerateStateError("joint amplitude vanishes on the whole grid")
    return values / math.sqrt(norm)


def joint_amplitude(
    p: int, q: int, cfg: OpaConfig, t: Optional[float] = None, normalize: bool = False
) -> JointAmplitude:
    """
    Phi_pq(u, v; t) = exp(i K t) chi_pq(u + v) G(u, v, t) sqrt(omega_p(v) omega_q(u)).

    The frequency factors pair v with p and u with q, as in the interaction
    Hamiltonian. Normalization is optional and fails on an all-zero amplitude.
    """
    t = cfg.t if t is None else t
    _check_time(t)
    logger.info("Tool joint_amplitude called with p=%d, q=%d, t=%s, grid=%d", p, q, t, cfg.uv_grid.points)
    u, v = _uv_mesh(cfg)
    phase, detuning = phase_functions(u, v, cfg)
    values = (
        np.exp(1j * phase * t)
        * coupling_kernel(p, q, u + v, cfg)
        * sinc_factor(detuning, t)
        * np.sqrt(_omega(v, cfg) * _omega(u, cfg))
    )
    if normalize:
        values = _normalize(values, cfg)
    return JointAmplitude(p=p, q=q, t=t, uv_grid=cfg.uv_grid, values=values, normalized=normalize)


def probability_map(p: int, q: int, cfg: OpaConfig, t: Optional[float] = None) -> np.ndarray:
    """P_pq(t, u, v) on the grid."""
    t = cfg.t if t is None else t
    u, v = _uv_mesh(cfg)
    return transition_probability(p, q, u, v, t, cfg)


def check_small_momenta(cfg: OpaConfig, velocities: Sequence[float] = ()) -> float:
    """
    Ratio of the largest velocity in use to the small-momenta band.

    Warns with RegimeWarning when the ratio exceeds one.
    """
    extent = max([cfg.uv_grid.v_max] + [abs(value) for value in velocities])
    ratio = extent / cfg.small_momenta_band
    if ratio > 1.0:
        message = (
            f"velocities up to {extent:.4g} exceed the small-momenta band "
            f"{cfg.small_momenta_band:.4g} (ratio {ratio:.3g})"
        )
        logger.warning(message)
        warnings.warn(RegimeWarning(message, ratio))
    return ratio


def asymptotic_locking_density(p: int, q: int, u: float, cfg: OpaConfig) -> float:
    """
    Coefficient of delta(v - rho u) in P_pq / t at long times:

        omega_p(rho u) omega_q(u) |chi_pq((1 + rho) u)|^2 2 pi (1 + rho) omega2 / |dw|
    """
    rho = cfg.rho
    check_small_momenta(cfg, [u, rho * u])
    chi = coupling_kernel(p, q, (1.0 + rho) * u, cfg)
    return float(
        _omega(rho * u, cfg) * _omega(u, cfg) * chi * chi
        * 2.0 * math.pi * (1.0 + rho) * cfg.omega2 / abs(cfg.group_velocity_mismatch)
    )


def marginal_rate(
    p: int,
    q: int,
    u: float,
    t: float,
    cfg: OpaConfig,
    v_range: Optional[Tuple[float, float]] = None,
    points: int = 20001,
) -> float:
    """Simpson integral of P_pq(t, u, v) over v, divided by t."""
    if not t > 0:
        raise DomainError(f"marginal rate needs t > 0, got {t}")
    low, high = v_range if v_range is not None else (-cfg.uv_grid.v_max, cfg.uv_grid.v_max)
    v = np.linspace(low, high, points)
    probability = transition_probability(p, q, np.full_like(v, u), v, t, cfg)
    return float(simpson(probability, x=v) / t)


def _weighted_quantiles(values: np.ndarray, weights: np.ndarray, levels: Sequence[float]) -> np.ndarray:
    order = np.argsort(values, kind="stable")
    sorted_values = values[order]
    sorted_weights = weights[order]
    cumulative = (np.cumsum(sorted_weights) - 0.5 * sorted_weights) / np.sum(sorted_weights)
    return np.interp(levels, cumulative, sorted_values)


def _locking_weights(p: int, q: int, t: float, cfg: OpaConfig) -> Tuple[np.ndarray, np.ndarray]:
    u, v = _uv_mesh(cfg)
    weights = cfg.uv_grid.weights
    mass = np.outer(weights, weights) * transition_probability(p, q, u, v, t, cfg)
    total = float(mass.sum())
    if total <= 0 or not math.isfinite(total):
        raise DegenerateStateError(f"pair distribution ({p}, {q}) vanishes at t={t}")
    return (v - cfg.rho * u).ravel(), mass.ravel() / total


def velocity_locking_width(p: int, q: int, t: float, cfg: OpaConfig, estimator: str = "iqr") -> float:
    """
    Spread of v - rho u under the normalized pair distribution |Phi_pq|^2.

    "iqr" gives the interquartile range divided by 1.349 (equal to sigma for
    a normal law); "std" gives the standard deviation, which the heavy sinc^2
    tails keep from scaling as 1/t on a bounded grid.
    """
    if not t > 0:
        raise DomainError(f"locking width needs t > 0, got {t}")
    offsets, mass = _locking_weights(p, q, t, cfg)
    if estimator == "std":
        mean = float(np.dot(mass, offsets))
        return math.sqrt(float(np.dot(mass, (offsets - mean) ** 2)))
    if estimator != "iqr":
        raise DomainError(f"unknown width estimator {estimator!r}")
    lower, upper = _weighted_quantiles(offsets, mass, [0.25, 0.75])
    return float(upper - lower) / NORMAL_IQR


def profile_interquartile_width(p: int, q: int, u: float, t: float, cfg: OpaConfig) -> float:
    """Interquartile range of the v-profile of P_pq(t, u, .) on the grid."""
    v = cfg.uv_grid.values
    mass = cfg.uv_grid.weights * transition_probability(p, q, np.full_like(v, u), v, t, cfg)
    if not mass.sum() > 0:
        raise DegenerateStateError(f"v-profile at u={u} vanishes")
    lower, upper = _weighted_quantiles(v, mass / mass.sum(), [0.25, 0.75])
    return float(upper - lower)


def locking_argmax(p: int, q: int, u: float, t: float, cfg: OpaConfig) -> float:
    """Grid velocity v maximizing P_pq(t, u, v)."""
    v = cfg.uv_grid.values
    probability = transition_probability(p, q, np.full_like(v, u), v, t, cfg)
    return float(v[int(np.argmax(probability))])


def _schmidt_from_matrix(matrix: np.ndarray) -> SchmidtResult:
    singular = linalg.svd(matrix, compute_uv=False)
    total = float(np.sum(singular**2))
    if total <= 0 or not math.isfinite(total):
        raise DegenerateStateError("kernel has numerical rank 0")
    singular_values = singular / math.sqrt(total)
    populations = singular_values**2
    entropy = max(0.0, -float(np.sum(special.xlogy(populations, populations))))
    schmidt_number = 1.0 / float(np.sum(populations**2))
    return SchmidtResult(singular_values=singular_values, entropy=entropy, schmidt_number=schmidt_number)


def schmidt_decompose(phi: JointAmplitude) -> SchmidtResult:
    """
    Schmidt coefficients of a normalized joint amplitude.

    The grid matrix is scaled by the square roots of the quadrature weights
    on both sides so that its singular values converge under refinement.
    """
    if not phi.normalized:
        raise DomainError("schmidt_decompose needs a normalized amplitude")
    root = np.sqrt(phi.uv_grid.weights)
    result = _schmidt_from_matrix(root[:, None] * phi.values * root[None, :])
    logger.info(
        "Tool schmidt_decompose result: entropy=%.6g, schmidt_number=%.6g",
        result.entropy, result.schmidt_number,
    )
    return result


def schmidt_decompose_modes(cfg: OpaConfig, t: Optional[float] = None) -> SchmidtResult:
    """
    Schmidt decomposition over (q, u) x (p, v) with all orders up to p_max.

    Rows run over (q, u) for field 2, columns over (p, v) for field 1.
    """
    root = np.sqrt(cfg.uv_grid.weights)
    n = cfg.uv_grid.points
    blocks = np.zeros(((cfg.basis2.p_max + 1) * n, (cfg.basis1.p_max + 1) * n), dtype=complex)
    for q in range(cfg.basis2.p_max + 1):
        for p in range(cfg.basis1.p_max + 1):
            phi = joint_amplitude(p, q, cfg, t=t).values
            blocks[q * n:(q + 1) * n, p * n:(p + 1) * n] = root[:, None] * phi * root[None, :]
    return _schmidt_from_matrix(blocks)


def separable_test_amplitude(cfg: OpaConfig) -> JointAmplitude:
    """Normalized product of two Gaussians on the OPA grid, for checking the Schmidt path."""
    grid = cfg.uv_grid.values
    width = 0.25 * cfg.uv_grid.v_max
    first = np.exp(-0.5 * ((grid - 0.2 * cfg.uv_grid.v_max) / width) ** 2)
    second = np.exp(-0.5 * ((grid + 0.1 * cfg.uv_grid.v_max) / width) ** 2)
    values = _normalize(np.outer(first, second).astype(complex), cfg)
    return JointAmplitude(p=0, q=0, t=cfg.t, uv_grid=cfg.uv_grid, values=values, normalized=True)


def fit_width_exponent(times: Sequence[float], widths: Sequence[float]) -> WidthFit:
    """Least-squares slope of log(width) against log(t)."""
    times = np.asarray(times, dtype=float)
    widths = np.asarray(widths, dtype=float)
    if times.size < 2 or times.size != widths.size:
        raise DomainError("width fit needs at least two (t, width) pairs")
    if np.any(times <= 0) or np.any(widths <= 0):
        raise DomainError("width fit needs positive times and widths")
    fit = stats.linregress(np.log(times), np.log(widths))
    stderr = float(fit.stderr) if times.size > 2 else float("nan")
    return WidthFit(
        exponent=float(fit.slope),
        stderr=stderr,
        intercept=float(fit.intercept),
        samples=int(times.size),
        prefactor=float(np.exp(fit.intercept)),
    )


def locking_widths(p: int, q: int, times: Sequence[float], cfg: OpaConfig) -> List[float]:
    return [velocity_locking_width(p, q, t, cfg) for t in times]
