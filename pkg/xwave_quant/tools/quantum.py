"""
Single-mode quantum observables of X-wave fields.

Each X-wave mode (p, v) is an independent harmonic oscillator of
frequency omega_p(v) = v^2 / (2 omega2). States are tracked by occupation
numbers only; every expectation value here is a closed-form expression.
The zero-point energy is omitted throughout.
"""

import logging
import math
from typing import Iterable, Tuple

import numpy as np
from scipy.integrate import trapezoid

from ..errors import DomainError
from ..models.basis import BasisConfig, XWaveSpectrum
from ..models.field import FieldEnvelope, VelocityCoefficients
from ..models.medium import Constants, MediumParams
from ..models.quantum import CoherentExpectation, GaussianModeState, ModeIndex, StateKind
from .xwave import eval_field

logger = logging.getLogger("xwave_quant.tools.quantum")


def mode_frequency(mode: ModeIndex, params: MediumParams) -> float:
    """omega_p(v) = v^2 / (2 omega2), the same for every p."""
    return mode.v * mode.v / (2.0 * params.omega2)


def _mode_field(
    mode: ModeIndex,
    cfg: BasisConfig,
    params: MediumParams,
    r_grid: np.ndarray,
    zeta_grid: np.ndarray,
    t: float,
) -> np.ndarray:
    if t < 0:
        raise DomainError(f"time must be non-negative, got {t}")
    spec = XWaveSpectrum(p=mode.p, params=params, delta=cfg.delta)
    return eval_field(
        spec, mode.v, r_grid, zeta_grid - mode.v * t,
        rule=cfg.alpha_rule, tolerance=cfg.convergence_tolerance,
    )


def fock_energy_density(
    state: GaussianModeState,
    cfg: BasisConfig,
    params: MediumParams,
    r_grid,
    zeta_grid,
    constants: Constants,
    t: float = 0.0,
) -> FieldEnvelope:
    """
    Energy density n hbar omega_p(v) |psi_p^v(r, Z - v t)|^2 of a Fock state.

    The mean field of a Fock state is zero. Integrating the n = 1 density over
    a window gives hbar omega_p(v) times the windowed norm of psi, which grows
    without bound with the window: a single-velocity state is not normalizable.
    """
    if state.kind != StateKind.FOCK:
        raise DomainError("fock_energy_density needs a Fock state")
    logger.info("Tool fock_energy_density called with p=%d, v=%s, n=%d", state.mode.p, state.mode.v, state.n)
    r_grid = np.asarray(r_grid, dtype=float)
    zeta_grid = np.asarray(zeta_grid, dtype=float)
    quantum = constants.hbar * mode_frequency(state.mode, params)
    if state.n == 0 or quantum == 0.0:
        density = np.zeros((r_grid.size, zeta_grid.size))
    else:
        psi = _mode_field(state.mode, cfg, params, r_grid, zeta_grid, t)
        density = state.n * quantum * np.abs(psi) ** 2
    return FieldEnvelope(r_grid=r_grid, zeta_grid=zeta_grid, values=density, t=t)


def coherent_expectations(
    state: GaussianModeState,
    cfg: BasisConfig,
    params: MediumParams,
    r_grid,
    zeta_grid,
    constants: Constants,
    t: float = 0.0,
) -> CoherentExpectation:
    """
    Mean field sqrt(hbar omega_p) alpha exp(-i omega_p t) psi_p^v and energy hbar omega_p |alpha|^2.

    Unlike the classical X-wave, the energy is finite for every finite alpha.
    """
    if state.kind != StateKind.COHERENT:
        raise DomainError("coherent_expectations needs a coherent state")
    logger.info("Tool coherent_expectations called with p=%d, v=%s, alpha=%s", state.mode.p, state.mode.v, state.alpha)
    r_grid = np.asarray(r_grid, dtype=float)
    zeta_grid = np.asarray(zeta_grid, dtype=float)
    frequency = mode_frequency(state.mode, params)
    quantum = constants.hbar * frequency

    if state.alpha == 0 or quantum == 0.0:
        mean = np.zeros((r_grid.size, zeta_grid.size), dtype=complex)
    else:
        psi = _mode_field(state.mode, cfg, params, r_grid, zeta_grid, t)
        mean = math.sqrt(quantum) * state.alpha * np.exp(-1j * frequency * t) * psi
    field = FieldEnvelope(r_grid=r_grid, zeta_grid=zeta_grid, values=mean, t=t)
    return CoherentExpectation(mean_field=field, energy=quantum * abs(state.alpha) ** 2)


def quadratures(coefficients: VelocityCoefficients, params: MediumParams) -> Tuple[np.ndarray, np.ndarray]:
    """
    Split C = (omega Q + i P) / sqrt(2) into position and momentum quadratures.

    Q is undefined where omega_p(v) = 0 (v = 0) and is reported as NaN there.
    """
    omega = coefficients.v_grid**2 / (2.0 * params.omega2)
    momentum = math.sqrt(2.0) * coefficients.coeffs.imag
    with np.errstate(divide="ignore", invalid="ignore"):
        position = np.where(omega > 0, math.sqrt(2.0) * coefficients.coeffs.real / omega, np.nan)
    return position, momentum


def oscillator_energy(
    position: np.ndarray, momentum: np.ndarray, v_grid, params: MediumParams
) -> float:
    """
    Sum over p of the velocity integral of (P^2 + omega^2 Q^2) / 2.

    Velocities where Q is undefined contribute P^2 / 2.
    """
    v_grid = np.asarray(v_grid, dtype=float)
    omega = v_grid**2 / (2.0 * params.omega2)
    potential = np.where(np.isnan(position), 0.0, (omega * np.nan_to_num(position)) ** 2)
    density = 0.5 * np.sum(momentum**2 + potential, axis=0)
    return float(trapezoid(density, x=v_grid))


def hamiltonian_expectation(
    occupations: Iterable[Tuple[ModeIndex, float]], params: MediumParams, constants: Constants
) -> float:
    """Sum of n hbar omega_p(v) over occupied modes."""
    total = 0.0
    for mode, occupation in occupations:
        if occupation < 0:
            raise DomainError(f"occupation must be non-negative, got {occupation}")
        total += occupation * constants.hbar * mode_frequency(mode, params)
    return total
