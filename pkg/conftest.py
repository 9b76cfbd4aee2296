"""Shared fixtures. Everything runs in natural units (hbar = c = 1)."""

import math

import numpy as np
import pytest

from xwave_quant.models.basis import VelocityGrid
from xwave_quant.models.field import Spectrum
from xwave_quant.models.medium import Constants, MediumParams
from xwave_quant.models.opa import OpaConfig, PhaseConvention
from xwave_quant.settings import reset_settings
from xwave_quant.tools.specfun import gauss_legendre
from xwave_quant.tools.xwave import build_basis_config, spectrum_normalization

# Gaussian test signal: X(alpha, v) = g(v) * (2 f_0 + f_1)(alpha)
SIGNAL_DELTA = 10.0
SIGNAL_SIGMA_V = 0.1
SIGNAL_V_MAX = 0.8
SIGNAL_V_POINTS = 257
SIGNAL_ALPHA_MAX = 4.0

# Two-field amplifier in the small-momenta regime
OPA_V_MAX = 5e-6


@pytest.fixture(autouse=True)
def fresh_settings():
    reset_settings()
    yield
    reset_settings()


@pytest.fixture
def natural():
    return Constants.natural()


@pytest.fixture
def medium():
    """Dispersive medium with b = sqrt(omega2 k / omega1) = 1/sqrt(3)."""
    return MediumParams(omega=1.0, k=1.0, omega1=3.0, omega2=1.0)


def velocity_profile(v):
    return np.exp(-0.5 * (np.asarray(v, dtype=float) / SIGNAL_SIGMA_V) ** 2)


def signal_spectrum_function(params: MediumParams):
    """
    S(k_perp, k_z) whose X-wave spectrum is g(v) (2 f_0 + f_1)(alpha).

    Inverting k_perp = b alpha, k_z = alpha - v / omega2 gives
    S = (omega1 / k) g(v) (2 f_0 + f_1)(alpha) / alpha, finite at alpha = 0.
    """
    b = params.transverse_scale
    n0 = spectrum_normalization(params, 0)
    n1 = spectrum_normalization(params, 1)

    def spectrum(kperp, kz):
        alpha = np.asarray(kperp, dtype=float) / b
        v = params.omega2 * (alpha - np.asarray(kz, dtype=float))
        x = 2.0 * alpha * SIGNAL_DELTA
        radial = SIGNAL_DELTA * np.exp(-alpha * SIGNAL_DELTA) * (2.0 * n0 + n1 * (2.0 - x))
        return (params.omega1 / params.k) * velocity_profile(v) * radial

    return spectrum


@pytest.fixture
def signal_spectrum(medium):
    """The Gaussian test signal on its support box, evaluated exactly."""
    kperp_grid = np.linspace(0.0, SIGNAL_ALPHA_MAX * medium.transverse_scale, 201)
    kz_grid = np.linspace(-SIGNAL_V_MAX, SIGNAL_ALPHA_MAX + SIGNAL_V_MAX, 281)
    return Spectrum.from_function(signal_spectrum_function(medium), kperp_grid, kz_grid)


@pytest.fixture
def signal_basis():
    """Basis for the Gaussian test signal; alpha nodes on [0, 4] with Gauss-Legendre."""

    def build(alpha_nodes: int = 600, p_max: int = 24):
        return build_basis_config(
            SIGNAL_DELTA,
            p_max=p_max,
            v_max=SIGNAL_V_MAX,
            v_points=SIGNAL_V_POINTS,
            alpha_rule=gauss_legendre(alpha_nodes, 0.0, SIGNAL_ALPHA_MAX),
        )

    return build


@pytest.fixture
def opa_fields():
    field1 = MediumParams(omega=1.0, k=1.0, omega1=1.0, omega2=1.0)
    field2 = MediumParams(omega=1.0, k=1.9, omega1=0.5, omega2=1.0)
    return field1, field2


@pytest.fixture
def opa_config(opa_fields):
    """Factory for amplifier configurations on an N x N velocity grid."""
    field1, field2 = opa_fields

    def build(points: int = 129, t: float = 1.0, v_max: float = OPA_V_MAX, p_max: int = 2,
              convention: PhaseConvention = PhaseConvention.AS_WRITTEN):
        basis = build_basis_config(1.0, p_max=p_max, v_max=v_max, v_points=points)
        return OpaConfig(
            field1=field1,
            field2=field2,
            chi=1.0,
            basis1=basis,
            basis2=basis,
            t=t,
            uv_grid=VelocityGrid(v_max=v_max, points=points),
            phase_convention=convention,
        )

    return build


def locking_slope(cfg: OpaConfig) -> float:
    """Slope a of the detuning g ~ a (v - rho u) near the origin."""
    return abs(cfg.group_velocity_mismatch) / ((1.0 + cfg.rho) * cfg.omega2)


def gaussian_energy() -> float:
    """Continuum value of int (|2 g|^2 + |g|^2) dv."""
    return 5.0 * SIGNAL_SIGMA_V * math.sqrt(math.pi)
