"""
Medium parameters and the single-mode dispersion of X-waves.
"""

import logging

from pydantic import ValidationError

from ..errors import DomainError
from ..models.medium import Constants, MediumParams

logger = logging.getLogger("xwave_quant.tools.medium")


def medium_params(omega: float, k: float, omega1: float, omega2: float, n: float = 1.0) -> MediumParams:
    """Build MediumParams, reporting invalid values as a DomainError."""
    try:
        return MediumParams(omega=omega, n=n, k=k, omega1=omega1, omega2=omega2)
    except ValidationError as exc:
        raise DomainError(f"invalid medium parameters: {exc.errors()[0]['msg']}") from exc


def vacuum_params(omega: float, constants: Constants) -> MediumParams:
    """
    Vacuum dispersion at carrier frequency omega.

    Gives k = omega/c, omega1 = c and omega2 = c^2/omega.
    """
    if not omega > 0:
        raise DomainError(f"carrier frequency must be positive, got {omega}")
    c = constants.c
    return medium_params(omega=omega, n=1.0, k=omega / c, omega1=c, omega2=c * c / omega)


def effective_mass(params: MediumParams, constants: Constants) -> float:
    """Mass m = hbar / omega2 of the free quasi-particles of the quantized beam."""
    return constants.hbar / params.omega2


def velocity_ratio_rho(params1: MediumParams, params2: MediumParams) -> float:
    """Ratio rho = sqrt(k1 * omega1_of_2 / (k2 * omega1_of_1)); locked velocities obey v = rho * u."""
    return (params1.k * params2.omega1 / (params2.k * params1.omega1)) ** 0.5


def group_velocity_mismatch(params1: MediumParams, params2: MediumParams) -> float:
    return params1.omega1 - params2.omega1


def kinetic_energy(v: float, params: MediumParams, constants: Constants) -> float:
    """Energy m v^2 / 2 of one quantum moving at velocity v."""
    return 0.5 * effective_mass(params, constants) * v * v
