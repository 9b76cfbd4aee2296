"""
Models for the X-wave parametric amplifier and its two-photon state.
"""

from enum import Enum
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .arrays import ComplexArray, FloatArray
from .basis import BasisConfig, VelocityGrid
from .medium import MediumParams


class PhaseConvention(str, Enum):
    """
    How the amplitude phase is built.

    AS_WRITTEN uses K(u, v) and g(u, v) as printed. FROM_INTERACTION sets
    g = F and K = F / 2, which is what first-order perturbation theory gives
    for the interaction phase F.
    """
    AS_WRITTEN = "as_written"
    FROM_INTERACTION = "from_interaction"


class OpaConfig(BaseModel):
    """Two X-wave fields coupled by a second-order nonlinearity."""
    model_config = ConfigDict(extra='forbid', arbitrary_types_allowed=True)

    field1: MediumParams
    field2: MediumParams
    chi: float = Field(default=1.0, allow_inf_nan=False)
    basis1: BasisConfig
    basis2: BasisConfig
    t: float = Field(ge=0.0, allow_inf_nan=False)
    uv_grid: VelocityGrid
    small_momenta_fraction: float = Field(default=0.1, gt=0.0)
    phase_convention: PhaseConvention = PhaseConvention.AS_WRITTEN

    @model_validator(mode="after")
    def _check_dispersion(self):
        if self.field1.omega2 != self.field2.omega2:
            raise ValueError("both fields must share the same second-order dispersion omega2")
        mismatch = abs(self.field1.omega1 - self.field2.omega1)
        if mismatch <= 1e-12 * max(self.field1.omega1, self.field2.omega1):
            raise ValueError("group velocities must differ for the fields to lock")
        return self

    @property
    def omega2(self) -> float:
        return self.field1.omega2

    @property
    def rho(self) -> float:
        return float(np.sqrt(self.field1.k * self.field2.omega1 / (self.field2.k * self.field1.omega1)))

    @property
    def group_velocity_mismatch(self) -> float:
        return self.field1.omega1 - self.field2.omega1

    @property
    def small_momenta_band(self) -> float:
        return self.small_momenta_fraction * abs(self.group_velocity_mismatch)


class JointAmplitude(BaseModel):
    """
    Two-photon amplitude Phi(u, v) on the OPA velocity grid.

    Axis 0 runs over u (field 2), axis 1 over v (field 1).
    """
    model_config = ConfigDict(extra='forbid', arbitrary_types_allowed=True)

    p: int = Field(ge=0)
    q: int = Field(ge=0)
    t: float = Field(ge=0.0)
    uv_grid: VelocityGrid
    values: ComplexArray
    normalized: bool = False

    @model_validator(mode="after")
    def _check_values(self):
        shape = (self.uv_grid.points, self.uv_grid.points)
        if self.values.shape != shape:
            raise ValueError(f"amplitude shape {self.values.shape} does not match grid {shape}")
        if self.normalized:
            norm = self.norm_squared()
            if abs(norm - 1.0) > 1e-10:
                raise ValueError(f"amplitude flagged normalized but has norm {norm}")
        return self

    def norm_squared(self) -> float:
        weights = self.uv_grid.weights
        return float(np.sum(np.outer(weights, weights) * np.abs(self.values) ** 2))

    @property
    def probability(self) -> np.ndarray:
        return np.abs(self.values) ** 2


class SchmidtResult(BaseModel):
    """Schmidt spectrum and the entanglement measures derived from it."""
    model_config = ConfigDict(extra='forbid', arbitrary_types_allowed=True)

    singular_values: FloatArray = Field(description="Normalized singular values, largest first")
    entropy: float = Field(ge=0.0, description="Von Neumann entropy in nats")
    schmidt_number: float = Field(ge=1.0 - 1e-12)


class WidthFit(BaseModel):
    """Power-law fit width ~ t^exponent."""
    model_config = ConfigDict(extra='forbid')

    exponent: float
    stderr: float
    intercept: float
    samples: int = Field(ge=2)
    prefactor: Optional[float] = None
