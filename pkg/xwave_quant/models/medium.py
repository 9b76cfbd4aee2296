"""
Physical constants and medium parameters.
"""

from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..data.defaults import PHYSICAL_CONSTANTS


class UnitSystem(str, Enum):
    """Unit system for physical constants."""
    SI = "SI"
    NATURAL = "natural"


class Constants(BaseModel):
    """Reduced Planck constant and speed of light in one unit system."""
    model_config = ConfigDict(extra='forbid', frozen=True, allow_inf_nan=False)

    hbar: float = Field(gt=0.0)
    c: float = Field(gt=0.0)
    unit_system: UnitSystem

    @model_validator(mode="after")
    def _natural_units_are_unity(self):
        if self.unit_system == UnitSystem.NATURAL and (self.hbar != 1.0 or self.c != 1.0):
            raise ValueError("natural units require hbar = c = 1")
        return self

    @classmethod
    def natural(cls) -> "Constants":
        return cls(unit_system=UnitSystem.NATURAL, **PHYSICAL_CONSTANTS["natural"])

    @classmethod
    def si(cls) -> "Constants":
        return cls(unit_system=UnitSystem.SI, **PHYSICAL_CONSTANTS["SI"])


class MediumParams(BaseModel):
    """
    Carrier frequency and dispersion coefficients of a paraxial medium.

    omega1 and omega2 are the first and second derivatives of the
    dispersion relation with respect to the longitudinal wavenumber.
    """
    model_config = ConfigDict(extra='forbid', frozen=True, allow_inf_nan=False)

    omega: float = Field(gt=0.0, description="Carrier angular frequency")
    n: float = Field(default=1.0, gt=0.0, description="Refractive index")
    k: float = Field(gt=0.0, description="Carrier wavenumber")
    omega1: float = Field(gt=0.0, description="Group velocity")
    omega2: float = Field(gt=0.0, description="Group velocity dispersion")

    @property
    def transverse_scale(self) -> float:
        """Factor b with k_perp = b * alpha."""
        return (self.omega2 * self.k / self.omega1) ** 0.5
