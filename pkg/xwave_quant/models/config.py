"""
Run configuration read by the command-line tool.

Every section has defaults so that an empty JSON object is a valid
configuration. Unknown keys are rejected.
"""

from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..data.defaults import DEFAULT_BASIS, DEFAULT_OPA, DEFAULT_PROPAGATE, DEFAULT_TOLERANCES
from .basis import QuadratureKind
from .field import SpectrumInterpolation
from .medium import UnitSystem
from .opa import PhaseConvention


class UnitsSection(BaseModel):
    model_config = ConfigDict(extra='forbid')

    system: UnitSystem = UnitSystem.NATURAL


class MediumSection(BaseModel):
    """Vacuum at `omega` unless all of k, omega1 and omega2 are given."""
    model_config = ConfigDict(extra='forbid', allow_inf_nan=False)

    omega: float = Field(default=1.0, gt=0.0)
    n: float = Field(default=1.0, gt=0.0)
    k: Optional[float] = Field(default=None, gt=0.0)
    omega1: Optional[float] = Field(default=None, gt=0.0)
    omega2: Optional[float] = Field(default=None, gt=0.0)

    @model_validator(mode="after")
    def _all_or_none(self):
        given = [value is not None for value in (self.k, self.omega1, self.omega2)]
        if any(given) and not all(given):
            raise ValueError("k, omega1 and omega2 must be given together")
        return self

    @property
    def is_vacuum(self) -> bool:
        return self.k is None


class BasisSection(BaseModel):
    """X-wave basis and the grids used by the basis command; unset windows scale with delta."""
    model_config = ConfigDict(extra='forbid', allow_inf_nan=False)

    delta: float = Field(default=DEFAULT_BASIS["delta"], gt=0.0)
    p_max: int = Field(default=DEFAULT_BASIS["p_max"], ge=0, le=200)
    alpha_rule: QuadratureKind = QuadratureKind(DEFAULT_BASIS["alpha_rule"])
    alpha_nodes: int = Field(default=DEFAULT_BASIS["alpha_nodes"], ge=2)
    alpha_max: Optional[float] = Field(default=None, gt=0.0)
    projection_nodes: int = Field(default=DEFAULT_BASIS["projection_nodes"], ge=2)
    v_max: Optional[float] = Field(default=None, gt=0.0)
    v_points: int = Field(default=DEFAULT_BASIS["v_points"], ge=3)
    alpha_samples: int = Field(default=DEFAULT_BASIS["alpha_samples"], ge=2)
    alpha_sample_max: Optional[float] = Field(default=None, gt=0.0)
    field_velocities: List[float] = Field(default_factory=lambda: [0.0])
    field_orders: Optional[List[int]] = None
    r_max: Optional[float] = Field(default=None, gt=0.0)
    r_points: int = Field(default=DEFAULT_BASIS["field_points"], ge=2)
    zeta_max: Optional[float] = Field(default=None, gt=0.0)
    zeta_points: int = Field(default=DEFAULT_BASIS["field_points"], ge=2)

    @model_validator(mode="after")
    def _check_orders(self):
        for p in self.field_orders or []:
            if not 0 <= p <= self.p_max:
                raise ValueError(f"field order {p} outside 0..p_max={self.p_max}")
        return self


class PropagateSection(BaseModel):
    """Input spectrum, output grid and times for the propagate command."""
    model_config = ConfigDict(extra='forbid', allow_inf_nan=False)

    spectrum_file: Optional[str] = None
    times: List[float] = Field(default_factory=lambda: list(DEFAULT_PROPAGATE["times"]))
    r_max: float = Field(default=DEFAULT_PROPAGATE["r_max"], gt=0.0)
    r_points: int = Field(default=DEFAULT_PROPAGATE["r_points"], ge=2)
    zeta_max: float = Field(default=DEFAULT_PROPAGATE["zeta_max"], gt=0.0)
    zeta_points: int = Field(default=DEFAULT_PROPAGATE["zeta_points"], ge=2)
    kperp_nodes: int = Field(default=DEFAULT_PROPAGATE["kperp_nodes"], ge=2)
    kz_nodes: int = Field(default=DEFAULT_PROPAGATE["kz_nodes"], ge=2)
    interpolation: SpectrumInterpolation = SpectrumInterpolation(DEFAULT_PROPAGATE["interpolation"])

    @model_validator(mode="after")
    def _non_negative_times(self):
        if not self.times:
            raise ValueError("at least one propagation time is required")
        if any(t < 0 for t in self.times):
            raise ValueError("propagation times must be non-negative")
        return self


class OpaSection(BaseModel):
    """Two-field amplifier; t and v_max default to values derived from the group-velocity mismatch."""
    model_config = ConfigDict(extra='forbid', allow_inf_nan=False)

    field1: MediumSection = Field(default_factory=lambda: MediumSection(**DEFAULT_OPA["field1"]))
    field2: MediumSection = Field(default_factory=lambda: MediumSection(**DEFAULT_OPA["field2"]))
    chi: float = DEFAULT_OPA["chi"]
    delta1: float = Field(default=DEFAULT_OPA["delta"], gt=0.0)
    delta2: float = Field(default=DEFAULT_OPA["delta"], gt=0.0)
    p_max: int = Field(default=DEFAULT_OPA["p_max"], ge=0, le=200)
    pairs: List[Tuple[int, int]] = Field(default_factory=lambda: list(DEFAULT_OPA["pairs"]))
    t: Optional[float] = Field(default=None, ge=0.0)
    times: Optional[List[float]] = None
    v_max: Optional[float] = Field(default=None, gt=0.0)
    uv_points: int = Field(default=DEFAULT_OPA["uv_points"], ge=3)
    small_momenta_fraction: float = Field(default=DEFAULT_OPA["small_momenta_fraction"], gt=0.0)
    phase_convention: PhaseConvention = PhaseConvention.AS_WRITTEN

    @model_validator(mode="after")
    def _check_pairs(self):
        if self.field1.is_vacuum or self.field2.is_vacuum:
            raise ValueError("OPA fields need explicit k, omega1 and omega2")
        if not self.pairs:
            raise ValueError("at least one (p, q) pair is required")
        for p, q in self.pairs:
            if not (0 <= p <= self.p_max and 0 <= q <= self.p_max):
                raise ValueError(f"pair ({p}, {q}) outside 0..p_max={self.p_max}")
        if self.times is not None and (len(self.times) < 2 or any(t <= 0 for t in self.times)):
            raise ValueError("width times need at least two positive entries")
        return self


class Tolerances(BaseModel):
    model_config = ConfigDict(extra='forbid')

    orthonormality: float = Field(default=DEFAULT_TOLERANCES["orthonormality"], gt=0.0)
    discrepancy: float = Field(default=DEFAULT_TOLERANCES["discrepancy"], gt=0.0)
    energy_drift: float = Field(default=DEFAULT_TOLERANCES["energy_drift"], gt=0.0)
    convergence: float = Field(default=DEFAULT_TOLERANCES["convergence"], gt=0.0)
    residual: float = Field(default=DEFAULT_TOLERANCES["residual"], gt=0.0)
    aliasing: float = Field(default=DEFAULT_TOLERANCES["aliasing"], gt=0.0)


class RunConfig(BaseModel):
    """Top-level configuration file."""
    model_config = ConfigDict(extra='forbid')

    units: UnitsSection = Field(default_factory=UnitsSection)
    medium: MediumSection = Field(default_factory=MediumSection)
    basis: BasisSection = Field(default_factory=BasisSection)
    propagate: PropagateSection = Field(default_factory=PropagateSection)
    opa: OpaSection = Field(default_factory=OpaSection)
    tolerances: Tolerances = Field(default_factory=Tolerances)
