"""
Quadrature rules, velocity grids and X-wave basis configuration.
"""

from enum import Enum
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .arrays import FloatArray, is_strictly_increasing
from .medium import MediumParams


class QuadratureKind(str, Enum):
    """Supported quadrature families."""
    GAUSS_LEGENDRE = "gauss-legendre"
    GAUSS_LAGUERRE = "gauss-laguerre"
    TRAPEZOID = "uniform-trapezoid"


class QuadratureRule(BaseModel):
    """
    Nodes and positive weights approximating an integral over [lower, upper].

    Gauss-Laguerre rules integrate over the half line; their weights already
    include the exponential factor of the underlying weight function.
    """
    model_config = ConfigDict(extra='forbid', arbitrary_types_allowed=True)

    kind: QuadratureKind
    order: int = Field(ge=1, description="Requested number of nodes")
    nodes: FloatArray
    weights: FloatArray
    lower: float
    upper: float
    scale: Optional[float] = Field(default=None, gt=0.0)

    @model_validator(mode="after")
    def _check_nodes(self):
        if self.nodes.shape != self.weights.shape or self.nodes.ndim != 1:
            raise ValueError("nodes and weights must be 1-D arrays of equal length")
        if self.nodes.size == 0:
            raise ValueError("quadrature rule has no nodes")
        if not is_strictly_increasing(self.nodes):
            raise ValueError("nodes must be strictly increasing")
        if not np.all(np.isfinite(self.nodes)) or not np.all(np.isfinite(self.weights)):
            raise ValueError("nodes and weights must be finite")
        if np.any(self.weights <= 0):
            raise ValueError("weights must be positive")
        return self

    @property
    def size(self) -> int:
        return int(self.nodes.size)


class VelocityGrid(BaseModel):
    """Uniform velocity grid symmetric about zero with an odd point count."""
    model_config = ConfigDict(extra='forbid', frozen=True, allow_inf_nan=False)

    v_max: float = Field(gt=0.0)
    points: int = Field(ge=3)

    @field_validator("points")
    @classmethod
    def _odd_points(cls, value: int) -> int:
        if value % 2 == 0:
            raise ValueError("velocity grid needs an odd number of points so that it contains 0")
        return value

    @property
    def values(self) -> np.ndarray:
        return np.linspace(-self.v_max, self.v_max, self.points)

    @property
    def spacing(self) -> float:
        return 2.0 * self.v_max / (self.points - 1)

    @property
    def weights(self) -> np.ndarray:
        weights = np.full(self.points, self.spacing)
        weights[0] *= 0.5
        weights[-1] *= 0.5
        return weights


class BasisConfig(BaseModel):
    """Truncation and quadrature choices for the X-wave basis."""
    model_config = ConfigDict(extra='forbid', arbitrary_types_allowed=True)

    delta: float = Field(gt=0.0, allow_inf_nan=False, description="Spectral scale")
    p_max: int = Field(ge=0, le=200)
    alpha_rule: QuadratureRule
    v_grid: VelocityGrid
    projection_nodes: int = Field(default=128, ge=2)
    residual_tolerance: float = Field(default=1e-6, gt=0.0)
    convergence_tolerance: float = Field(default=1e-8, gt=0.0)

    @property
    def orders(self) -> np.ndarray:
        return np.arange(self.p_max + 1)


class XWaveSpectrum(BaseModel):
    """Generalized-Laguerre spectrum of order p for one medium."""
    model_config = ConfigDict(extra='forbid')

    p: int = Field(ge=0, le=200)
    params: MediumParams
    delta: float = Field(gt=0.0, allow_inf_nan=False)
