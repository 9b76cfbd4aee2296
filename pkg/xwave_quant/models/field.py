"""
Field envelopes, sampled spectra and X-wave expansion coefficients.
"""

from enum import Enum
from typing import Callable, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.interpolate import RectBivariateSpline, RegularGridInterpolator

from .arrays import ComplexArray, FloatArray, is_strictly_increasing

SpectrumFunction = Callable[[np.ndarray, np.ndarray], np.ndarray]


class SpectrumInterpolation(str, Enum):
    """Interpolation of a sampled spectrum between grid points."""
    LINEAR = "linear"
    CUBIC = "cubic"


class FieldEnvelope(BaseModel):
    """Complex envelope A(r, zeta) sampled on a tensor grid, r along axis 0."""
    model_config = ConfigDict(extra='forbid', arbitrary_types_allowed=True)

    r_grid: FloatArray
    zeta_grid: FloatArray
    values: ComplexArray
    t: float = 0.0

    @model_validator(mode="after")
    def _check_grid(self):
        if not is_strictly_increasing(self.r_grid) or not is_strictly_increasing(self.zeta_grid):
            raise ValueError("grids must be 1-D and strictly increasing")
        if self.r_grid[0] < 0:
            raise ValueError("radial grid must be non-negative")
        if self.values.shape != (self.r_grid.size, self.zeta_grid.size):
            raise ValueError(
                f"values shape {self.values.shape} does not match grid "
                f"({self.r_grid.size}, {self.zeta_grid.size})"
            )
        if not np.all(np.isfinite(self.values)):
            raise ValueError("field values must be finite")
        return self


class Spectrum(BaseModel):
    """
    Transverse/longitudinal spectrum S(k_perp, k_z) on a rectangular grid.

    Sampled spectra are interpolated bilinearly, or with a bicubic spline
    (at least four points per axis) for smooth spectra on coarse grids.
    A spectrum built with `from_function` keeps the generating function and
    evaluates it exactly; the grid then only marks the support box.
    """
    model_config = ConfigDict(extra='forbid', arbitrary_types_allowed=True)

    kperp_grid: FloatArray
    kz_grid: FloatArray
    values: ComplexArray
    interpolation: SpectrumInterpolation = SpectrumInterpolation.LINEAR
    function: Optional[SpectrumFunction] = Field(default=None, exclude=True)

    @model_validator(mode="after")
    def _check_grid(self):
        if not is_strictly_increasing(self.kperp_grid) or not is_strictly_increasing(self.kz_grid):
            raise ValueError("spectrum grids must be 1-D and strictly increasing")
        if self.kperp_grid.size < 2 or self.kz_grid.size < 2:
            raise ValueError("spectrum grids need at least two points per axis")
        if self.kperp_grid[0] < 0:
            raise ValueError("k_perp grid must be non-negative")
        if self.values.shape != (self.kperp_grid.size, self.kz_grid.size):
            raise ValueError("spectrum values do not match the grid shape")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("spectrum values must be finite")
        if self.interpolation == SpectrumInterpolation.CUBIC and min(self.values.shape) < 4:
            raise ValueError("cubic interpolation needs at least four points per axis")
        return self

    @classmethod
    def from_function(
        cls, function: SpectrumFunction, kperp_grid: np.ndarray, kz_grid: np.ndarray
    ) -> "Spectrum":
        kperp_grid = np.asarray(kperp_grid, dtype=float)
        kz_grid = np.asarray(kz_grid, dtype=float)
        kperp, kz = np.meshgrid(kperp_grid, kz_grid, indexing="ij")
        values = np.asarray(function(kperp, kz), dtype=complex)
        return cls(kperp_grid=kperp_grid, kz_grid=kz_grid, values=values, function=function)

    def support_mask(self, kperp: np.ndarray, kz: np.ndarray) -> np.ndarray:
        return (
            (kperp >= self.kperp_grid[0]) & (kperp <= self.kperp_grid[-1])
            & (kz >= self.kz_grid[0]) & (kz <= self.kz_grid[-1])
        )

    def evaluate(self, kperp, kz) -> Tuple[np.ndarray, np.ndarray]:
        """Return S at the given points (broadcast) and the in-support mask."""
        kperp, kz = np.broadcast_arrays(np.asarray(kperp, dtype=float), np.asarray(kz, dtype=float))
        inside = self.support_mask(kperp, kz)
        values = np.zeros(kperp.shape, dtype=complex)
        if not np.any(inside):
            return values, inside
        if self.function is not None:
            values[inside] = np.asarray(self.function(kperp[inside], kz[inside]), dtype=complex)
            return values, inside
        if self.interpolation == SpectrumInterpolation.CUBIC:
            real = RectBivariateSpline(self.kperp_grid, self.kz_grid, self.values.real, kx=3, ky=3)
            imag = RectBivariateSpline(self.kperp_grid, self.kz_grid, self.values.imag, kx=3, ky=3)
            values[inside] = real.ev(kperp[inside], kz[inside]) + 1j * imag.ev(kperp[inside], kz[inside])
            return values, inside
        points = np.stack([kperp[inside], kz[inside]], axis=-1)
        grid = (self.kperp_grid, self.kz_grid)
        real = RegularGridInterpolator(grid, self.values.real, method="linear")
        imag = RegularGridInterpolator(grid, self.values.imag, method="linear")
        values[inside] = real(points) + 1j * imag(points)
        return values, inside


class VelocityCoefficients(BaseModel):
    """Expansion coefficients C_p(v), orders along axis 0 and velocities along axis 1."""
    model_config = ConfigDict(extra='forbid', arbitrary_types_allowed=True)

    v_grid: FloatArray
    coeffs: ComplexArray
    t: float = 0.0
    residual: Optional[float] = None

    @model_validator(mode="after")
    def _check_shape(self):
        if not is_strictly_increasing(self.v_grid):
            raise ValueError("velocity grid must be strictly increasing")
        if self.coeffs.ndim != 2 or self.coeffs.shape[1] != self.v_grid.size:
            raise ValueError("coefficients must have shape (p_max + 1, len(v_grid))")
        return self

    @property
    def p_max(self) -> int:
        return self.coeffs.shape[0] - 1


class PropagationMethod(str, Enum):
    """Time-evolution paths for a classical field."""
    DIRECT = "direct"
    XWAVE = "xwave"


class PropagationResult(BaseModel):
    """Field at time t together with the method that produced it."""
    model_config = ConfigDict(extra='forbid', arbitrary_types_allowed=True)

    t: float = Field(ge=0.0)
    method: PropagationMethod
    field: FieldEnvelope
