"""Exceptions and warnings raised by the X-wave toolkit."""

from typing import List, Optional


class XWaveError(Exception):
    """Base class for every error raised by the toolkit."""


class DomainError(XWaveError, ValueError):
    """An argument lies outside the domain of the operation."""


class UnsupportedOrderError(DomainError):
    """A polynomial order is above the supported recurrence bound."""


class NumericError(XWaveError, ArithmeticError):
    """A non-finite value appeared during a computation."""

    def __init__(self, message: str, node_index: Optional[int] = None):
        super().__init__(message)
        self.node_index = node_index


class AccuracyError(XWaveError):
    """A quadrature failed to converge between two node counts."""

    def __init__(self, message: str, relative_change: float):
        super().__init__(message)
        self.relative_change = relative_change


class ResolutionError(XWaveError):
    """Spectral content is not resolved by the output grid."""


class DegenerateStateError(XWaveError):
    """An amplitude vanishes identically and cannot be normalized."""


class ConfigError(XWaveError):
    """Invalid configuration or input file."""

    def __init__(self, message: str, diagnostics: Optional[List[str]] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or []


class TruncationWarning(UserWarning):
    """The basis truncation leaves a residual above tolerance."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


class RegimeWarning(UserWarning):
    """Velocities exceed the small-momenta validity band."""

    def __init__(self, message: str, ratio: float):
        super().__init__(message)
        self.ratio = ratio
