"""Data models for media, basis functions, fields and OPA states."""

from .basis import BasisConfig, QuadratureKind, QuadratureRule, VelocityGrid, XWaveSpectrum
from .field import (
    FieldEnvelope,
    PropagationMethod,
    PropagationResult,
    Spectrum,
    SpectrumInterpolation,
    VelocityCoefficients,
)
from .medium import Constants, MediumParams, UnitSystem
from .opa import JointAmplitude, OpaConfig, PhaseConvention, SchmidtResult, WidthFit
from .quantum import CoherentExpectation, GaussianModeState, ModeIndex, StateKind

__all__ = [
    "BasisConfig",
    "CoherentExpectation",
    "Constants",
    "FieldEnvelope",
    "GaussianModeState",
    "JointAmplitude",
    "MediumParams",
    "ModeIndex",
    "OpaConfig",
    "PhaseConvention",
    "PropagationMethod",
    "PropagationResult",
    "QuadratureKind",
    "QuadratureRule",
    "SchmidtResult",
    "SpectrumInterpolation",
    "Spectrum",
    "StateKind",
    "UnitSystem",
    "VelocityCoefficients",
    "VelocityGrid",
    "WidthFit",
    "XWaveSpectrum",
]
