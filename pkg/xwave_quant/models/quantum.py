"""
Quantum states of single X-wave modes.
"""

from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .field import FieldEnvelope


class StateKind(str, Enum):
    """Kind of single-mode state."""
    FOCK = "fock"
    COHERENT = "coherent"


class ModeIndex(BaseModel):
    """Discrete order p and continuous velocity v of an X-wave mode."""
    model_config = ConfigDict(extra='forbid', frozen=True)

    p: int = Field(ge=0, le=200)
    v: float = Field(allow_inf_nan=False)


class GaussianModeState(BaseModel):
    """Fock or coherent state occupying a single mode."""
    model_config = ConfigDict(extra='forbid')

    kind: StateKind
    mode: ModeIndex
    n: Optional[int] = Field(default=None, ge=0)
    alpha: Optional[complex] = None

    @model_validator(mode="after")
    def _check_kind(self):
        if self.kind == StateKind.FOCK and self.n is None:
            raise ValueError("a Fock state needs an occupation number n")
        if self.kind == StateKind.COHERENT and self.alpha is None:
            raise ValueError("a coherent state needs an amplitude alpha")
        return self

    @property
    def mean_occupation(self) -> float:
        if self.kind == StateKind.FOCK:
            return float(self.n)
        return abs(self.alpha) ** 2


class CoherentExpectation(BaseModel):
    """Mean field and mean energy of a coherent state."""
    model_config = ConfigDict(extra='forbid', arbitrary_types_allowed=True)

    mean_field: FieldEnvelope
    energy: float
