"""Numerical-quality validation of basis, propagation and OPA runs."""

import logging
import math
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..models.config import Tolerances
from ..models.field import VelocityCoefficients
from ..models.medium import MediumParams

logger = logging.getLogger("xwave_quant.evaluation.accuracy_validator")

# Share of a tolerance above which a result is flagged as caution
CAUTION_FRACTION = 0.1


class QualityLevel(str, Enum):
    """Quality assessment levels."""
    OK = "ok"
    CAUTION = "caution"
    FAILURE = "failure"


class QualityViolation:
    """A numerical result outside (or close to) its tolerance."""

    def __init__(self, level: QualityLevel, check: str, details: str, value: float = math.nan):
        self.level = level
        self.check = check
        self.details = details
        self.value = value

    def __str__(self):
        return f"{self.level.value.upper()}: {self.check} - {self.details}"


class AccuracyValidator:
    """Checks run results against the configured numerical tolerances."""

    def __init__(self, tolerances: Optional[Tolerances] = None):
        self.tolerances = tolerances if tolerances is not None else Tolerances()

    def _grade(self, check: str, value: float, tolerance: float, details: str) -> List[QualityViolation]:
        if not math.isfinite(value) or value > tolerance:
            return [QualityViolation(QualityLevel.FAILURE, check, f"{details} exceeds {tolerance:.3g}", value)]
        if value > CAUTION_FRACTION * tolerance:
            return [QualityViolation(QualityLevel.CAUTION, check, f"{details} is close to {tolerance:.3g}", value)]
        return []

    def check_orthonormality(self, matrix: np.ndarray, params: MediumParams) -> List[QualityViolation]:
        """Largest deviation of the overlap matrix from k/(4 pi^2 omega1) times the identity."""
        norm = params.k / (4.0 * math.pi**2 * params.omega1)
        matrix = np.asarray(matrix, dtype=float)
        error = float(np.max(np.abs(matrix - norm * np.eye(matrix.shape[0])))) / norm
        logger.info("Orthonormality error %.3e for p_max=%d", error, matrix.shape[0] - 1)
        return self._grade(
            "orthonormality", error, self.tolerances.orthonormality, f"relative overlap error {error:.3e}"
        )

    def check_discrepancy(self, rows: Sequence[Dict[str, Any]]) -> List[QualityViolation]:
        violations = []
        for row in rows:
            violations.extend(self._grade(
                "discrepancy", row["l2_discrepancy"], self.tolerances.discrepancy,
                f"L2 discrepancy {row['l2_discrepancy']:.3e} at t={row['t']:g}",
            ))
        return violations

    def check_energy_drift(self, rows: Sequence[Dict[str, Any]]) -> List[QualityViolation]:
        violations = []
        for row in rows:
            for path in ("direct", "xwave"):
                drift = row[f"energy_drift_{path}"]
                violations.extend(self._grade(
                    "energy_drift", drift, self.tolerances.energy_drift,
                    f"{path} energy drift {drift:.3e} at t={row['t']:g}",
                ))
        return violations

    def check_truncation(self, coefficients: VelocityCoefficients) -> List[QualityViolation]:
        """A large projection residual is a caution: the result is still the best fit in the basis."""
        residual = coefficients.residual
        if residual > self.tolerances.residual:
            return [QualityViolation(
                QualityLevel.CAUTION, "truncation",
                f"projection residual {residual:.3e} above {self.tolerances.residual:.3g}", residual,
            )]
        return []

    def check_regime(self, ratio: float) -> List[QualityViolation]:
        if ratio > 1.0:
            return [QualityViolation(
                QualityLevel.CAUTION, "small_momenta", f"velocities reach {ratio:.3g} times the band", ratio
            )]
        return []

    def assess_overall_quality(self, violations: Sequence[QualityViolation]) -> Tuple[QualityLevel, List[str]]:
        """Highest severity among the violations, with their messages."""
        if not violations:
            return QualityLevel.OK, ["All checks within tolerance"]
        level = QualityLevel.CAUTION
        if any(violation.level == QualityLevel.FAILURE for violation in violations):
            level = QualityLevel.FAILURE
        return level, [str(violation) for violation in violations]


def validate_run(
    tolerances: Optional[Tolerances] = None,
    params: Optional[MediumParams] = None,
    orthonormality: Optional[np.ndarray] = None,
    comparison: Optional[Sequence[Dict[str, Any]]] = None,
    coefficients: Optional[VelocityCoefficients] = None,
    regime_ratio: Optional[float] = None,
) -> Dict[str, Any]:
    """Convenience function to run the applicable checks and summarize them."""
    validator = AccuracyValidator(tolerances)
    violations: List[QualityViolation] = []

    if orthonormality is not None and params is not None:
        violations.extend(validator.check_orthonormality(orthonormality, params))
    if comparison is not None:
        violations.extend(validator.check_discrepancy(comparison))
        violations.extend(validator.check_energy_drift(comparison))
    if coefficients is not None:
        violations.extend(validator.check_truncation(coefficients))
    if regime_ratio is not None:
        violations.extend(validator.check_regime(regime_ratio))

    level, messages = validator.assess_overall_quality(violations)
    for violation in violations:
        log = logger.error if violation.level == QualityLevel.FAILURE else logger.warning
        log("%s", violation)
    return {
        "passed": level != QualityLevel.FAILURE,
        "level": level.value,
        "violations": messages if violations else [],
        "violation_count": len(violations),
    }
