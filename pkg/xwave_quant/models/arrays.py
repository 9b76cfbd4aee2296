"""Pydantic field types for numpy arrays."""

from typing import Any

import numpy as np
from pydantic import BeforeValidator, PlainSerializer
from typing_extensions import Annotated


def _to_float_array(value: Any) -> np.ndarray:
    array = np.array(value, dtype=float)
    array.setflags(write=False)
    return array


def _to_complex_array(value: Any) -> np.ndarray:
    array = np.array(value, dtype=complex)
    array.setflags(write=False)
    return array


def _complex_to_pairs(array: np.ndarray) -> list:
    return np.stack([array.real, array.imag], axis=-1).tolist()


FloatArray = Annotated[
    np.ndarray,
    BeforeValidator(_to_float_array),
    PlainSerializer(lambda array: array.tolist(), return_type=list, when_used="json"),
]

ComplexArray = Annotated[
    np.ndarray,
    BeforeValidator(_to_complex_array),
    PlainSerializer(_complex_to_pairs, return_type=list, when_used="json"),
]


def is_strictly_increasing(values: np.ndarray) -> bool:
    return values.ndim == 1 and bool(np.all(np.diff(values) > 0))
