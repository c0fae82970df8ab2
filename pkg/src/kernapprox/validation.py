"""Input validation shared by the estimators and the CLI."""

from __future__ import annotations

import numbers

import numpy as np
from sklearn.utils.validation import check_array

from .exceptions import SpecError
from .kernels import KernelSpec


def check_angles(X, name: str = "X") -> np.ndarray:
    """Angles as a finite 1-D float array; accepts shape (n,) or (n, 1)."""
    arr = np.asarray(X)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    arr = check_array(arr, dtype=np.float64, ensure_2d=True, input_name=name)
    if arr.shape[1] != 1:
        raise ValueError(f"{name} must hold a single column of angles, got shape {arr.shape}")
    return arr[:, 0]


def check_positive_int(value, name: str, minimum: int = 1) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise TypeError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return int(value)


def check_spec(spec) -> KernelSpec:
    """Coerce a KernelSpec or its JSON document form (list of term dicts)."""
    if isinstance(spec, KernelSpec):
        return spec
    if isinstance(spec, (list, tuple)):
        return KernelSpec.from_dicts(list(spec))
    raise SpecError(f"cannot interpret {type(spec).__name__} as a kernel spec")
