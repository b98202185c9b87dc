"""
Serialization
=============
Complex numbers travel as [re, im]; matrices as nested row lists of those
pairs. dump_json writes sorted keys so equal payloads are byte-identical.
Real and imaginary parts below the zero cutoff are written as 0.0, relative
to the largest entry for matrices.
"""

import json
from typing import Any, List

import numpy as np

from ..errors import DimensionError

ZERO_CUTOFF = 1e-14


def _snap(x: float, cutoff: float) -> float:
    # also folds -0.0 into 0.0
    return 0.0 if abs(x) < cutoff else float(x)


def complex_to_json(z, cutoff: float = ZERO_CUTOFF) -> List[float]:
    z = complex(z)
    return [_snap(z.real, cutoff), _snap(z.imag, cutoff)]


def complex_from_json(pair) -> complex:
    re, im = pair
    return complex(float(re), float(im))


def matrix_to_json(M) -> List[List[List[float]]]:
    A = np.asarray(M, dtype=np.complex128)
    if A.ndim != 2:
        raise DimensionError(f"Only 2-D matrices serialize, got shape {A.shape}")
    scale = max(1.0, float(np.max(np.abs(A)))) if A.size else 1.0
    return [[complex_to_json(x, ZERO_CUTOFF * scale) for x in row] for row in A]


def matrix_from_json(rows) -> np.ndarray:
    if len(rows) == 0:
        return np.zeros((0, 0), dtype=np.complex128)
    return np.array(
        [[complex_from_json(x) for x in row] for row in rows], dtype=np.complex128
    )


def dump_json(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False)
