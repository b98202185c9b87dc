import json

import numpy as np
import pytest

from src.core.errors import DimensionError
from src.core.utils.serialization import (
    complex_from_json,
    complex_to_json,
    dump_json,
    matrix_from_json,
    matrix_to_json,
)


def test_roundoff_parts_are_written_as_zero():
    assert complex_to_json(1 + 1e-34j) == [1.0, 0.0]
    assert complex_to_json(-3e-17 + 0.5j) == [0.0, 0.5]
    assert complex_to_json(complex(-0.0, -0.0)) == [0.0, 0.0]
    assert dump_json(complex_to_json(-1e-20)) == dump_json([0.0, 0.0])


def test_matrix_cutoff_scales_with_the_largest_entry():
    M = np.array([[1e3, 5e-12], [2e-15j, -1.0]])
    assert matrix_to_json(M) == [[[1000.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [-1.0, 0.0]]]
    small = np.array([[1e-6, 1e-13]])
    assert matrix_to_json(small) == [[[1e-6, 0.0], [1e-13, 0.0]]]


def test_matrices_survive_a_json_trip():
    M = np.array([[1.0, 0.5j], [-2.0 + 1.0j, 0.0]])
    back = matrix_from_json(json.loads(dump_json(matrix_to_json(M))))
    assert np.array_equal(back, M)
    assert complex_from_json([0.25, -1.0]) == 0.25 - 1.0j
    assert matrix_from_json([]).shape == (0, 0)


def test_only_matrices_serialize():
    with pytest.raises(DimensionError):
        matrix_to_json(np.zeros((2, 2, 2)))
