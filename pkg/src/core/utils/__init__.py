"""
Utility Functions
================
JSON helpers shared by every serializable toolkit type.
"""

from .serialization import (
    complex_from_json,
    complex_to_json,
    dump_json,
    matrix_from_json,
    matrix_to_json,
)

__all__ = [
    'complex_from_json',
    'complex_to_json',
    'dump_json',
    'matrix_from_json',
    'matrix_to_json',
]
