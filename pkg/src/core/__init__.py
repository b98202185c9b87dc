"""
Core Spin-Sum System
====================
Core functionality: representations, gamma tensors, spin-sum polynomials,
field equations and the verification suite.
"""

from .gamma import TwistKind, build_T, invariant_seeds
from .halfint import HalfInt
from .lorentz import FourVector, LorentzWord, ab_rep, vector_field_rep
from .spin_sums import make_job, spin_sum_polynomial
from .tensor_cache import TensorCache, get_tensor_cache

__all__ = [
    'HalfInt', 'FourVector', 'LorentzWord', 'ab_rep', 'vector_field_rep',
    'TwistKind', 'build_T', 'invariant_seeds', 'make_job', 'spin_sum_polynomial',
    'TensorCache', 'get_tensor_cache',
]
