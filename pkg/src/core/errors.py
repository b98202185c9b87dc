"""
Toolkit Errors
==============
Exception hierarchy shared by every numerical module.
"""

from typing import Any, Dict, Optional


class SpinSumError(Exception):
    """Base class for all toolkit failures"""

    def __init__(self, message: str, context: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.context = dict(context or {})


class DomainError(SpinSumError):
    """Input outside the mathematical domain (spin labels, mass shell, ranges)"""


class DimensionError(SpinSumError):
    """Matrix shapes do not agree"""


class NonFiniteError(SpinSumError):
    """NaN or infinite entries"""


class AlgebraError(SpinSumError):
    """Generators violate the rotation/Lorentz commutation relations"""


class MultiplicityError(SpinSumError):
    """Requested spin is absent or occurs more than once"""


class CasimirError(SpinSumError):
    """Casimir eigenvalues do not cluster on K(K+1)"""


class FitError(SpinSumError):
    """Least-squares tensor fit failed or was under-sampled"""


class VerificationError(SpinSumError):
    """A residual exceeded its tolerance"""
