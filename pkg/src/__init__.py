"""
Spin Sums
=========
Spin sums, generalized gamma matrices and field equations for massive
fields in arbitrary (A,B) Lorentz representations.
"""

__version__ = "1.0.0"
__author__ = "Spin Sums Team"
