"""
User Interfaces
==============
Interfaces to the spin-sum toolkit.
"""
