"""
Terminal Interface
================
Command-line interface for the spin-sum toolkit.
"""
