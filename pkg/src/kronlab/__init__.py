"""Numerical laboratory for Birkhoff sums over Kronecker sequences."""

__version__ = "0.1.0"
