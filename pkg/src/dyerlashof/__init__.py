"""Dyer-Lashof operations on mod p homology with twisted coefficients."""

__version__ = "0.1.0"
