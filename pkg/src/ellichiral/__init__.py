"""Exact-arithmetic workbench for chiral chain complexes over an elliptic curve."""

__version__ = "0.1.0"
