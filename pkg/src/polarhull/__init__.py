"""Finite-scale verification of polarized completions and hulls."""

__version__ = "0.1.0"
