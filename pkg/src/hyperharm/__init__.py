"""Harmonic vector fields, quadratic differentials, and group cocycles
on the hyperbolic plane and disk."""

__version__ = "0.1.0"
