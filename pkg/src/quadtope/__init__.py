"""Quadratic semi-algebraic fibers: index strata, sphere-bundle models and censuses."""

__version__ = "0.1.0"
