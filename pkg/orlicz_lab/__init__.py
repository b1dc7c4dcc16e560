"""Numerical laboratory for the Orlicz norm on radial H^1(R^2), concentration
families, profile decomposition and radial exponential Klein-Gordon dynamics."""

__version__ = "0.1.0"
