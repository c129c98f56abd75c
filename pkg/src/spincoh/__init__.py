"""Exact spin cohomology computations over the Gaussian rationals."""

__version__ = "0.1.0"
