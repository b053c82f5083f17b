"""Numerical toolkit for the zeros of the Riemann zeta function, smoothed
explicit formulas for log zeta, and checks of zero-density decompositions."""

__version__ = "0.1.0"
