"""Finite-field experiments on canonical scrolls over curves: Riemann-Roch
spaces, Jacobians, multiplication maps, decomposable ruled surfaces and
explicit double covers."""

__version__ = "0.1.0"

__all__ = ["__version__"]
