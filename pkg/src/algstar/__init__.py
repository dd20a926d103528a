"""Exact exterior calculus on the ALG* model end."""
from .radial import ModelParams, RadialSymbol, ScalarCoeff

__all__ = ["ModelParams", "RadialSymbol", "ScalarCoeff"]
__version__ = "0.1.0"
