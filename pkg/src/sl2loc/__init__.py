"""Exact twisted differential operators on the projective line and the sl(2)-modules they produce."""

from .exact import ETA, K, T, Chart, Fraction, IndexPoly, Laurent
from .weyl import WeylOp

__version__ = "0.1.0"

__all__ = ["Chart", "Fraction", "IndexPoly", "Laurent", "WeylOp", "K", "T", "ETA", "__version__"]
