"""Exact and numerical verification tools for Willmore surfaces with symmetry."""
from .errors import WillmoreSymError
from .ratfun import I, MoebiusSymmetry, RationalMap, Surd

__version__ = "0.1.0"

__all__ = ["I", "MoebiusSymmetry", "RationalMap", "Surd", "WillmoreSymError", "__version__"]
