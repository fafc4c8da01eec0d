"""Construct and verify the length-three complexes F^top of formats (1,n,n,1) and (1,4,m+3,m)."""
from .complex import ChainComplex, FormatError, FormatSpec, compose_check, expected_ranks
from .kernel import BACKEND
from .poly import Polynomial, VariableRegistry

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "ChainComplex", "FormatError", "FormatSpec", "Polynomial", "VariableRegistry",
    "compose_check", "expected_ranks", "__version__",
]
