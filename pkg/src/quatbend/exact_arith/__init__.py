"""Exact scalar and matrix arithmetic shared by every other module."""

from .linalg import integer_kernel, nullspace, primitive, rank, rref, size_reduce, solve
from .local import (INF, ValuationError, factor, hilbert_symbol, is_prime, padic_valuation,
                    primes_up_to, ramified_places, squarefree_part)
from .matrix import DimensionError, Matrix, block_diag
from .numbers import (GALOIS_IDENTITY, KLEIN_GROUP, BiquadElement, Fp, GaloisElement, Rational,
                      as_rational, galois_act, is_rational_square, rational_sqrt)

__all__ = [
    "INF", "KLEIN_GROUP", "GALOIS_IDENTITY", "BiquadElement", "DimensionError", "Fp",
    "GaloisElement", "Matrix", "Rational", "ValuationError", "as_rational", "block_diag",
    "factor", "galois_act", "hilbert_symbol", "integer_kernel", "is_prime",
    "is_rational_square", "nullspace", "padic_valuation", "primes_up_to", "primitive",
    "ramified_places", "rank", "rational_sqrt", "rref", "size_reduce", "solve",
    "squarefree_part",
]
