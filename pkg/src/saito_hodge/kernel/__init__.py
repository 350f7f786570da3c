"""Exact arithmetic in S = Q[x_1..x_l], in S[1/Q], and linear algebra over S[1/Q]."""
from .linalg import Matrix, bareiss_det, laplace_det, rational_matrix
from .local import LocQ, LocRing
from .poly import Poly, divide_by_linear, format_rational, to_fraction

__all__ = [
    "LocQ",
    "LocRing",
    "Matrix",
    "Poly",
    "bareiss_det",
    "divide_by_linear",
    "format_rational",
    "laplace_det",
    "rational_matrix",
    "to_fraction",
]
