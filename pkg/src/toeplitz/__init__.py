"""Toeplitz quantisation of torus curves and its comparison with C(p,q)."""

from src.toeplitz.quadrature import QuadratureSpec, gram_matrix, inner_product, zeta_grid
from src.toeplitz.weyl import (
    WeylComparison,
    toeplitz_matrix,
    toeplitz_operator,
    weyl_qg_compare,
)

__all__ = [
    "QuadratureSpec",
    "WeylComparison",
    "gram_matrix",
    "inner_product",
    "toeplitz_matrix",
    "toeplitz_operator",
    "weyl_qg_compare",
    "zeta_grid",
]
