"""Exact scalar arithmetic: half-exponent Laurent polynomials, cyclotomic phases, matrices."""

from src.algebra.cyclotomic import CycScalar, cyc_embed
from src.algebra.laurent import HalfExpLaurent, jones_at_roots, laurent_eval_at_root
from src.algebra.matrices import (
    ComplexMatrix,
    best_scalar_fit,
    chebyshev_first_kind,
    chebyshev_second_kind,
    hermitian_defect,
    max_abs,
)

__all__ = [
    "ComplexMatrix",
    "CycScalar",
    "HalfExpLaurent",
    "best_scalar_fit",
    "chebyshev_first_kind",
    "chebyshev_second_kind",
    "cyc_embed",
    "hermitian_defect",
    "jones_at_roots",
    "laurent_eval_at_root",
    "max_abs",
]
