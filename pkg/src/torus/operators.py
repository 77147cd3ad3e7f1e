"""
Quantum-group operators C(p,q) on the level-r torus states.

C(p,q) acts on the basis zeta_1..zeta_{r-1} by

    C zeta_j = e^(-i pi pq / 2r) (e^(i pi jq / r) zeta_{j-p} + e^(-i pi jq / r) zeta_{j+p})

with the odd 2r-periodic index extension zeta_{-j} = -zeta_j, so zeta_0 and
zeta_r vanish. Matrices are indexed ``M[k-1, j-1]`` = coefficient of zeta_k
in C zeta_j, and a product ``A @ B`` applies B first.
"""

import cmath
import logging
import math
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Tuple, Union

import numpy as np

from src.algebra.matrices import ComplexMatrix, chebyshev_first_kind, chebyshev_second_kind, max_abs
from src.torus.curves import CurveObservable, FormalTraceSum, Level

logger = logging.getLogger(__name__)

PhaseCoefficient = Union[Fraction, int, float]


def reduce_index(index: int, r: int) -> Tuple[int, int]:
    """
    Basis position and sign of zeta_index.

    Returns:
        (k, sign) with zeta_index = sign * zeta_k, or (0, 0) for the zero function.
    """
    residue = index % (2 * r)
    if residue in (0, r):
        return 0, 0
    if residue < r:
        return residue, 1
    return 2 * r - residue, -1


@lru_cache(maxsize=4096)
def _cs_matrix(p: int, q: int, r: int) -> ComplexMatrix:
    size = r - 1
    matrix = np.zeros((size, size), dtype=np.complex128)
    prefactor = cmath.exp(-1j * math.pi * p * q / (2 * r))
    for j in range(1, r):
        for shift, phase_sign in ((-p, 1), (p, -1)):
            k, sign = reduce_index(j + shift, r)
            if sign:
                phase = cmath.exp(phase_sign * 1j * math.pi * j * q / r)
                matrix[k - 1, j - 1] += sign * prefactor * phase
    matrix.flags.writeable = False
    return matrix


def cs_operator(curve: CurveObservable, r: int) -> ComplexMatrix:
    """
    Matrix of C(p,q) at level r, of size (r-1) x (r-1).

    The returned array is read-only and shared between callers.
    """
    Level(r)
    return _cs_matrix(curve.p, curve.q, r)


def cs(p: int, q: int, r: int) -> ComplexMatrix:
    return cs_operator(CurveObservable(p, q), r)


def phase(c: PhaseCoefficient, k: int, r: int) -> complex:
    """e^(i pi c k / r)."""
    return cmath.exp(1j * math.pi * float(c) * k / r)


def product_to_sum_check(m: int, n: int, p: int, q: int, r: int, c: PhaseCoefficient) -> float:
    """
    Max-abs deviation of
    C(m,n) C(p,q) = e^(i pi c k / r) C(m+p,n+q) + e^(-i pi c k / r) C(m-p,n-q),
    k = mq - np.
    """
    k = m * q - n * p
    lhs = cs(m, n, r) @ cs(p, q, r)
    rhs = phase(c, k, r) * cs(m + p, n + q, r) + phase(c, -k, r) * cs(m - p, n - q, r)
    return max_abs(lhs - rhs)


def involved_vanish(m: int, n: int, p: int, q: int, r: int, tolerance: float = 1e-12) -> bool:
    """True when every operator in the product-to-sum instance is zero."""
    return all(
        max_abs(cs(a, b, r)) < tolerance
        for a, b in ((m, n), (p, q), (m + p, n + q), (m - p, n - q))
    )


def commutator(a: CurveObservable, b: CurveObservable, r: int) -> ComplexMatrix:
    ca, cb = cs_operator(a, r), cs_operator(b, r)
    return ca @ cb - cb @ ca


def commutator_check(m: int, n: int, p: int, q: int, r: int, c: PhaseCoefficient) -> float:
    """
    Deviation of [C(m,n), C(p,q)] = 2i sin(pi c k / r) (C(m+p,n+q) - C(m-p,n-q)).
    """
    k = m * q - n * p
    lhs = commutator(CurveObservable(m, n), CurveObservable(p, q), r)
    rhs = 2j * math.sin(math.pi * float(c) * k / r) * (cs(m + p, n + q, r) - cs(m - p, n - q, r))
    return max_abs(lhs - rhs)


def colored_curve_operator(curve: CurveObservable, color: int, r: int) -> ComplexMatrix:
    """
    Operator of the primitive curve under ``curve`` colored by V^color.

    This is S_{color-1}(C(p', q')) where (p, q) = d (p', q'); V^1 is the
    trivial representation and V^2 gives C(p', q') itself.
    """
    if color < 0:
        raise ValueError(f"color must be nonnegative, got {color}")
    return chebyshev_second_kind(color - 1, cs_operator(curve.primitive(), r))


def chebyshev_check(curve: CurveObservable, d: int, r: int) -> float:
    """Deviation of C(d p, d q) from T_d(C(p, q))."""
    target = cs(d * curve.p, d * curve.q, r)
    return max_abs(target - chebyshev_first_kind(d, cs_operator(curve, r)))


def colored_difference_check(curve: CurveObservable, r: int) -> float:
    """
    Deviation of C(p,q) from colored(d+1) - colored(d-1) of the primitive curve,
    d = gcd(p, q).
    """
    d = curve.multiplicity()
    primitive = curve.primitive()
    if d == 0:
        return max_abs(cs_operator(curve, r) - 2 * np.eye(r - 1))
    upper = colored_curve_operator(primitive, d + 1, r)
    lower = colored_curve_operator(primitive, d - 1, r)
    return max_abs(cs_operator(curve, r) - (upper - lower))


def op(trace_sum: FormalTraceSum, r: int, scale: Optional[float] = None) -> ComplexMatrix:
    """Linear extension of I_c -> C(c) to a formal trace sum, optionally scaled."""
    total = np.zeros((r - 1, r - 1), dtype=np.complex128)
    for curve, coefficient in trace_sum:
        total += float(coefficient) * cs_operator(curve, r)
    return total if scale is None else scale * total
