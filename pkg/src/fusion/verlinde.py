"""
SU(2) Verlinde dimensions and the quantised Clebsch-Gordan rule.

Labels are dimensions 1..r-1 of the irreducible representations that survive
at level r.

The Verlinde sum r^(g-1) * sum_{j=1}^{r-1} (2 sin^2(j pi / r))^-(g-1) is
evaluated exactly. The numbers 4 sin^2(j pi / r) are the nonzero eigenvalues
of the Laplacian of the r-cycle, whose pseudo-inverse is the circulant with
first row (r^2 - 1 - 6 d (r - d)) / (12 r), d = 0..r-1. With n = g - 1 and
a the integer row r^2 - 1 - 6 d (r - d),

    dim = r * (a * ... * a)[0] / 6^n

where ``*`` is cyclic convolution taken n times. The double-precision sum is
kept as an independent check of the exact value.
"""

import logging
import math
from typing import Dict, List, Tuple

from src.utils.errors import InputError, IntegralityError

logger = logging.getLogger(__name__)

INTEGRALITY_TOLERANCE = 1e-6


def _check_range(g: int, r: int) -> None:
    if g < 1:
        raise InputError(f"genus must be at least 1, got {g}")
    if r < 2:
        raise InputError(f"level must be at least 2, got {r}")


def _cycle_green_row(r: int) -> List[int]:
    """12 r times the first row of the pseudo-inverse of the r-cycle Laplacian."""
    return [r * r - 1 - 6 * d * (r - d) for d in range(r)]


def _cyclic_power_head(row: List[int], n: int) -> int:
    """Entry 0 of the n-fold cyclic self-convolution of ``row``."""
    size = len(row)
    power = row
    for _ in range(n - 1):
        power = [sum(power[d] * row[(k - d) % size] for d in range(size)) for k in range(size)]
    return power[0]


def verlinde_dim(g: int, r: int) -> int:
    """
    Dimension of the level-r quantum Hilbert space of a genus-g surface.

    Computed in exact integer arithmetic; see the module docstring.

    Raises:
        InputError: if g < 1 or r < 2.
        IntegralityError: if the exact sum is not an integer.
    """
    _check_range(g, r)
    n = g - 1
    if n == 0:
        return r - 1
    numerator = r * _cyclic_power_head(_cycle_green_row(r), n)
    dimension, remainder = divmod(numerator, 6 ** n)
    if remainder:
        logger.error("Verlinde sum for g=%d, r=%d is %d/%d", g, r, numerator, 6 ** n)
        raise IntegralityError(f"Verlinde sum for g={g}, r={r} is {numerator}/{6 ** n}, not an integer")
    return dimension


def verlinde_sum(g: int, r: int) -> float:
    """The Verlinde sum evaluated term by term in double precision."""
    _check_range(g, r)
    exponent = g - 1
    return float(r) ** exponent * math.fsum(
        (2.0 * math.sin(j * math.pi / r) ** 2) ** -exponent for j in range(1, r)
    )


def integrality_defect(g: int, r: int) -> float:
    """Relative distance between the double-precision sum and the exact dimension."""
    exact = verlinde_dim(g, r)
    return abs(verlinde_sum(g, r) - exact) / max(exact, 1)


def check_integrality(g: int, r: int, tolerance: float = INTEGRALITY_TOLERANCE) -> float:
    """
    Compare the double-precision sum with the exact dimension.

    Returns:
        float: the relative defect.

    Raises:
        IntegralityError: if the relative defect exceeds ``tolerance``.
    """
    defect = integrality_defect(g, r)
    if defect > tolerance:
        logger.error("Verlinde sum for g=%d, r=%d is off by %.3g (relative)", g, r, defect)
        raise IntegralityError(
            f"Verlinde sum for g={g}, r={r} deviates from {verlinde_dim(g, r)} by {defect:.3g} (relative)"
        )
    return defect


def admissible(m: int, n: int, p: int, r: int) -> bool:
    """
    Level-r fusion rule for the triple (m, n, p).

    The triple is admissible when m+n+p is odd, |m-n|+1 <= p <= m+n-1 and
    m+n+p <= 2r-1.

    Raises:
        InputError: if a label lies outside 1..r-1.
    """
    for label in (m, n, p):
        if not 1 <= label <= r - 1:
            raise InputError(f"label {label} outside 1..{r - 1} at level {r}")
    return (
        (m + n + p) % 2 == 1
        and abs(m - n) + 1 <= p <= m + n - 1
        and m + n + p <= 2 * r - 1
    )


def verlinde_table(gmax: int, rmax: int) -> Dict[Tuple[int, int], int]:
    """verlinde_dim for 1 <= g <= gmax and 2 <= r <= rmax."""
    return {
        (g, r): verlinde_dim(g, r)
        for g in range(1, gmax + 1)
        for r in range(2, rmax + 1)
    }
