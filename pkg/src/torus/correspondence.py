"""
Correspondence-principle check: commutators of C(p,q) against the Goldman bracket.

E(r) = || (1/(i hbar)) [C_a, C_b] - kappa * op(goldman(a, b)) ||_max

with one global kappa and sign sigma. kappa is fitted on a ladder of levels
r0 * 2^i and extrapolated to hbar -> 0 with repeated Aitken acceleration, so
the reported errors measure the quantisation defect rather than a fitting
artefact at one level.

With the extrapolated kappa the leading hbar term cancels and E(r) falls as
hbar^2, a log-log slope near -2. A slope in the nominal band [-1.3, -0.7]
would mean an O(hbar) residual. The pass rule only bounds the slope from
above; ``in_nominal_band`` reports which regime was measured.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from src.algebra.matrices import ComplexMatrix, max_abs
from src.torus.curves import CurveObservable
from src.torus.goldman import goldman_torus
from src.torus.operators import commutator, op

logger = logging.getLogger(__name__)

CurvePair = Tuple[CurveObservable, CurveObservable]

REFERENCE_PAIRS: Tuple[CurvePair, ...] = tuple(
    (CurveObservable(*a), CurveObservable(*b))
    for a, b in (
        ((1, 0), (0, 1)),
        ((1, 0), (1, 1)),
        ((1, 1), (1, -1)),
        ((2, 1), (1, 1)),
        ((1, 2), (2, 1)),
        ((2, 0), (0, 1)),
    )
)

KAPPA_BASE_LEVEL = 8
DECAY_RATIO_LIMIT = 0.6
SLOPE_LIMIT = -0.7
NOMINAL_SLOPE_BAND = (-1.3, -0.7)


@dataclass(frozen=True)
class DecayRow:
    r: int
    error: float


def scaled_commutator(a: CurveObservable, b: CurveObservable, r: int) -> ComplexMatrix:
    """(1/(i hbar)) [C_a, C_b] with hbar = 1/(2r)."""
    return -2j * r * commutator(a, b, r)


def raw_ratio(pairs: Sequence[CurvePair], r: int) -> float:
    """Pooled least-squares ratio of the scaled commutators to op(goldman) with sigma = +1."""
    numerator = 0.0
    denominator = 0.0
    for a, b in pairs:
        lhs = scaled_commutator(a, b, r)
        rhs = op(goldman_torus(a, b, 1), r)
        numerator += float(np.vdot(rhs, lhs).real)
        denominator += float(np.vdot(rhs, rhs).real)
    if denominator == 0.0:
        raise ValueError(f"every reference bracket vanishes at r={r}")
    return numerator / denominator


def aitken(sequence: Sequence[float]) -> List[float]:
    """One pass of Aitken's delta-squared acceleration."""
    accelerated = []
    for s0, s1, s2 in zip(sequence, sequence[1:], sequence[2:]):
        second = (s2 - s1) - (s1 - s0)
        if abs(second) <= 1e-15 * max(abs(s2), 1.0):
            accelerated.append(s2)
        else:
            accelerated.append(s2 - (s2 - s1) ** 2 / second)
    return accelerated


def fit_kappa(
    pairs: Sequence[CurvePair] = REFERENCE_PAIRS,
    r0: int = KAPPA_BASE_LEVEL,
    ladder: int = 5,
) -> Tuple[float, int]:
    """
    Fit the symplectic normalisation kappa and the orientation sign sigma.

    Returns:
        (kappa, sigma): kappa > 0 extrapolated to hbar -> 0, sigma the sign of
        the raw ratio.
    """
    if ladder < 1:
        raise ValueError("the kappa ladder needs at least one level")
    levels = [r0 * 2 ** i for i in range(ladder)]
    ratios = [raw_ratio(pairs, r) for r in levels]
    sigma = 1 if ratios[-1] > 0 else -1
    estimates = [abs(value) for value in ratios]
    logger.debug("kappa ladder %s -> %s", levels, estimates)
    while len(estimates) >= 3:
        estimates = aitken(estimates)
    kappa = estimates[-1]
    logger.info("Fitted kappa = %.12g, sigma = %+d on levels %s", kappa, sigma, levels)
    return kappa, sigma


def correspondence_error(a: CurveObservable, b: CurveObservable, r: int, kappa: float, sigma: int) -> float:
    return max_abs(scaled_commutator(a, b, r) - kappa * op(goldman_torus(a, b, sigma), r))


def correspondence_check(
    a: CurveObservable, b: CurveObservable, r_list: Sequence[int], kappa: float, sigma: int
) -> List[DecayRow]:
    """
    E(r) for each level of ``r_list``.

    Raises:
        ValueError: if ``r_list`` is not ascending.
    """
    if list(r_list) != sorted(set(r_list)):
        raise ValueError(f"levels must be strictly ascending, got {list(r_list)}")
    rows = [DecayRow(r, correspondence_error(a, b, r, kappa, sigma)) for r in r_list]
    for row in rows:
        logger.debug("correspondence %s,%s at r=%d: E=%.3g", a, b, row.r, row.error)
    return rows


def decay_ratios(rows: Sequence[DecayRow]) -> List[float]:
    """E(r_{i+1}) / E(r_i); pairs with E(r_i) == 0 are skipped."""
    return [
        later.error / earlier.error
        for earlier, later in zip(rows, rows[1:])
        if earlier.error > 0.0
    ]


def loglog_slope(rows: Sequence[DecayRow]) -> float:
    """Least-squares slope of log E against log r; nan if some error is zero."""
    if len(rows) < 2 or any(row.error <= 0.0 for row in rows):
        return math.nan
    x = np.log([row.r for row in rows])
    y = np.log([row.error for row in rows])
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


def in_nominal_band(slope: float, band: Tuple[float, float] = NOMINAL_SLOPE_BAND) -> bool:
    """True when ``slope`` lies in the linear-in-hbar band; False for nan."""
    low, high = band
    return low <= slope <= high


def decays(
    rows: Sequence[DecayRow], ratio_limit: float = DECAY_RATIO_LIMIT, slope_limit: float = SLOPE_LIMIT
) -> bool:
    """
    True when every ratio E(r_{i+1}) / E(r_i) is at most ``ratio_limit`` and the
    log-log slope is at most ``slope_limit``. A vanishing error counts as decay.
    """
    if any(ratio > ratio_limit for ratio in decay_ratios(rows)):
        return False
    slope = loglog_slope(rows)
    return math.isnan(slope) or slope <= slope_limit
