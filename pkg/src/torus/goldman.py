"""
Goldman bracket of trace functions on the torus.

Curves a = (p, q) and b = (m, n) meet in |pn - qm| points of equal sign, and
resolving them gives the classes a - b and a + b, so

    {I_a, I_b} = sigma * (1/2)(pn - qm) (I_(a-b) - I_(a+b))

with the global orientation sign sigma fixed by calibration.
"""

from fractions import Fraction

from src.torus.curves import CurveObservable, FormalTraceSum


def goldman_torus(a: CurveObservable, b: CurveObservable, sigma: int = 1) -> FormalTraceSum:
    """
    Closed-form Goldman bracket on the torus.

    Raises:
        ValueError: if sigma is not +1 or -1.
    """
    if sigma not in (1, -1):
        raise ValueError(f"sigma must be +1 or -1, got {sigma}")
    weight = Fraction(sigma * a.intersection(b), 2)
    if weight == 0:
        return FormalTraceSum()
    return FormalTraceSum.from_mapping({a - b: weight, a + b: -weight})
