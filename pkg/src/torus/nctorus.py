"""
The noncommutative torus at level r, with exact cyclotomic coefficients.

Elements are finite sums of c_ab U^a V^b with c_ab in Z[x]/(x^(2r) + 1),
x = e^(i pi / 2r). Monomials multiply by

    (U^a V^b)(U^p V^q) = omega^(b p) U^(a+p) V^(b+q),  omega = x^(2s),

so V U = omega U V = e^(s 2 pi i hbar) U V for the commutation sign s.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional, Tuple

from src.algebra.cyclotomic import CycScalar
from src.torus.curves import CurveObservable, Level

logger = logging.getLogger(__name__)

Exponent = Tuple[int, int]


@dataclass(frozen=True)
class NCTorusElement:
    """Finitely supported map (a, b) -> CycScalar of order 4r; zeros are dropped."""

    r: int
    s: int
    terms: Tuple[Tuple[Exponent, CycScalar], ...] = field(default=())

    def __post_init__(self) -> None:
        if self.s not in (1, -1):
            raise ValueError(f"commutation sign must be +1 or -1, got {self.s}")
        order = Level(self.r).phase_order
        for _, coefficient in self.terms:
            if coefficient.order != order:
                raise ValueError(f"coefficient of order {coefficient.order}, expected {order}")

    @classmethod
    def from_mapping(cls, r: int, s: int, mapping: Dict[Exponent, CycScalar]) -> "NCTorusElement":
        return cls(r, s, tuple(sorted((e, c) for e, c in mapping.items() if not c.is_zero())))

    @classmethod
    def monomial(
        cls, r: int, s: int, a: int, b: int, coefficient: Optional[CycScalar] = None
    ) -> "NCTorusElement":
        """coefficient * U^a V^b (coefficient defaults to 1)."""
        value = coefficient if coefficient is not None else CycScalar.one(4 * r)
        return cls.from_mapping(r, s, {(a, b): value})

    @classmethod
    def scalar(cls, r: int, s: int, value: CycScalar) -> "NCTorusElement":
        return cls.monomial(r, s, 0, 0, value)

    @property
    def order(self) -> int:
        return 4 * self.r

    def as_dict(self) -> Dict[Exponent, CycScalar]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "NCTorusElement") -> None:
        if (other.r, other.s) != (self.r, self.s):
            raise ValueError(
                f"level/sign mismatch: (r={self.r}, s={self.s}) vs (r={other.r}, s={other.s})"
            )

    def __add__(self, other: "NCTorusElement") -> "NCTorusElement":
        self._check(other)
        acc = self.as_dict()
        for exponent, coefficient in other.terms:
            acc[exponent] = acc[exponent] + coefficient if exponent in acc else coefficient
        return NCTorusElement.from_mapping(self.r, self.s, acc)

    def __neg__(self) -> "NCTorusElement":
        return NCTorusElement(self.r, self.s, tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other: "NCTorusElement") -> "NCTorusElement":
        return self + (-other)

    def scale(self, factor: CycScalar) -> "NCTorusElement":
        return NCTorusElement.from_mapping(self.r, self.s, {e: c * factor for e, c in self.terms})

    def __mul__(self, other: "NCTorusElement") -> "NCTorusElement":
        return nc_mul(self, other)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{list(c.coeffs)}*U^{a}V^{b}" for (a, b), c in self.terms)


def omega(r: int, s: int) -> CycScalar:
    """e^(s 2 pi i hbar) = x^(2s)."""
    return CycScalar.root_of_unity(2 * s, 4 * r)


def nc_mul(x: NCTorusElement, y: NCTorusElement) -> NCTorusElement:
    """
    Product in the noncommutative torus.

    Raises:
        ValueError: if the levels or commutation signs differ.
    """
    x._check(y)
    order = x.order
    acc: Dict[Exponent, CycScalar] = {}
    for (a, b), c1 in x.terms:
        for (p, q), c2 in y.terms:
            twist = CycScalar.root_of_unity(2 * x.s * b * p, order)
            value = c1 * c2 * twist
            key = (a + p, b + q)
            acc[key] = acc[key] + value if key in acc else value
    return NCTorusElement.from_mapping(x.r, x.s, acc)


def phi(curve: CurveObservable, r: int, s: int) -> NCTorusElement:
    """
    e^(-pi i hbar pq) (U^p V^q + U^-p V^-q), the image of the trace function I_(p,q).
    """
    p, q = curve.p, curve.q
    order = Level(r).phase_order
    prefactor = CycScalar.root_of_unity(-p * q, order)
    acc: Dict[Exponent, CycScalar] = {(p, q): prefactor}
    acc[(-p, -q)] = acc[(-p, -q)] + prefactor if (-p, -q) in acc else prefactor
    return NCTorusElement.from_mapping(r, s, acc)


def phi_product_residual(m: int, n: int, p: int, q: int, r: int, c: Fraction, s: int) -> NCTorusElement:
    """
    phi(m,n) phi(p,q) - x^(2ck) phi(m+p,n+q) - x^(-2ck) phi(m-p,n-q), k = mq - np.
    """
    twice_c = 2 * Fraction(c)
    if twice_c.denominator != 1:
        raise ValueError(f"phase coefficient {c} is not a half-integer")
    k = m * q - n * p
    order = Level(r).phase_order
    lhs = phi(CurveObservable(m, n), r, s) * phi(CurveObservable(p, q), r, s)
    rhs = phi(CurveObservable(m + p, n + q), r, s).scale(
        CycScalar.root_of_unity(int(twice_c) * k, order)
    ) + phi(CurveObservable(m - p, n - q), r, s).scale(
        CycScalar.root_of_unity(-int(twice_c) * k, order)
    )
    return lhs - rhs


def phi_product_check(
    m: int, n: int, p: int, q: int, r: int, c: Fraction, s: int, tolerance: float = 1e-10
) -> bool:
    """
    Product-to-sum identity for phi, exact in the quotient ring.

    A nonzero quotient-ring residual can still vanish in C when 4r is not a
    power of two, so it is re-checked numerically at ``tolerance``.
    """
    residual = phi_product_residual(m, n, p, q, r, c, s)
    if residual.is_zero():
        return True
    numeric = max(abs(coefficient.embed()) for _, coefficient in residual.terms)
    if numeric < tolerance:
        logger.warning(
            "phi identity (%d,%d)(%d,%d) at r=%d holds only numerically (%.3g)", m, n, p, q, r, numeric
        )
        return True
    return False
