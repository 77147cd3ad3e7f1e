"""
Levels, torus curves and formal sums of trace functions.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, Tuple

from src.utils.errors import InputError


@dataclass(frozen=True)
class Level:
    """Quantisation level r with hbar = 1/(2r)."""

    r: int

    def __post_init__(self) -> None:
        if self.r < 2:
            raise InputError(f"level must be at least 2, got {self.r}")

    @property
    def hbar(self) -> Fraction:
        return Fraction(1, 2 * self.r)

    @property
    def dimension(self) -> int:
        return self.r - 1

    @property
    def phase_order(self) -> int:
        """Order 4r of the root of unity x = e^(i pi / 2r) carrying all phases."""
        return 4 * self.r


@dataclass(frozen=True, order=True)
class CurveObservable:
    """
    Torus curve of slope p/q, identified with its reverse (-p, -q).

    The constructor always stores the canonical representative: p > 0, or
    p == 0 and q >= 0.
    """

    p: int
    q: int

    def __post_init__(self) -> None:
        if self.p < 0 or (self.p == 0 and self.q < 0):
            object.__setattr__(self, "p", -self.p)
            object.__setattr__(self, "q", -self.q)

    @classmethod
    def parse(cls, text: str) -> "CurveObservable":
        """Parse ``"p,q"``."""
        try:
            p, q = (int(part) for part in text.split(","))
        except ValueError:
            raise InputError(f"expected a curve as 'p,q', got {text!r}")
        return cls(p, q)

    def __add__(self, other: "CurveObservable") -> "CurveObservable":
        return CurveObservable(self.p + other.p, self.q + other.q)

    def __sub__(self, other: "CurveObservable") -> "CurveObservable":
        return CurveObservable(self.p - other.p, self.q - other.q)

    def intersection(self, other: "CurveObservable") -> int:
        """Algebraic intersection number p*n - q*m with other = (m, n)."""
        return self.p * other.q - self.q * other.p

    def multiplicity(self) -> int:
        """d = gcd(p, q); the curve is d parallel copies of a primitive one."""
        return math.gcd(self.p, self.q)

    def primitive(self) -> "CurveObservable":
        d = self.multiplicity()
        return self if d <= 1 else CurveObservable(self.p // d, self.q // d)

    def __str__(self) -> str:
        return f"({self.p},{self.q})"


@dataclass(frozen=True)
class FormalTraceSum:
    """Finite rational combination of trace functions I_c."""

    terms: Tuple[Tuple[CurveObservable, Fraction], ...] = field(default=())

    @classmethod
    def from_mapping(cls, mapping: Dict[CurveObservable, Fraction]) -> "FormalTraceSum":
        merged: Dict[CurveObservable, Fraction] = {}
        for curve, coefficient in mapping.items():
            merged[curve] = merged.get(curve, Fraction(0)) + coefficient
        return cls(tuple(sorted((c, v) for c, v in merged.items() if v != 0)))

    def __iter__(self) -> Iterator[Tuple[CurveObservable, Fraction]]:
        return iter(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __neg__(self) -> "FormalTraceSum":
        return FormalTraceSum(tuple((c, -v) for c, v in self.terms))

    def as_dict(self) -> Dict[CurveObservable, Fraction]:
        return dict(self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({coefficient})I{curve}" for curve, coefficient in self.terms)
