"""
Temperley-Lieb algebra over Z[A, A^-1] and the Jones representation.

The product ``x * y`` stacks y on top of x; every closed loop costs a factor
delta = -A^2 - A^-2. Braid generators map to
sigma_i -> A*1 + A^-1*e_i and sigma_i^-1 -> A^-1*1 + A*e_i.
"""

import logging
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Dict, Mapping

from src.algebra.laurent import HalfExpLaurent
from src.knots.bracket import loop_value
from src.knots.diagram import BraidWord
from src.temperley_lieb.matching import PlanarMatching, check_strands, compose

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TLElement:
    """Finite combination of planar matchings with A-polynomial coefficients."""

    n: int
    terms: Mapping[PlanarMatching, HalfExpLaurent] = field(default_factory=dict)

    def __post_init__(self) -> None:
        nonzero = {m: c for m, c in self.terms.items() if not c.is_zero()}
        object.__setattr__(self, "terms", MappingProxyType(nonzero))
        for matching in self.terms:
            if matching.n != self.n:
                raise ValueError(f"matching on {matching.n} strands in a TL_{self.n} element")

    @classmethod
    def from_matching(cls, matching: PlanarMatching, coefficient: HalfExpLaurent) -> "TLElement":
        return cls(matching.n, {matching: coefficient})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TLElement):
            return NotImplemented
        return self.n == other.n and dict(self.terms) == dict(other.terms)

    def __hash__(self) -> int:
        return hash((self.n, frozenset(self.terms.items())))

    def __add__(self, other: "TLElement") -> "TLElement":
        self._check(other)
        acc = dict(self.terms)
        for matching, coefficient in other.terms.items():
            acc[matching] = acc[matching] + coefficient if matching in acc else coefficient
        return TLElement(self.n, acc)

    def __sub__(self, other: "TLElement") -> "TLElement":
        return self + other.scale(HalfExpLaurent.constant(-1, "A"))

    def scale(self, factor: HalfExpLaurent) -> "TLElement":
        return TLElement(self.n, {m: _as_a(c * factor) for m, c in self.terms.items()})

    def __mul__(self, other: "TLElement") -> "TLElement":
        return tl_mul(self, other)

    def _check(self, other: "TLElement") -> None:
        if other.n != self.n:
            raise ValueError(f"TL_{self.n} and TL_{other.n} elements do not combine")

    def is_zero(self) -> bool:
        return not self.terms

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        ordered = sorted(self.terms.items(), key=lambda item: item[0].to_parentheses())
        return " + ".join(f"({coefficient}){m.to_parentheses()}" for m, coefficient in ordered)


def _as_a(value: HalfExpLaurent) -> HalfExpLaurent:
    return HalfExpLaurent(value.terms, "A")


_DELTA_POWERS: Dict[int, HalfExpLaurent] = {}


def _delta_power(loops: int) -> HalfExpLaurent:
    if loops not in _DELTA_POWERS:
        _DELTA_POWERS[loops] = loop_value() ** loops
    return _DELTA_POWERS[loops]


def tl_mul(x: TLElement, y: TLElement) -> TLElement:
    """
    Diagrammatic product, x below y.

    Raises:
        ValueError: if the strand counts differ.
    """
    x._check(y)
    acc: Dict[PlanarMatching, HalfExpLaurent] = {}
    for lower, a in x.terms.items():
        for upper, b in y.terms.items():
            matching, loops = compose(lower, upper)
            contribution = a * b * _delta_power(loops)
            acc[matching] = acc[matching] + contribution if matching in acc else contribution
    return TLElement(x.n, {m: _as_a(c) for m, c in acc.items()})


def identity(n: int) -> TLElement:
    check_strands(n)
    return TLElement.from_matching(PlanarMatching.identity(n), HalfExpLaurent.one("A"))


def generator(i: int, n: int) -> TLElement:
    """The cup-cap generator e_i of TL_n."""
    check_strands(n)
    return TLElement.from_matching(PlanarMatching.cup_cap(i, n), HalfExpLaurent.one("A"))


def letter_image(index: int, sign: int, n: int) -> TLElement:
    a = HalfExpLaurent.power(1, 1, "A")
    a_inverse = HalfExpLaurent.power(-1, 1, "A")
    unit, cup = (a, a_inverse) if sign > 0 else (a_inverse, a)
    return identity(n).scale(unit) + generator(index, n).scale(cup)


def braid_to_tl(braid: BraidWord) -> TLElement:
    """Product of the letter images, first letter at the bottom."""
    check_strands(braid.strands)
    result = identity(braid.strands)
    for index, sign in braid.letters:
        result = result * letter_image(index, sign, braid.strands)
    logger.debug("braid of length %d expands to %d diagrams", len(braid), len(result.terms))
    return result


def closure_trace(x: TLElement) -> HalfExpLaurent:
    """Sum of coefficient * delta^(loops - 1) over the closures of the diagrams."""
    total = HalfExpLaurent.zero("A")
    for matching, coefficient in x.terms.items():
        total = total + coefficient * _delta_power(matching.closure_loops() - 1)
    return _as_a(total)


def markov_trace_jones(braid: BraidWord) -> HalfExpLaurent:
    """Jones polynomial of the braid closure from the normalised closure trace."""
    w = braid.exponent_sum()
    normalisation = HalfExpLaurent.power(-3 * w, -1 if w % 2 else 1, "A")
    return (normalisation * closure_trace(braid_to_tl(braid))).a_to_t()
