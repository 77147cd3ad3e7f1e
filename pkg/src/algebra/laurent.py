"""
Exact Laurent polynomials with half-integer exponents.

Exponents are stored doubled, so ``t^(1/2)`` is the doubled exponent 1 and
``t^3`` is 6. The same class carries Kauffman-bracket polynomials in the
variable ``A``; there every exponent is even when doubled, since A-exponents
are integers.

Text form (used for printing and parsing, round trip exact):

    -t^(1/2) - t^(5/2)
    t + t^3 - t^4
    2*A^-3 + A
"""

import cmath
import math
import re
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, Mapping, Tuple, Union

from typing_extensions import Self

Scalar = Union[int, "HalfExpLaurent"]

_TERM = re.compile(
    r"([+-])(?:(\d+)\*?)?(?:([A-Za-z])(?:\^(?:\((-?\d+)/2\)|(-?\d+)))?)?"
)


@dataclass(frozen=True)
class HalfExpLaurent:
    """Immutable Laurent polynomial; ``terms`` is sorted by doubled exponent."""

    terms: Tuple[Tuple[int, int], ...] = ()
    variable: str = "t"

    def __post_init__(self) -> None:
        previous = None
        for exponent, coefficient in self.terms:
            if coefficient == 0:
                raise ValueError("zero coefficients are not stored")
            if previous is not None and exponent <= previous:
                raise ValueError("terms must be sorted by strictly increasing exponent")
            previous = exponent

    # construction -----------------------------------------------------

    @classmethod
    def from_mapping(cls, mapping: Mapping[int, int], variable: str = "t") -> Self:
        """Build from ``doubled exponent -> coefficient``, dropping zeros."""
        return cls(
            tuple(sorted((e, c) for e, c in mapping.items() if c != 0)),
            variable,
        )

    @classmethod
    def zero(cls, variable: str = "t") -> Self:
        return cls((), variable)

    @classmethod
    def constant(cls, value: int, variable: str = "t") -> Self:
        return cls.from_mapping({0: value}, variable)

    @classmethod
    def one(cls, variable: str = "t") -> Self:
        return cls.constant(1, variable)

    @classmethod
    def monomial(cls, doubled_exponent: int, coefficient: int = 1, variable: str = "t") -> Self:
        """``coefficient * var^(doubled_exponent/2)``."""
        return cls.from_mapping({doubled_exponent: coefficient}, variable)

    @classmethod
    def power(cls, exponent: int, coefficient: int = 1, variable: str = "t") -> Self:
        """``coefficient * var^exponent`` for an integer exponent."""
        return cls.monomial(2 * exponent, coefficient, variable)

    # inspection -------------------------------------------------------

    def as_dict(self) -> Dict[int, int]:
        return dict(self.terms)

    def __iter__(self) -> Iterator[Tuple[int, int]]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, doubled_exponent: int) -> int:
        return self.as_dict().get(doubled_exponent, 0)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    # arithmetic -------------------------------------------------------

    def _coerce(self, other: Scalar) -> "HalfExpLaurent":
        if isinstance(other, HalfExpLaurent):
            if other.variable != self.variable and not (other.is_constant() or self.is_constant()):
                raise ValueError(
                    f"cannot combine polynomials in {self.variable!r} and {other.variable!r}"
                )
            return other
        if isinstance(other, int):
            return HalfExpLaurent.constant(other, self.variable)
        return NotImplemented

    def is_constant(self) -> bool:
        return all(exponent == 0 for exponent, _ in self.terms)

    def _result_variable(self, other: "HalfExpLaurent") -> str:
        return self.variable if not self.is_constant() or other.is_constant() else other.variable

    def __add__(self, other: Scalar) -> "HalfExpLaurent":
        rhs = self._coerce(other)
        if rhs is NotImplemented:
            return NotImplemented
        acc = self.as_dict()
        for exponent, coefficient in rhs.terms:
            acc[exponent] = acc.get(exponent, 0) + coefficient
        return HalfExpLaurent.from_mapping(acc, self._result_variable(rhs))

    __radd__ = __add__

    def __neg__(self) -> "HalfExpLaurent":
        return HalfExpLaurent(tuple((e, -c) for e, c in self.terms), self.variable)

    def __sub__(self, other: Scalar) -> "HalfExpLaurent":
        rhs = self._coerce(other)
        if rhs is NotImplemented:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other: Scalar) -> "HalfExpLaurent":
        return (-self) + other

    def __mul__(self, other: Scalar) -> "HalfExpLaurent":
        rhs = self._coerce(other)
        if rhs is NotImplemented:
            return NotImplemented
        acc: Dict[int, int] = {}
        for e1, c1 in self.terms:
            for e2, c2 in rhs.terms:
                acc[e1 + e2] = acc.get(e1 + e2, 0) + c1 * c2
        return HalfExpLaurent.from_mapping(acc, self._result_variable(rhs))

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "HalfExpLaurent":
        if exponent < 0:
            if not self.is_monomial() or abs(self.terms[0][1]) != 1:
                raise ValueError("only unit monomials have Laurent inverses")
            (e, c), = self.terms
            return HalfExpLaurent.monomial(-e * -exponent, c ** -exponent, self.variable)
        result = HalfExpLaurent.one(self.variable)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    # substitutions ----------------------------------------------------

    def mirror(self) -> "HalfExpLaurent":
        """Substitute var -> var^-1."""
        return HalfExpLaurent.from_mapping({-e: c for e, c in self.terms}, self.variable)

    def a_to_t(self) -> "HalfExpLaurent":
        """
        Substitute t = A^-4 in an A-polynomial.

        A^k becomes t^(-k/4); k must be even so the result has half-integer
        t-exponents.

        Raises:
            ValueError: if some A-exponent is odd.
        """
        out: Dict[int, int] = {}
        for doubled, coefficient in self.terms:
            if doubled % 4:
                raise ValueError(f"A-exponent {doubled // 2} is odd; no t^(1/2) image")
            out[-doubled // 4] = coefficient
        return HalfExpLaurent.from_mapping(out, "t")

    def evaluate(self, half_unit: complex) -> complex:
        """Evaluate with var^(1/2) = ``half_unit``."""
        return sum(
            (c * half_unit ** e for e, c in self.terms),
            complex(0.0),
        )

    # text -------------------------------------------------------------

    def _monomial_text(self, doubled: int) -> str:
        if doubled == 0:
            return ""
        if doubled % 2:
            return f"{self.variable}^({doubled}/2)"
        exponent = doubled // 2
        return self.variable if exponent == 1 else f"{self.variable}^{exponent}"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for index, (doubled, coefficient) in enumerate(self.terms):
            body = self._monomial_text(doubled)
            magnitude = abs(coefficient)
            if not body:
                body = str(magnitude)
            elif magnitude != 1:
                body = f"{magnitude}*{body}"
            if index == 0:
                pieces.append(f"-{body}" if coefficient < 0 else body)
            else:
                pieces.append(f" - {body}" if coefficient < 0 else f" + {body}")
        return "".join(pieces)

    @classmethod
    def parse(cls, text: str, variable: str = "t") -> Self:
        """
        Parse the canonical text form.

        Raises:
            ValueError: on any unparseable fragment.
        """
        compact = "".join(text.split())
        if compact == "0":
            return cls.zero(variable)
        if not compact:
            raise ValueError("empty polynomial text")
        if compact[0] not in "+-":
            compact = "+" + compact
        acc: Dict[int, int] = {}
        seen_variable = None
        position = 0
        while position < len(compact):
            match = _TERM.match(compact, position)
            if match is None or match.end() == position + 1:
                raise ValueError(f"cannot parse polynomial near {compact[position:]!r}")
            sign, coeff, name, half, whole = match.groups()
            coefficient = int(coeff) if coeff is not None else 1
            if name is None:
                if coeff is None:
                    raise ValueError(f"dangling sign in {text!r}")
                doubled = 0
            else:
                if seen_variable not in (None, name):
                    raise ValueError(f"mixed variables {seen_variable!r} and {name!r}")
                seen_variable = name
                if half is not None:
                    doubled = int(half)
                elif whole is not None:
                    doubled = 2 * int(whole)
                else:
                    doubled = 2
            acc[doubled] = acc.get(doubled, 0) + (-coefficient if sign == "-" else coefficient)
            position = match.end()
        return cls.from_mapping(acc, seen_variable or variable)


def laurent_eval_at_root(p: HalfExpLaurent, r: int) -> complex:
    """
    Evaluate at the root of unity t = e^(2 pi i / r).

    Args:
        p: Polynomial in t (exponents in half units).
        r: Order of the root, at least 2.

    Returns:
        complex: value with t^(1/2) = e^(i pi / r).
    """
    if r < 2:
        raise ValueError(f"root order must be at least 2, got {r}")
    return p.evaluate(cmath.exp(1j * math.pi / r))


def jones_at_roots(p: HalfExpLaurent, levels: Iterable[int]) -> Dict[int, complex]:
    """Evaluate ``p`` at several roots of unity, keyed by order."""
    return {r: laurent_eval_at_root(p, r) for r in levels}


def sum_polynomials(items: Iterable[HalfExpLaurent], variable: str = "t") -> HalfExpLaurent:
    """Exact sum of an iterable of polynomials."""
    acc: Dict[int, int] = {}
    for item in items:
        for exponent, coefficient in item.terms:
            acc[exponent] = acc.get(exponent, 0) + coefficient
    return HalfExpLaurent.from_mapping(acc, variable)
