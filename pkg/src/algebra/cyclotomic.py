"""
Cyclotomic phase scalars.

A ``CycScalar`` of order M is an element of Z[x]/(x^(M/2) + 1) where x stands
for e^(2 pi i / M). Equality in this quotient implies equality of the complex
values; the converse can fail when M is not a power of two, so callers that
get a negative exact answer may fall back to ``cyc_embed`` and a tolerance.
"""

import cmath
import math
from dataclasses import dataclass
from typing import Iterator, Tuple, Union

from typing_extensions import Self


@dataclass(frozen=True)
class CycScalar:
    """Integer combination of powers of x = e^(2 pi i / order)."""

    order: int
    coeffs: Tuple[int, ...]

    def __post_init__(self) -> None:
        if self.order < 2 or self.order % 2:
            raise ValueError(f"order must be an even integer >= 2, got {self.order}")
        if len(self.coeffs) != self.order // 2:
            raise ValueError(
                f"expected {self.order // 2} coefficients for order {self.order}, "
                f"got {len(self.coeffs)}"
            )

    @classmethod
    def zero(cls, order: int) -> Self:
        return cls(order, (0,) * (order // 2))

    @classmethod
    def from_int(cls, value: int, order: int) -> Self:
        coeffs = [0] * (order // 2)
        coeffs[0] = value
        return cls(order, tuple(coeffs))

    @classmethod
    def one(cls, order: int) -> Self:
        return cls.from_int(1, order)

    @classmethod
    def root_of_unity(cls, k: int, order: int, coefficient: int = 1) -> Self:
        """``coefficient * x^k``, reduced with x^(order/2) = -1."""
        half = order // 2
        k %= order
        sign = 1
        if k >= half:
            k -= half
            sign = -1
        coeffs = [0] * half
        coeffs[k] = sign * coefficient
        return cls(order, tuple(coeffs))

    def _nonzero(self) -> Iterator[Tuple[int, int]]:
        return ((k, c) for k, c in enumerate(self.coeffs) if c)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def _check(self, other: "CycScalar") -> None:
        if other.order != self.order:
            raise ValueError(f"order mismatch: {self.order} vs {other.order}")

    def __add__(self, other: "CycScalar") -> "CycScalar":
        self._check(other)
        return CycScalar(self.order, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "CycScalar":
        return CycScalar(self.order, tuple(-a for a in self.coeffs))

    def __sub__(self, other: "CycScalar") -> "CycScalar":
        return self + (-other)

    def __mul__(self, other: Union["CycScalar", int]) -> "CycScalar":
        if isinstance(other, int):
            return CycScalar(self.order, tuple(other * a for a in self.coeffs))
        self._check(other)
        half = self.order // 2
        out = [0] * half
        for i, a in self._nonzero():
            for j, b in other._nonzero():
                k = i + j
                if k >= half:
                    out[k - half] -= a * b
                else:
                    out[k] += a * b
        return CycScalar(self.order, tuple(out))

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "CycScalar":
        if exponent < 0:
            support = list(self._nonzero())
            if len(support) != 1 or abs(support[0][1]) != 1:
                raise ValueError("only signed powers of x are invertible here")
            k, c = support[0]
            return CycScalar.root_of_unity(-k * -exponent, self.order, c ** -exponent)
        result = CycScalar.one(self.order)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def embed(self) -> complex:
        return cyc_embed(self)


def cyc_embed(s: CycScalar) -> complex:
    """Complex value sum_k coeffs[k] * e^(2 pi i k / M)."""
    return sum(
        (c * cmath.exp(2j * math.pi * k / s.order) for k, c in enumerate(s.coeffs) if c),
        complex(0.0),
    )
