"""
Planar matchings: the diagram basis of the Temperley-Lieb algebra TL_n.

Points 0..n-1 lie on the bottom edge (left to right) and n..2n-1 on the top
edge, top point n+j sitting above bottom point j. Walking the boundary
bottom left-to-right then top right-to-left, a planar matching is a balanced
parenthesis string, which serves as its canonical form.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Tuple

from src.utils.errors import ResourceGuardError

MAX_STRANDS = 10


def check_strands(n: int) -> None:
    if n < 1:
        raise ValueError(f"a TL diagram needs at least one strand, got {n}")
    if n > MAX_STRANDS:
        raise ResourceGuardError(
            f"Temperley-Lieb computations are limited to {MAX_STRANDS} strands, got {n}"
        )


@dataclass(frozen=True)
class PlanarMatching:
    """Non-crossing perfect matching of 2n boundary points; ``partner[p]`` is p's mate."""

    n: int
    partner: Tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.partner) != 2 * self.n:
            raise ValueError(f"expected {2 * self.n} points, got {len(self.partner)}")
        for point, mate in enumerate(self.partner):
            if not 0 <= mate < 2 * self.n or mate == point or self.partner[mate] != point:
                raise ValueError(f"not a perfect matching at point {point}")
        if not self.is_planar():
            raise ValueError("matching is not planar")

    def boundary_position(self, point: int) -> int:
        return point if point < self.n else 3 * self.n - 1 - point

    def is_planar(self) -> bool:
        """Interleave test over all pairs of arcs."""
        arcs = []
        for point, mate in enumerate(self.partner):
            if point < mate:
                x, y = sorted((self.boundary_position(point), self.boundary_position(mate)))
                arcs.append((x, y))
        for i, (x, y) in enumerate(arcs):
            for u, v in arcs[i + 1:]:
                if x < u < y < v or u < x < v < y:
                    return False
        return True

    def to_parentheses(self) -> str:
        chars = [""] * (2 * self.n)
        for point, mate in enumerate(self.partner):
            here, there = self.boundary_position(point), self.boundary_position(mate)
            chars[here] = "(" if here < there else ")"
        return "".join(chars)

    @classmethod
    def from_parentheses(cls, text: str) -> "PlanarMatching":
        if len(text) % 2:
            raise ValueError(f"odd-length parenthesis string {text!r}")
        n = len(text) // 2

        def point_at(position: int) -> int:
            return position if position < n else 3 * n - 1 - position

        partner = [0] * (2 * n)
        stack: List[int] = []
        for position, char in enumerate(text):
            if char == "(":
                stack.append(position)
            elif char == ")":
                if not stack:
                    raise ValueError(f"unbalanced parenthesis string {text!r}")
                opening = stack.pop()
                a, b = point_at(opening), point_at(position)
                partner[a], partner[b] = b, a
            else:
                raise ValueError(f"unexpected character {char!r}")
        if stack:
            raise ValueError(f"unbalanced parenthesis string {text!r}")
        return cls(n, tuple(partner))

    @classmethod
    def identity(cls, n: int) -> "PlanarMatching":
        return cls(n, tuple(list(range(n, 2 * n)) + list(range(n))))

    @classmethod
    def cup_cap(cls, i: int, n: int) -> "PlanarMatching":
        """Diagram of e_i: bottom i-1 with i, top above them likewise, the rest vertical."""
        if not 1 <= i <= n - 1:
            raise ValueError(f"e_{i} does not exist in TL_{n}")
        partner = list(range(n, 2 * n)) + list(range(n))
        lo, hi = i - 1, i
        partner[lo], partner[hi] = hi, lo
        partner[n + lo], partner[n + hi] = n + hi, n + lo
        return cls(n, tuple(partner))

    def closure_loops(self) -> int:
        """Loops formed when each top point n+j is joined around to bottom point j."""
        n = self.n
        seen = [False] * (2 * n)
        loops = 0
        for start in range(n):
            if seen[start]:
                continue
            loops += 1
            point = start
            while True:
                seen[point] = True
                mate = self.partner[point]
                seen[mate] = True
                point = mate - n if mate >= n else mate + n
                if point == start:
                    break
        return loops


def _point_of(n: int, side: int, point: int) -> Optional[Tuple[int, int]]:
    """Glued counterpart of a middle point, or None for an outer point."""
    if side == 0 and point >= n:
        return 1, point - n
    if side == 1 and point < n:
        return 0, point + n
    return None


@lru_cache(maxsize=65536)
def compose(lower: PlanarMatching, upper: PlanarMatching) -> Tuple[PlanarMatching, int]:
    """
    Stack ``upper`` on top of ``lower``.

    Returns:
        (matching, loops): the reduced diagram and the number of closed loops
        left in the middle.
    """
    if lower.n != upper.n:
        raise ValueError(f"cannot compose TL_{lower.n} with TL_{upper.n}")
    n = lower.n
    diagrams = (lower.partner, upper.partner)
    result = [0] * (2 * n)
    visited = set()

    outer = [(0, p) for p in range(n)] + [(1, p) for p in range(n, 2 * n)]
    for start in outer:
        if start in visited:
            continue
        visited.add(start)
        side, point = start
        while True:
            mate = diagrams[side][point]
            visited.add((side, mate))
            glued = _point_of(n, side, mate)
            if glued is None:
                break
            visited.add(glued)
            side, point = glued
        result[start[1]] = mate
        result[mate] = start[1]

    loops = 0
    for j in range(n):
        start = (0, n + j)
        if start in visited:
            continue
        loops += 1
        side, point = start
        while True:
            visited.add((side, point))
            mate = diagrams[side][point]
            visited.add((side, mate))
            glued = _point_of(n, side, mate)
            assert glued is not None
            side, point = glued
            if (side, point) == start:
                break
    return PlanarMatching(n, tuple(result)), loops


def planar_basis(n: int) -> List[PlanarMatching]:
    """All Catalan(n) planar matchings, ordered by parenthesis string."""
    check_strands(n)
    words: List[str] = []

    def grow(prefix: str, opened: int, closed: int) -> None:
        if len(prefix) == 2 * n:
            words.append(prefix)
            return
        if opened < n:
            grow(prefix + "(", opened + 1, closed)
        if closed < opened:
            grow(prefix + ")", opened, closed + 1)

    grow("", 0, 0)
    return [PlanarMatching.from_parentheses(word) for word in words]
