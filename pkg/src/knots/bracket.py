"""
Kauffman bracket of PD diagrams.

Two algorithms produce identical polynomials in A:

* ``kauffman_bracket`` sums over all 2^n smoothing states.
* ``kauffman_bracket_memoized`` adds crossings one at a time and merges
  partial states that leave the same boundary matching.

Conventions: the A-smoothing of (a, b, c, d) joins a-b and c-d, the
B-smoothing joins a-d and b-c, loop value delta = -A^2 - A^-2 and the empty
diagram normalises to 1.
"""

import logging
from collections import Counter, defaultdict
from typing import Dict, FrozenSet, List, Tuple

from src.algebra.laurent import HalfExpLaurent
from src.knots.diagram import Crossing, PDCode
from src.utils.errors import ResourceGuardError

logger = logging.getLogger(__name__)

MAX_STATE_SUM_CROSSINGS = 24

StateKey = FrozenSet[Tuple[int, int]]


def loop_value() -> HalfExpLaurent:
    """delta = -A^2 - A^-2."""
    return HalfExpLaurent.from_mapping({4: -1, -4: -1}, "A")


def _assemble(counts: Dict[Tuple[int, int], int], free_loops: int) -> HalfExpLaurent:
    """Sum count * A^sigma * delta^(loops + free_loops - 1)."""
    delta = loop_value()
    total = HalfExpLaurent.zero("A")
    powers: Dict[int, HalfExpLaurent] = {}
    for (sigma, loops), count in counts.items():
        exponent = loops + free_loops - 1
        if exponent not in powers:
            powers[exponent] = delta ** exponent
        total = total + HalfExpLaurent.power(sigma, count, "A") * powers[exponent]
    return HalfExpLaurent(total.terms, "A")


def _empty_bracket(code: PDCode) -> HalfExpLaurent:
    if code.free_loops == 0:
        return HalfExpLaurent.one("A")
    return loop_value() ** (code.free_loops - 1)


def kauffman_bracket(code: PDCode) -> HalfExpLaurent:
    """
    State-sum Kauffman bracket.

    Raises:
        ResourceGuardError: above 24 crossings.
    """
    n = len(code.crossings)
    if n > MAX_STATE_SUM_CROSSINGS:
        raise ResourceGuardError(
            f"state sum limited to {MAX_STATE_SUM_CROSSINGS} crossings, diagram has {n}; "
            "use the memoized algorithm"
        )
    if n == 0:
        return _empty_bracket(code)

    index = {label: i for i, label in enumerate(code.labels())}
    smoothings = []
    for a, b, c, d in code.crossings:
        smoothings.append(
            (
                ((index[a], index[b]), (index[c], index[d])),
                ((index[a], index[d]), (index[b], index[c])),
            )
        )

    counts: Counter = Counter()
    size = len(index)
    for state in range(1 << n):
        parent = list(range(size))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        b_count = 0
        for bit, (a_pairs, b_pairs) in enumerate(smoothings):
            if state >> bit & 1:
                pairs = b_pairs
                b_count += 1
            else:
                pairs = a_pairs
            for u, v in pairs:
                ru, rv = find(u), find(v)
                if ru != rv:
                    parent[ru] = rv
        loops = sum(1 for x in range(size) if find(x) == x)
        counts[(n - 2 * b_count, loops)] += 1

    logger.debug("state sum over %d states finished", 1 << n)
    return _assemble(counts, code.free_loops)


def _join(partner: Dict[int, int], u: int, v: int) -> int:
    """Connect arc ends u and v in the partial matching; returns closed loops."""
    if u == v:
        return 1
    pu = partner.pop(u, None)
    pv = partner.pop(v, None)
    if pu is None and pv is None:
        partner[u] = v
        partner[v] = u
        return 0
    if pu is None:
        partner[pv] = u
        partner[u] = pv
        return 0
    if pv is None:
        partner[pu] = v
        partner[v] = pu
        return 0
    if pu == v:
        return 1
    partner[pu] = pv
    partner[pv] = pu
    return 0


def _crossing_order(crossings: Tuple[Crossing, ...]) -> List[int]:
    """Greedy order keeping the boundary of the processed region small."""
    remaining = set(range(len(crossings)))
    order: List[int] = []
    open_labels: Counter = Counter()
    while remaining:
        best = max(
            remaining,
            key=lambda i: (sum(1 for label in crossings[i] if open_labels[label]), -i),
        )
        remaining.remove(best)
        order.append(best)
        for label in crossings[best]:
            open_labels[label] += 1
            if open_labels[label] == 2:
                del open_labels[label]
    return order


def kauffman_bracket_memoized(code: PDCode) -> HalfExpLaurent:
    """
    Kauffman bracket by dynamic programming over boundary matchings.

    Partial states are keyed by how their open arc ends are paired up, so
    states with equal keys merge and only their (A-exponent, loop count)
    tallies are carried forward.
    """
    if not code.crossings:
        return _empty_bracket(code)

    states: Dict[StateKey, Counter] = {frozenset(): Counter({(0, 0): 1})}
    for position in _crossing_order(code.crossings):
        a, b, c, d = code.crossings[position]
        merged: Dict[StateKey, Counter] = defaultdict(Counter)
        for key, tally in states.items():
            for pairs, shift in ((((a, b), (c, d)), 1), (((a, d), (b, c)), -1)):
                partner: Dict[int, int] = {}
                for x, y in key:
                    partner[x] = y
                    partner[y] = x
                closed = sum(_join(partner, u, v) for u, v in pairs)
                new_key = frozenset((x, y) for x, y in partner.items() if x < y)
                target = merged[new_key]
                for (sigma, loops), count in tally.items():
                    target[(sigma + shift, loops + closed)] += count
        states = dict(merged)
        logger.debug("after crossing %d: %d boundary states", position + 1, len(states))

    final = states.get(frozenset())
    if final is None or len(states) != 1:
        raise RuntimeError("open arc ends left after processing every crossing")
    return _assemble(final, code.free_loops)


def bracket(code: PDCode, method: str = "state-sum") -> HalfExpLaurent:
    """Dispatch on ``method``: ``state-sum`` or ``memoized``."""
    if method == "state-sum":
        return kauffman_bracket(code)
    if method == "memoized":
        return kauffman_bracket_memoized(code)
    raise ValueError(f"unknown bracket method {method!r}")
