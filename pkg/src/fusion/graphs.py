"""
Trivalent spine graphs and their admissible colorings.

Graph file format: one ``e v1 v2`` line per edge with 0-based vertex ids,
``e v v`` for a loop and ``#`` comments.
"""

import logging
from collections import deque
from dataclasses import dataclass
from typing import Callable, Dict, List, Tuple

from src.fusion.verlinde import admissible
from src.utils.errors import GraphFormatError, InputError

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]
Coloring = Tuple[int, ...]

SPINE_KINDS = ("chain", "dumbbell")


@dataclass(frozen=True)
class TrivalentGraph:
    """Multigraph with loops in which every vertex has degree three."""

    vertices: int
    edges: Tuple[Edge, ...]

    def __post_init__(self) -> None:
        degree = [0] * self.vertices
        for u, v in self.edges:
            if not (0 <= u < self.vertices and 0 <= v < self.vertices):
                raise GraphFormatError(f"edge ({u}, {v}) uses a vertex outside 0..{self.vertices - 1}")
            degree[u] += 1
            degree[v] += 1
        bad = [v for v, d in enumerate(degree) if d != 3]
        if bad:
            raise GraphFormatError(f"vertices {bad} do not have degree 3")

    def incident(self, vertex: int) -> List[int]:
        """Edge indices at ``vertex``; a loop is listed twice."""
        slots = []
        for index, (u, v) in enumerate(self.edges):
            if u == vertex:
                slots.append(index)
            if v == vertex:
                slots.append(index)
        return slots

    def genus(self) -> int:
        """First Betti number: the genus of the surface this graph is a spine of."""
        return len(self.edges) - self.vertices + self._components()

    def _components(self) -> int:
        parent = list(range(self.vertices))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in self.edges:
            parent[find(u)] = find(v)
        return len({find(v) for v in range(self.vertices)})


def spine_graph(g: int, kind: str = "chain") -> TrivalentGraph:
    """
    Canonical trivalent spine of the closed genus-g surface.

    ``chain`` joins g-1 theta blocks (two vertices with a double edge) in a
    ring; at g = 2 this is the theta graph. ``dumbbell`` puts a loop at both
    ends of a line of double edges joined by bridges.

    Raises:
        InputError: if g < 2 or the kind is unknown.
    """
    if g < 2:
        raise InputError(f"spine graphs need genus at least 2, got {g}")
    edges: List[Edge] = []
    if kind == "chain":
        blocks = g - 1
        for k in range(blocks):
            u, w = 2 * k, 2 * k + 1
            edges.extend([(u, w), (u, w)])
        # a ring, not a line: the last block links back to the first so every vertex is trivalent
        for k in range(blocks):
            edges.append((2 * k + 1, (2 * k + 2) % (2 * blocks)))
    elif kind == "dumbbell":
        last = 2 * g - 3
        edges.append((0, 0))
        previous = 0
        for k in range(g - 2):
            a, b = 2 * k + 1, 2 * k + 2
            edges.append((previous, a))
            edges.extend([(a, b), (a, b)])
            previous = b
        edges.append((previous, last))
        edges.append((last, last))
    else:
        raise InputError(f"unknown spine kind {kind!r}; expected one of {SPINE_KINDS}")
    return TrivalentGraph(2 * g - 2, tuple(edges))


def parse_graph(text: str) -> TrivalentGraph:
    """
    Parse the graph file format.

    Raises:
        GraphFormatError: on malformed lines or a vertex of degree other than 3.
    """
    edges: List[Edge] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if fields[0] != "e" or len(fields) != 3:
            raise GraphFormatError(f"line {number}: expected 'e v1 v2', got {raw.strip()!r}")
        try:
            u, v = int(fields[1]), int(fields[2])
        except ValueError:
            raise GraphFormatError(f"line {number}: vertex ids must be integers")
        if u < 0 or v < 0:
            raise GraphFormatError(f"line {number}: vertex ids are 0-based")
        edges.append((u, v))
    if not edges:
        raise GraphFormatError("graph has no edges")
    vertices = max(max(u, v) for u, v in edges) + 1
    return TrivalentGraph(vertices, tuple(edges))


def format_graph(graph: TrivalentGraph) -> str:
    return "".join(f"e {u} {v}\n" for u, v in graph.edges)


def _edge_order(graph: TrivalentGraph) -> List[int]:
    """Edges in breadth-first order from vertex 0."""
    order: List[int] = []
    placed = [False] * len(graph.edges)
    seen = [False] * graph.vertices
    for root in range(graph.vertices):
        if seen[root]:
            continue
        seen[root] = True
        queue = deque([root])
        while queue:
            vertex = queue.popleft()
            for index in graph.incident(vertex):
                if placed[index]:
                    continue
                placed[index] = True
                order.append(index)
                u, v = graph.edges[index]
                other = v if u == vertex else u
                if not seen[other]:
                    seen[other] = True
                    queue.append(other)
    return order


def _search(graph: TrivalentGraph, r: int, visit: Callable[[Coloring], None]) -> None:
    if r < 2:
        raise InputError(f"level must be at least 2, got {r}")
    order = _edge_order(graph)
    position = {edge: step for step, edge in enumerate(order)}
    completes: Dict[int, List[Tuple[int, int, int]]] = {}
    for vertex in range(graph.vertices):
        slots = graph.incident(vertex)
        step = max(position[e] for e in slots)
        completes.setdefault(step, []).append((slots[0], slots[1], slots[2]))

    labels = [0] * len(graph.edges)

    def extend(step: int) -> None:
        if step == len(order):
            visit(tuple(labels))
            return
        edge = order[step]
        for label in range(1, r):
            labels[edge] = label
            if all(
                admissible(labels[a], labels[b], labels[c], r)
                for a, b, c in completes.get(step, ())
            ):
                extend(step + 1)
        labels[edge] = 0

    extend(0)


def enumerate_colorings(graph: TrivalentGraph, r: int) -> List[Coloring]:
    """All admissible colorings as label tuples indexed by edge, in search order."""
    found: List[Coloring] = []
    _search(graph, r, found.append)
    return found


def count_colorings(graph: TrivalentGraph, r: int) -> int:
    """Number of admissible colorings at level r."""
    total = [0]

    def tally(_: Coloring) -> None:
        total[0] += 1

    _search(graph, r, tally)
    logger.debug("%d admissible colorings of a %d-edge graph at r=%d", total[0], len(graph.edges), r)
    return total[0]
