"""
Knot and link diagrams: planar diagram (PD) codes and braid words.

PD convention: each crossing is ``(a, b, c, d)``, the four arc labels read
counterclockwise starting from the incoming under-strand, so the under-strand
runs a -> c. Arc labels are consecutive integers along each component and the
successor of the last label of a component is its first. Crossing signs come
from this orientation: the crossing is positive when the over-strand runs
d -> b.

PD file format::

    # trefoil
    comp 1 1 6
    X 1 5 2 4
    ...

``comp k first last`` declares the arc range of component k. A bare
``comp k`` followed by crossing lines takes its range from the arcs those
crossings use; followed by none it declares a crossingless unknotted
component. Without any ``comp`` line the arcs form a single component.

Braid text format: ``n=3 +1 -2 +1`` where ``+i`` is sigma_i and ``-i`` its
inverse.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from src.utils.errors import BraidFormatError, PDFormatError

logger = logging.getLogger(__name__)

Crossing = Tuple[int, int, int, int]
Letter = Tuple[int, int]


@dataclass(frozen=True)
class BraidWord:
    """Word in the braid group B_n; each letter (i, e) is sigma_i^e."""

    strands: int
    letters: Tuple[Letter, ...] = ()

    def __post_init__(self) -> None:
        if self.strands < 1:
            raise BraidFormatError(f"a braid needs at least one strand, got {self.strands}")
        for index, sign in self.letters:
            if not 1 <= index <= self.strands - 1:
                raise BraidFormatError(
                    f"generator sigma_{index} out of range for {self.strands} strands"
                )
            if sign not in (1, -1):
                raise BraidFormatError(f"letter exponent must be +1 or -1, got {sign}")

    @classmethod
    def from_ints(cls, strands: int, word: Iterable[int]) -> "BraidWord":
        """Build from signed generator indices, e.g. ``[1, -2, 1]``."""
        letters = []
        for value in word:
            if value == 0:
                raise BraidFormatError("generator index 0 does not exist")
            letters.append((abs(value), 1 if value > 0 else -1))
        return cls(strands, tuple(letters))

    def as_ints(self) -> List[int]:
        return [index * sign for index, sign in self.letters]

    def exponent_sum(self) -> int:
        return sum(sign for _, sign in self.letters)

    def permutation(self) -> List[int]:
        """Where the strand starting at each position ends up."""
        position_of = list(range(self.strands))
        strand_at = list(range(self.strands))
        for index, _ in self.letters:
            p = index - 1
            strand_at[p], strand_at[p + 1] = strand_at[p + 1], strand_at[p]
        for position, strand in enumerate(strand_at):
            position_of[strand] = position
        return position_of

    def cycle_count(self) -> int:
        perm = self.permutation()
        seen = [False] * self.strands
        cycles = 0
        for start in range(self.strands):
            if seen[start]:
                continue
            cycles += 1
            current = start
            while not seen[current]:
                seen[current] = True
                current = perm[current]
        return cycles

    def mirror(self) -> "BraidWord":
        return BraidWord(self.strands, tuple((i, -e) for i, e in self.letters))

    def stabilize(self, sign: int = 1) -> "BraidWord":
        """Markov stabilisation b -> b sigma_n^sign in B_{n+1}."""
        return BraidWord(self.strands + 1, self.letters + ((self.strands, sign),))

    def conjugate(self, shift: int = 1) -> "BraidWord":
        """Cyclic rotation of the word (conjugation by its first letters)."""
        if not self.letters:
            return self
        shift %= len(self.letters)
        return BraidWord(self.strands, self.letters[shift:] + self.letters[:shift])

    def __len__(self) -> int:
        return len(self.letters)


def parse_braid(text: str) -> BraidWord:
    """
    Parse the braid text format.

    Raises:
        BraidFormatError: on unknown tokens or out-of-range generators.
    """
    strands: Optional[int] = None
    word: List[int] = []
    for token in text.split():
        if token.startswith("n="):
            if strands is not None:
                raise BraidFormatError("duplicate strand header")
            try:
                strands = int(token[2:])
            except ValueError:
                raise BraidFormatError(f"bad strand header {token!r}")
            continue
        try:
            value = int(token)
        except ValueError:
            raise BraidFormatError(f"bad braid letter {token!r}")
        if value == 0:
            raise BraidFormatError("generator index 0 does not exist")
        word.append(value)
    if strands is None:
        strands = max((abs(v) for v in word), default=0) + 1
    return BraidWord.from_ints(strands, word)


def format_braid(braid: BraidWord) -> str:
    tokens = [f"n={braid.strands}"]
    tokens.extend(f"{'+' if sign > 0 else '-'}{index}" for index, sign in braid.letters)
    return " ".join(tokens)


@dataclass(frozen=True)
class PDCode:
    """
    Validated PD code.

    Attributes:
        crossings: Quadruples (a, b, c, d).
        component_ranges: (first, last) arc labels of each component with crossings.
        free_loops: Number of crossingless unknotted components.
    """

    crossings: Tuple[Crossing, ...]
    component_ranges: Tuple[Tuple[int, int], ...]
    free_loops: int = 0

    def __post_init__(self) -> None:
        _validate(self)

    @property
    def components(self) -> int:
        return len(self.component_ranges) + self.free_loops

    def successor(self, label: int) -> int:
        for first, last in self.component_ranges:
            if first <= label <= last:
                return first if label == last else label + 1
        raise PDFormatError(f"arc {label} belongs to no component")

    def component_of(self, label: int) -> Tuple[int, int]:
        for bounds in self.component_ranges:
            if bounds[0] <= label <= bounds[1]:
                return bounds
        raise PDFormatError(f"arc {label} belongs to no component")

    def labels(self) -> List[int]:
        return sorted({label for crossing in self.crossings for label in crossing})

    def over_passages(self) -> List[Tuple[int, int]]:
        """(incoming, outgoing) arc of the over-strand at each crossing."""
        return _over_passages(self)

    def crossing_signs(self) -> List[int]:
        signs = []
        for (a, b, c, d), (incoming, _) in zip(self.crossings, self.over_passages()):
            signs.append(1 if incoming == d else -1)
        return signs


def _validate(code: PDCode) -> None:
    if code.free_loops < 0:
        raise PDFormatError("free loop count must be nonnegative")
    counts: Dict[int, int] = {}
    for crossing in code.crossings:
        if len(crossing) != 4:
            raise PDFormatError(f"crossing {crossing} does not have four arcs")
        for label in crossing:
            counts[label] = counts.get(label, 0) + 1
    for label, count in sorted(counts.items()):
        if count != 2:
            raise PDFormatError(f"arc multiplicity: arc {label} appears {count} times")

    covered: List[int] = []
    for first, last in code.component_ranges:
        if last < first:
            raise PDFormatError(f"component range {first}..{last} is empty")
        covered.extend(range(first, last + 1))
    if sorted(covered) != sorted(counts):
        raise PDFormatError("component ranges do not match the arcs used by the crossings")
    if len(set(covered)) != len(covered):
        raise PDFormatError("component ranges overlap")

    if code.crossings:
        _over_passages(code)


def _over_passages(code: PDCode) -> List[Tuple[int, int]]:
    """
    Orient every over-strand and check the traversal is consistent.

    For a component of two arcs both directions fit the successor rule. Such a
    passage takes the opposite direction of the component's under-passage; if
    the component only passes over, the earlier crossing carries the
    non-wrapping passage first -> last.
    """
    succ = code.successor
    passages: List[Optional[Tuple[int, int]]] = []
    ambiguous: Dict[Tuple[int, int], List[int]] = {}
    under_of: Dict[Tuple[int, int], List[Tuple[int, int]]] = {}

    for index, (a, b, c, d) in enumerate(code.crossings):
        if succ(a) != c:
            raise PDFormatError(
                f"inconsistent traversal at crossing {index + 1}: under-strand {a} -> {c}"
            )
        under_of.setdefault(code.component_of(a), []).append((a, c))
        forward, backward = succ(d) == b, succ(b) == d
        if b == d or not (forward or backward):
            raise PDFormatError(
                f"inconsistent traversal at crossing {index + 1}: over-strand {b}, {d}"
            )
        if forward and backward:
            ambiguous.setdefault(code.component_of(b), []).append(index)
            passages.append(None)
        else:
            passages.append((d, b) if forward else (b, d))

    for component, indices in ambiguous.items():
        unders = under_of.get(component, [])
        if unders:
            if len(indices) != 1:
                raise PDFormatError(f"component {component} passes too many crossings")
            under_in, under_out = unders[0]
            # the remaining passage of a two-arc component runs the other way
            passages[indices[0]] = (under_out, under_in)
        else:
            if len(indices) != 2:
                raise PDFormatError(f"component {component} passes too many crossings")
            first, last = component
            passages[indices[0]] = (first, last)
            passages[indices[1]] = (last, first)

    heads: Dict[int, int] = {}
    tails: Dict[int, int] = {}
    for (a, _, c, _), passage in zip(code.crossings, passages):
        assert passage is not None
        for incoming, outgoing in ((a, c), passage):
            heads[incoming] = heads.get(incoming, 0) + 1
            tails[outgoing] = tails.get(outgoing, 0) + 1
    for label in code.labels():
        if heads.get(label) != 1 or tails.get(label) != 1:
            raise PDFormatError(f"inconsistent traversal: arc {label} is not a single oriented arc")
    return [p for p in passages if p is not None]


def writhe(code: PDCode) -> int:
    """Sum of crossing signs."""
    return sum(code.crossing_signs())


def _arc_components(crossings: Sequence[Crossing]) -> List[Tuple[int, int]]:
    """
    (first, last) label range of every component met by ``crossings``.

    The under-strand joins a and c and the over-strand joins b and d, so
    these unions partition the labels into components.

    Raises:
        PDFormatError: if a component's labels are not consecutive.
    """
    parent: Dict[int, int] = {}

    def find(label: int) -> int:
        parent.setdefault(label, label)
        while parent[label] != label:
            parent[label] = parent[parent[label]]
            label = parent[label]
        return label

    for a, b, c, d in crossings:
        for x, y in ((a, c), (b, d)):
            root_x, root_y = find(x), find(y)
            if root_x != root_y:
                parent[max(root_x, root_y)] = min(root_x, root_y)
    classes: Dict[int, List[int]] = {}
    for label in parent:
        classes.setdefault(find(label), []).append(label)
    ranges = []
    for labels in classes.values():
        first, last = min(labels), max(labels)
        if last - first + 1 != len(labels):
            raise PDFormatError(f"arc labels {sorted(labels)} of one component are not consecutive")
        ranges.append((first, last))
    return sorted(ranges)


def parse_pd(text: str) -> PDCode:
    """
    Parse and validate PD text.

    A bare ``comp k`` followed by crossing lines takes its arc range from
    the crossings; with no crossing line before the next ``comp`` it is a
    crossingless unknotted component.

    Raises:
        PDFormatError: malformed line, arc multiplicity or inconsistent traversal.
    """
    crossings: List[Crossing] = []
    ranges: Dict[int, Tuple[int, int]] = {}
    bare: List[Tuple[int, int]] = []
    crossings_after: Dict[int, int] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        keyword = fields[0]
        try:
            values = [int(v) for v in fields[1:]]
        except ValueError:
            raise PDFormatError(f"non-integer field in {raw.strip()!r}", line=number)
        if keyword == "X":
            if len(values) != 4:
                raise PDFormatError("crossing line needs exactly four arc labels", line=number)
            crossings.append((values[0], values[1], values[2], values[3]))
            if bare:
                crossings_after[bare[-1][0]] += 1
        elif keyword == "comp":
            if len(values) not in (1, 3):
                raise PDFormatError("component line is 'comp k' or 'comp k first last'", line=number)
            key = values[0]
            if key in ranges or key in crossings_after:
                raise PDFormatError(f"component {key} declared twice", line=number)
            if len(values) == 1:
                bare.append((key, number))
                crossings_after[key] = 0
            else:
                ranges[key] = (values[1], values[2])
        else:
            raise PDFormatError(f"unknown line type {keyword!r}", line=number)

    free = [key for key, _ in bare if crossings_after[key] == 0]
    derived = [key for key, _ in bare if crossings_after[key] > 0]
    if not ranges and not bare:
        if crossings:
            labels = [label for crossing in crossings for label in crossing]
            ranges[1] = (min(labels), max(labels))
        else:
            free.append(1)
    if derived:
        declared = list(ranges.values())
        remaining = sorted({
            label for crossing in crossings for label in crossing
            if not any(first <= label <= last for first, last in declared)
        })
        if len(derived) == 1 and remaining:
            found = [(remaining[0], remaining[-1])]
        else:
            found = [
                bounds for bounds in _arc_components(crossings)
                if not any(first <= bounds[0] <= last for first, last in declared)
            ]
        if len(found) != len(derived):
            raise PDFormatError(
                f"{len(derived)} component headers without ranges but the crossings form {len(found)} components"
            )
        ranges.update(zip(derived, found))
    code = PDCode(
        tuple(crossings),
        tuple(bounds for _, bounds in sorted(ranges.items())),
        len(free),
    )
    logger.debug("parsed PD code: %d crossings, %d components", len(crossings), code.components)
    return code


def format_pd(code: PDCode) -> str:
    lines = []
    key = 1
    for first, last in code.component_ranges:
        lines.append(f"comp {key} {first} {last}")
        key += 1
    for _ in range(code.free_loops):
        lines.append(f"comp {key}")
        key += 1
    lines.extend("X {} {} {} {}".format(*crossing) for crossing in code.crossings)
    return "\n".join(lines) + "\n"


def braid_closure_pd(braid: BraidWord) -> PDCode:
    """
    PD code of the closure of ``braid``.

    Strands run upward; sigma_i crosses positions i and i+1 with the left
    strand passing over, which makes sigma_i a positive crossing. Arcs are
    labelled along each component starting from the arc that ends at the
    earliest crossing, which is the labelling the orientation rule of
    two-arc components expects.
    """
    n = braid.strands
    current = list(range(n))
    next_arc = n
    raw: List[Crossing] = []
    moves: List[Tuple[Tuple[int, int], Tuple[int, int]]] = []
    for index, sign in braid.letters:
        p = index - 1
        left, right = current[p], current[p + 1]
        new_left, new_right = next_arc, next_arc + 1
        next_arc += 2
        if sign > 0:
            raw.append((right, new_right, new_left, left))
            moves.append(((right, new_left), (left, new_right)))
        else:
            raw.append((left, right, new_right, new_left))
            moves.append(((left, new_right), (right, new_left)))
        current[p], current[p + 1] = new_left, new_right

    # closing the braid glues the top arc of each position to its bottom arc
    alias = {arc: position for position, arc in enumerate(current) if arc != position}
    free_loops = sum(1 for position, arc in enumerate(current) if arc == position)

    def resolve(arc: int) -> int:
        return alias.get(arc, arc)

    succ: Dict[int, int] = {}
    head: Dict[int, int] = {}
    for crossing_index, passages in enumerate(moves):
        for incoming, outgoing in passages:
            succ[resolve(incoming)] = resolve(outgoing)
            head[resolve(incoming)] = crossing_index

    labels: Dict[int, int] = {}
    ranges: List[Tuple[int, int]] = []
    for start in sorted(succ, key=lambda arc: (head[arc], arc)):
        if start in labels:
            continue
        first = len(labels) + 1
        arc = start
        while arc not in labels:
            labels[arc] = len(labels) + 1
            arc = succ[arc]
        ranges.append((first, len(labels)))

    crossings = tuple(
        (labels[resolve(a)], labels[resolve(b)], labels[resolve(c)], labels[resolve(d)])
        for a, b, c, d in raw
    )
    return PDCode(crossings, tuple(ranges), free_loops)


def mirror_pd(code: PDCode) -> PDCode:
    """
    Swap over and under at every crossing.

    Two-arc components that only pass over after the swap are relabelled so
    that the orientation rule still reproduces their true direction.
    """
    passages = code.over_passages()
    crossings: List[Crossing] = []
    for (a, b, c, d), (incoming, _) in zip(code.crossings, passages):
        crossings.append((d, a, b, c) if incoming == d else (b, c, d, a))

    swaps: Dict[int, int] = {}
    for first, last in code.component_ranges:
        if last - first != 1:
            continue
        unders = [
            (index, a, c)
            for index, (a, _, c, _) in enumerate(code.crossings)
            if first <= a <= last
        ]
        if len(unders) != 2:
            continue
        _, incoming, _ = min(unders)
        if incoming != first:
            swaps[first], swaps[last] = last, first
    if swaps:
        crossings = [tuple(swaps.get(label, label) for label in crossing) for crossing in crossings]  # type: ignore[misc]
    return PDCode(tuple(crossings), code.component_ranges, code.free_loops)

