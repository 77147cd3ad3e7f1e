"""
Jones polynomial and skein-relation checks.

V(t) = (-A)^(-3w) <D> with t = A^-4, and the skein relation
t^-1 V(K+) - t V(K-) = (t^(1/2) - t^(-1/2)) V(K0) is checked exactly.
"""

import logging
from typing import List, Optional, Tuple

import numpy as np

from src.algebra.laurent import HalfExpLaurent
from src.knots.bracket import bracket
from src.knots.diagram import BraidWord, PDCode, braid_closure_pd, writhe

logger = logging.getLogger(__name__)

SkeinTriple = Tuple[BraidWord, BraidWord, BraidWord]

MAX_SKEIN_CROSSINGS = 8


def jones(code: PDCode, method: str = "state-sum") -> HalfExpLaurent:
    """
    Normalised Jones polynomial of an oriented diagram.

    Args:
        code: Validated PD code.
        method: Bracket algorithm, ``state-sum`` or ``memoized``.

    Returns:
        HalfExpLaurent: V(t); the unknot maps to 1.
    """
    w = writhe(code)
    normalisation = HalfExpLaurent.power(-3 * w, -1 if w % 2 else 1, "A")
    value = (normalisation * bracket(code, method)).a_to_t()
    logger.debug("jones: writhe %d, V = %s", w, value)
    return value


def braid_jones(braid: BraidWord, method: str = "state-sum") -> HalfExpLaurent:
    return jones(braid_closure_pd(braid), method)


def skein_residual(kplus: PDCode, kminus: PDCode, kzero: PDCode) -> HalfExpLaurent:
    """t^-1 V+ - t V- - (t^(1/2) - t^(-1/2)) V0."""
    t = HalfExpLaurent.power(1)
    t_inverse = HalfExpLaurent.power(-1)
    half_difference = HalfExpLaurent.from_mapping({1: 1, -1: -1})
    return t_inverse * jones(kplus) - t * jones(kminus) - half_difference * jones(kzero)


def skein_verify(kplus: PDCode, kminus: PDCode, kzero: PDCode) -> bool:
    """True iff the skein relation holds exactly."""
    residual = skein_residual(kplus, kminus, kzero)
    if not residual.is_zero():
        logger.warning("skein relation fails, residual %s", residual)
        return False
    return True


def skein_triple(braid: BraidWord, index: int) -> SkeinTriple:
    """
    (K+, K-, K0) obtained by editing letter ``index`` of ``braid``.

    K+ has sigma_i there, K- has sigma_i^-1 and K0 drops the letter.
    """
    if not 0 <= index < len(braid.letters):
        raise IndexError(f"letter index {index} outside a word of length {len(braid.letters)}")
    generator, _ = braid.letters[index]
    before, after = braid.letters[:index], braid.letters[index + 1:]
    return (
        BraidWord(braid.strands, before + ((generator, 1),) + after),
        BraidWord(braid.strands, before + ((generator, -1),) + after),
        BraidWord(braid.strands, before + after),
    )


def random_braid(
    rng: np.random.Generator, max_strands: int = 4, max_length: int = MAX_SKEIN_CROSSINGS
) -> BraidWord:
    strands = int(rng.integers(2, max_strands + 1))
    length = int(rng.integers(1, max_length + 1))
    word = [
        int(rng.integers(1, strands)) * (1 if rng.random() < 0.5 else -1) for _ in range(length)
    ]
    return BraidWord.from_ints(strands, word)


def random_skein_triples(
    count: int, rng: Optional[np.random.Generator] = None, max_strands: int = 4
) -> List[SkeinTriple]:
    """Random skein triples with at most eight crossings each."""
    rng = rng if rng is not None else np.random.default_rng()
    triples = []
    for _ in range(count):
        braid = random_braid(rng, max_strands)
        triples.append(skein_triple(braid, int(rng.integers(0, len(braid.letters)))))
    return triples


def braid_skein_verify(triple: SkeinTriple) -> bool:
    kplus, kminus, kzero = (braid_closure_pd(b) for b in triple)
    return skein_verify(kplus, kminus, kzero)
