"""
Unit tests for knot diagrams, the Kauffman bracket and the Jones polynomial.

Tests cover:
- Braid and PD text formats, component headers and their diagnostics
- Crossing signs, writhe and mirror images
- Both bracket algorithms
- Known Jones polynomials
- The skein relation on generated triples
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.algebra.laurent import HalfExpLaurent
from src.knots.bracket import MAX_STATE_SUM_CROSSINGS, bracket, kauffman_bracket
from src.knots.diagram import (
    BraidWord,
    braid_closure_pd,
    format_braid,
    format_pd,
    mirror_pd,
    parse_braid,
    parse_pd,
    writhe,
)
from src.knots.jones import (
    braid_jones,
    braid_skein_verify,
    jones,
    random_skein_triples,
    skein_triple,
    skein_verify,
)
from src.utils.errors import BraidFormatError, PDFormatError, ResourceGuardError
from tests.conftest import MALFORMED_PD, TREFOIL_PD

TREFOIL_JONES = HalfExpLaurent.parse("t + t^3 - t^4")
FIGURE_EIGHT_JONES = HalfExpLaurent.parse("t^-2 - t^-1 + 1 - t + t^2")


def small_braids(max_strands: int = 3, max_length: int = 5):
    """Strategy for short braid words."""
    return st.integers(2, max_strands).flatmap(
        lambda n: st.lists(
            st.integers(1, n - 1).flatmap(lambda i: st.sampled_from([i, -i])),
            max_size=max_length,
        ).map(lambda word: BraidWord.from_ints(n, word))
    )


def test_parse_braid():
    """Test the braid text format with and without a header."""
    braid = parse_braid("n=3 +1 -2 +1")
    assert braid.strands == 3
    assert braid.as_ints() == [1, -2, 1]
    assert format_braid(braid) == "n=3 +1 -2 +1"
    assert parse_braid("+1 -2").strands == 3
    assert parse_braid("n=2").letters == ()


@pytest.mark.parametrize("text", ["n=2 +0", "n=2 +2", "n=2 x", "n=2 n=3 +1"])
def test_parse_braid_errors(text):
    """Test that malformed braid words raise BraidFormatError."""
    with pytest.raises(BraidFormatError):
        parse_braid(text)


def test_braid_helpers():
    """Test exponent sum, permutation cycles, mirror and stabilisation."""
    trefoil = parse_braid("n=2 +1 +1 +1")
    assert trefoil.exponent_sum() == 3
    assert trefoil.cycle_count() == 1
    assert parse_braid("n=2 +1 +1").cycle_count() == 2
    assert trefoil.mirror().as_ints() == [-1, -1, -1]
    assert trefoil.stabilize().strands == 3
    assert parse_braid("n=3 +1 -2").conjugate().as_ints() == [-2, 1]


def test_parse_trefoil_pd():
    """Test parsing, signs and writhe of the trefoil PD code."""
    code = parse_pd(TREFOIL_PD)
    assert len(code.crossings) == 3
    assert code.components == 1
    assert code.crossing_signs() == [1, 1, 1]
    assert writhe(code) == 3


def test_pd_line_diagnostics():
    """Test that a malformed crossing line reports its line number."""
    with pytest.raises(PDFormatError) as info:
        parse_pd(MALFORMED_PD)
    assert info.value.line == 2
    assert str(info.value).startswith("line 2:")


def test_pd_arc_multiplicity():
    """Test that an arc used once is rejected."""
    with pytest.raises(PDFormatError, match="arc multiplicity"):
        parse_pd("X 1 2 3 4\nX 1 2 3 5\n")


def test_pd_inconsistent_traversal():
    """Test that an under-strand skipping an arc is rejected."""
    with pytest.raises(PDFormatError, match="inconsistent traversal"):
        parse_pd("X 1 2 3 4\nX 3 4 1 2\n")


def test_pd_unknown_line():
    """Test that unknown line types are rejected."""
    with pytest.raises(PDFormatError):
        parse_pd("Y 1 2 3 4\n")


def test_empty_and_free_components():
    """Test crossingless diagrams."""
    assert jones(parse_pd("")) == HalfExpLaurent.one()
    unlink = parse_pd("comp 1\ncomp 2\n")
    assert unlink.components == 2
    assert jones(unlink) == HalfExpLaurent.parse("-t^(-1/2) - t^(1/2)")


def test_bare_component_header():
    """Test a bare comp header in front of the crossings it owns."""
    plain = parse_pd(TREFOIL_PD)
    headed = parse_pd("comp 1\n" + TREFOIL_PD)
    assert headed == plain
    assert jones(headed) == TREFOIL_JONES


def test_bare_headers_with_free_loop():
    """Test that a bare header with no crossings after it stays a free loop."""
    code = parse_pd("comp 1\ncomp 2\n" + TREFOIL_PD)
    assert code.free_loops == 1
    assert code.component_ranges == ((1, 6),)
    assert code.components == 2


def test_bare_headers_for_a_link():
    """Test that bare headers split the arcs of a two-component link."""
    hopf = braid_closure_pd(parse_braid("n=2 +1 +1"))
    first, second = (format_pd(hopf).splitlines()[-2:])
    code = parse_pd(f"comp 1\n{first}\ncomp 2\n{second}\n")
    assert code.components == 2
    assert sorted(code.component_ranges) == sorted(hopf.component_ranges)
    assert jones(code) == jones(hopf)


def test_bare_header_count_mismatch():
    """Test that more bare headers than crossing components is rejected."""
    lines = TREFOIL_PD.strip().splitlines()[1:]
    text = f"comp 1\n{lines[0]}\ncomp 2\n{lines[1]}\n{lines[2]}\n"
    with pytest.raises(PDFormatError, match="component headers"):
        parse_pd(text)


def test_format_pd_round_trip():
    """Test that format_pd output parses back to the same code."""
    for word in ("n=2 +1 +1", "n=3 +1 -2 +1 -2", "n=3 +1"):
        code = braid_closure_pd(parse_braid(word))
        assert parse_pd(format_pd(code)) == code


def test_single_kink_brackets():
    """Test the brackets of the one-crossing unknots: a positive kink gives -A^3."""
    positive = braid_closure_pd(parse_braid("n=2 +1"))
    negative = braid_closure_pd(parse_braid("n=2 -1"))
    assert bracket(positive) == HalfExpLaurent.power(3, -1, "A")
    assert bracket(negative) == HalfExpLaurent.power(-3, -1, "A")
    assert jones(positive) == jones(negative) == HalfExpLaurent.one()


def test_trefoil_jones_both_algorithms():
    """Test V(trefoil) = t + t^3 - t^4 with both bracket algorithms."""
    code = parse_pd(TREFOIL_PD)
    assert jones(code) == TREFOIL_JONES
    assert jones(code, "memoized") == TREFOIL_JONES
    assert braid_jones(parse_braid("n=2 +1 +1 +1")) == TREFOIL_JONES


def test_known_links():
    """Test the unknot, Hopf link, 2-unlink and figure-eight knot."""
    assert braid_jones(parse_braid("n=2 +1")) == HalfExpLaurent.one()
    assert braid_jones(parse_braid("n=2 +1 +1")) == HalfExpLaurent.parse("-t^(1/2) - t^(5/2)")
    assert braid_jones(parse_braid("n=2")) == HalfExpLaurent.parse("-t^(-1/2) - t^(1/2)")
    figure_eight = braid_jones(parse_braid("n=3 +1 -2 +1 -2"))
    assert figure_eight == FIGURE_EIGHT_JONES
    assert figure_eight.mirror() == figure_eight


def test_mirror_trefoil():
    """Test that mirroring negates the writhe and mirrors V."""
    code = parse_pd(TREFOIL_PD)
    mirrored = mirror_pd(code)
    assert writhe(mirrored) == -3
    assert jones(mirrored) == TREFOIL_JONES.mirror()


def test_unknown_bracket_method():
    """Test that an unknown algorithm name is rejected."""
    with pytest.raises(ValueError):
        bracket(parse_pd(TREFOIL_PD), "magic")


def test_state_sum_guard():
    """Test the crossing guard of the state sum."""
    code = braid_closure_pd(BraidWord.from_ints(2, [1] * (MAX_STATE_SUM_CROSSINGS + 1)))
    with pytest.raises(ResourceGuardError):
        kauffman_bracket(code)


@settings(max_examples=40, deadline=None)
@given(small_braids())
def test_closure_writhe_is_exponent_sum(braid):
    """Test that crossing signs of a closure follow the braid letters."""
    assert writhe(braid_closure_pd(braid)) == braid.exponent_sum()
    assert braid_closure_pd(braid).components == braid.cycle_count()


@settings(max_examples=40, deadline=None)
@given(small_braids())
def test_bracket_algorithms_agree(braid):
    """Test state sum against the memoized contraction."""
    code = braid_closure_pd(braid)
    assert bracket(code, "state-sum") == bracket(code, "memoized")


@settings(max_examples=30, deadline=None)
@given(small_braids())
def test_mirror_symmetry(braid):
    """Test V(mirror K) = V(K)(t^-1) via mirror_pd and via the mirrored braid."""
    code = braid_closure_pd(braid)
    expected = jones(code).mirror()
    assert jones(mirror_pd(code)) == expected
    assert braid_jones(braid.mirror()) == expected


@settings(max_examples=20, deadline=None)
@given(small_braids())
def test_markov_moves_preserve_jones(braid):
    """Test invariance under conjugation and positive or negative stabilisation."""
    value = braid_jones(braid)
    assert braid_jones(braid.conjugate()) == value
    assert braid_jones(braid.stabilize(1)) == value
    assert braid_jones(braid.stabilize(-1)) == value


def test_skein_triple_construction():
    """Test that the triple edits exactly one letter."""
    plus, minus, zero = skein_triple(parse_braid("n=3 +1 -2 +1"), 1)
    assert plus.as_ints() == [1, 2, 1]
    assert minus.as_ints() == [1, -2, 1]
    assert zero.as_ints() == [1, 1]
    with pytest.raises(IndexError):
        skein_triple(parse_braid("n=2 +1"), 3)


def test_skein_simplest_triple():
    """Test the skein relation on (sigma_1, sigma_1^-1, identity)."""
    triple = skein_triple(parse_braid("n=2 +1"), 0)
    assert braid_skein_verify(triple)
    kplus, kminus, kzero = (braid_closure_pd(b) for b in triple)
    assert skein_verify(kplus, kminus, kzero)
    assert not skein_verify(kplus, kzero, kminus)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10_000))
def test_skein_random_triples(seed):
    """Test the skein relation on generated triples."""
    triples = random_skein_triples(5, np.random.default_rng(seed))
    assert len(triples) == 5
    for triple in triples:
        assert len(triple[0]) <= 8
        assert braid_skein_verify(triple)
