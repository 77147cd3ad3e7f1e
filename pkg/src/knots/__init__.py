"""Knot and link diagrams, the Kauffman bracket and the Jones polynomial."""

from src.knots.bracket import (
    MAX_STATE_SUM_CROSSINGS,
    bracket,
    kauffman_bracket,
    kauffman_bracket_memoized,
    loop_value,
)
from src.knots.diagram import (
    BraidWord,
    PDCode,
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

__all__ = [
    "MAX_STATE_SUM_CROSSINGS",
    "BraidWord",
    "PDCode",
    "braid_closure_pd",
    "braid_jones",
    "braid_skein_verify",
    "bracket",
    "format_braid",
    "format_pd",
    "jones",
    "kauffman_bracket",
    "kauffman_bracket_memoized",
    "loop_value",
    "mirror_pd",
    "parse_braid",
    "parse_pd",
    "random_skein_triples",
    "skein_triple",
    "skein_verify",
    "writhe",
]
