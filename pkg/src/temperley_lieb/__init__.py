"""Temperley-Lieb algebra, the Jones representation and its Markov trace."""

from src.temperley_lieb.algebra import (
    TLElement,
    braid_to_tl,
    closure_trace,
    generator,
    identity,
    markov_trace_jones,
    tl_mul,
)
from src.temperley_lieb.matching import MAX_STRANDS, PlanarMatching, planar_basis

__all__ = [
    "MAX_STRANDS",
    "PlanarMatching",
    "TLElement",
    "braid_to_tl",
    "closure_trace",
    "generator",
    "identity",
    "markov_trace_jones",
    "planar_basis",
    "tl_mul",
]
