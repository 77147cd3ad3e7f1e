"""Verlinde dimensions and admissible colorings of trivalent spines."""

from src.fusion.graphs import (
    SPINE_KINDS,
    TrivalentGraph,
    count_colorings,
    enumerate_colorings,
    format_graph,
    parse_graph,
    spine_graph,
)
from src.fusion.verlinde import (
    admissible,
    check_integrality,
    integrality_defect,
    verlinde_dim,
    verlinde_sum,
    verlinde_table,
)

__all__ = [
    "SPINE_KINDS",
    "TrivalentGraph",
    "admissible",
    "check_integrality",
    "count_colorings",
    "enumerate_colorings",
    "format_graph",
    "integrality_defect",
    "parse_graph",
    "spine_graph",
    "verlinde_dim",
    "verlinde_sum",
    "verlinde_table",
]
