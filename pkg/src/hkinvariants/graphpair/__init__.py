"""Jacobi diagrams: gluing pairing, graph homology reduction to a small basis,
wheeling expansions and Rozansky-Witten numbers."""

from .diagram import Diagram, strut, wheel
from .homology import GraphVector, reduce_closed, reduction_table
from .pairing import (
    b_gamma,
    expected_wheeling,
    glue,
    pair,
    rr_from_b,
    sawon_identities,
    wheeling_expansion,
    wheeling_term,
)

__all__ = [
    "Diagram",
    "GraphVector",
    "b_gamma",
    "expected_wheeling",
    "glue",
    "pair",
    "reduce_closed",
    "reduction_table",
    "rr_from_b",
    "sawon_identities",
    "strut",
    "wheel",
    "wheeling_expansion",
    "wheeling_term",
]
