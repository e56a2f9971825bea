"""Exact revised edge Szeged index laboratory for unicyclic graphs."""

from .graph_core import Graph, build_graph, canonical_code, distances, parse_graph6, to_graph6, unique_cycle
from .index_engine import Q4, index_suite, sz_e_star

__all__ = [
    "Graph",
    "Q4",
    "build_graph",
    "canonical_code",
    "distances",
    "index_suite",
    "parse_graph6",
    "sz_e_star",
    "to_graph6",
    "unique_cycle",
]
