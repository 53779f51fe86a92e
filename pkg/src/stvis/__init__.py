"""Exact general-position and mutual-visibility sets on Sierpinski triangle graphs."""

from .constructions import ConstructedSet, closed_form, construct
from .graph_core import DistanceMatrix, Graph, all_pairs_distances
from .search import SearchResult, branch_and_bound_max, enumerate_optima, exhaustive_max
from .sierpinski import SierpinskiTriangle, build_sierpinski, build_sierpinski_triangle
from .visibility import Variant, Violation, validate_set

__all__ = [
    "ConstructedSet", "DistanceMatrix", "Graph", "SearchResult", "SierpinskiTriangle",
    "Variant", "Violation", "all_pairs_distances", "branch_and_bound_max",
    "build_sierpinski", "build_sierpinski_triangle", "closed_form", "construct",
    "enumerate_optima", "exhaustive_max", "validate_set",
]
