"""Exact-arithmetic search for perfect cuboids in the coprime p != q family,
with certified root-interval analysis of the underlying degree-10 equation."""

from .cuboid_eqs import PQPair, build_qpq, cuboid_predicate, reconstruct_cuboid
from .search import SearchConfig, run_search

__all__ = [
    "PQPair",
    "build_qpq",
    "cuboid_predicate",
    "reconstruct_cuboid",
    "SearchConfig",
    "run_search",
]
