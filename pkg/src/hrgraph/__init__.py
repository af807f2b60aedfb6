"""Finite higher-rank graphs: validation, moves with realizations, and certificates."""
from .errors import KGraphError
from .factorization import Square, SquareSet, canonical_form, equivalent, normalize
from .generators import gen_cr_example, gen_figure1, gen_torus
from .kgraph import KGraph, Realization, assemble, isomorphic, verify_realization
from .moves import check_hr, complete_edge_reduction, delay, product, reduce
from .saturation import morita_certificate, saturate
from .skeleton import ColoredDigraph, Edge, build_skeleton

__all__ = [
    "ColoredDigraph",
    "Edge",
    "KGraph",
    "KGraphError",
    "Realization",
    "Square",
    "SquareSet",
    "assemble",
    "build_skeleton",
    "canonical_form",
    "check_hr",
    "complete_edge_reduction",
    "delay",
    "equivalent",
    "gen_cr_example",
    "gen_figure1",
    "gen_torus",
    "isomorphic",
    "morita_certificate",
    "normalize",
    "product",
    "reduce",
    "saturate",
    "verify_realization",
]
