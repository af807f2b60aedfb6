from __future__ import annotations

from ..kgraph import KGraph, assemble
from ..skeleton import build_skeleton


def pair_id(a: str, b: str) -> str:
    return f"({a},{b})"


def product(k1: KGraph, k2: KGraph) -> KGraph:
    """Cartesian product; colors of ``k2`` are shifted past those of ``k1``.

    Vertices are ``(x,y)``; edges are ``(e,y)`` and ``(x,f)``. Squares are the
    lifted squares of each factor plus ``(f,y')(x,g) ~ (x',g)(f,y)``.
    """
    g1, g2 = k1.skeleton, k2.skeleton
    shift = g1.rank
    vertices = [pair_id(x, y) for x in g1.vertices for y in g2.vertices]
    edges = []
    for e in g1.edges:
        for y in g2.vertices:
            edges.append((pair_id(e.id, y), e.color, pair_id(e.src, y), pair_id(e.rng, y)))
    for x in g1.vertices:
        for f in g2.edges:
            edges.append((pair_id(x, f.id), f.color + shift, pair_id(x, f.src), pair_id(x, f.rng)))
    skel = build_skeleton(g1.rank + g2.rank, vertices, edges)

    squares = []
    for (a2, a1), (b2, b1) in k1.squares:
        for y in g2.vertices:
            squares.append(((pair_id(a2, y), pair_id(a1, y)), (pair_id(b2, y), pair_id(b1, y))))
    for (a2, a1), (b2, b1) in k2.squares:
        for x in g1.vertices:
            squares.append(((pair_id(x, a2), pair_id(x, a1)), (pair_id(x, b2), pair_id(x, b1))))
    for f in g1.edges:
        for g in g2.edges:
            # traverse (x,g) then (f,y') versus (f,y) then (x',g)
            lhs = (pair_id(f.id, g.rng), pair_id(f.src, g.id))
            rhs = (pair_id(f.rng, g.id), pair_id(f.id, g.src))
            squares.append((lhs, rhs))
    return assemble(skel, squares)
