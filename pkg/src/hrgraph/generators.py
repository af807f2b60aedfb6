"""Fixture k-graphs: tori, the four-vertex 3-graph, and a complete-edge example."""
from __future__ import annotations

import itertools
import string

from .errors import InvalidParameter
from .kgraph import KGraph, assemble
from .skeleton import build_skeleton

_LETTERS = [ch for ch in string.ascii_lowercase if ch != "u"]


def _letter(color: int) -> str:
    return _LETTERS[color - 1] if color <= len(_LETTERS) else f"c{color}x"


def gen_torus(*sizes: int) -> KGraph:
    """Product of directed cycles ``C_{n1} x ... x C_{nk}``.

    Vertex ids are ``u`` followed by the coordinates of the dimensions of
    size > 1 joined with ``_``; the color-j edge leaving a vertex carries the
    j-th letter (``a``, ``b``, ...) in place of ``u``. So ``gen_torus(3, 1)``
    has vertices ``u0, u1, u2``, edges ``a0..a2`` and loops ``b0..b2``.
    """
    if not sizes:
        raise InvalidParameter("gen_torus needs at least one cycle length")
    for n in sizes:
        if not isinstance(n, int) or n < 1:
            raise InvalidParameter(f"cycle lengths must be positive integers, got {n!r}")
    k = len(sizes)
    shown = [i for i, n in enumerate(sizes) if n > 1]

    def name(prefix, x):
        return prefix + "_".join(str(x[i]) for i in shown)

    def step(x, j):
        y = list(x)
        y[j] = (y[j] + 1) % sizes[j]
        return tuple(y)

    points = list(itertools.product(*(range(n) for n in sizes)))
    vertices = [name("u", x) for x in points]
    edges = [
        (name(_letter(j + 1), x), j + 1, name("u", x), name("u", step(x, j)))
        for j in range(k)
        for x in points
    ]
    squares = []
    for x in points:
        for i, j in itertools.combinations(range(k), 2):
            ei, ej = _letter(i + 1), _letter(j + 1)
            lhs = (name(ej, step(x, i)), name(ei, x))
            rhs = (name(ei, step(x, j)), name(ej, x))
            squares.append((lhs, rhs))
    return assemble(build_skeleton(k, vertices, edges), squares)


FIGURE1_CYCLE = ("v", "w", "x", "y")


def gen_figure1() -> KGraph:
    """The four-vertex 3-graph: a directed 4-cycle v->w->x->y->v doubled in
    colors 1 (black) and 2 (blue), with a color-3 (red) loop at each vertex.

    The cycle orientation is a fixed convention under which w is fully
    reducible with color set {1, 2}.
    """
    cyc = FIGURE1_CYCLE
    nxt = {cyc[i]: cyc[(i + 1) % 4] for i in range(4)}
    prv = {b: a for a, b in nxt.items()}
    edges = []
    for p in cyc:
        q = nxt[p]
        edges.append((f"black_{p}{q}", 1, p, q))
        edges.append((f"blue_{p}{q}", 2, p, q))
    for p in cyc:
        edges.append((f"red_{p}", 3, p, p))
    squares = []
    for m in cyc:
        p, n = prv[m], nxt[m]
        squares.append(((f"black_{m}{n}", f"blue_{p}{m}"), (f"blue_{m}{n}", f"black_{p}{m}")))
    for p in cyc:
        q = nxt[p]
        for col in ("black", "blue"):
            squares.append(((f"red_{q}", f"{col}_{p}{q}"), (f"{col}_{p}{q}", f"red_{p}")))
    return assemble(build_skeleton(3, list(cyc), edges), squares)


def gen_cr_example() -> KGraph:
    """Rank-2 graph on ``w`` and ``x``: a complete edge ``c1, c2`` from w to x
    and a return complete edge ``a1, a2`` from x to w."""
    edges = [
        ("a1", 1, "x", "w"),
        ("a2", 2, "x", "w"),
        ("c1", 1, "w", "x"),
        ("c2", 2, "w", "x"),
    ]
    squares = [
        (("c2", "a1"), ("c1", "a2")),
        (("a2", "c1"), ("a1", "c2")),
    ]
    return assemble(build_skeleton(2, ["w", "x"], edges), squares)


def torus_corpus(low: int = 2, high: int = 4):
    """``(sizes, gen_torus(*sizes))`` for every rank-2 and rank-3 torus with
    cycle lengths in ``low..high``, in lexicographic order of sizes."""
    span = range(low, high + 1)
    for rank in (2, 3):
        for sizes in itertools.product(span, repeat=rank):
            yield sizes, gen_torus(*sizes)


GENERATORS = {
    "torus": gen_torus,
    "figure1": gen_figure1,
    "cr": gen_cr_example,
}
