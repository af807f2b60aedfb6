"""The delay move: split an edge in two and propagate through its linkage class."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from ..errors import UnknownEdge
from ..factorization import Square, complete_cube
from ..kgraph import KGraph, assemble
from ..skeleton import build_skeleton


def delayed_vertex(g: str) -> str:
    return f"v__{g}"


def split_edges(g: str) -> tuple[str, str]:
    return f"{g}__1", f"{g}__2"


def class_edge(sq: Square) -> str:
    x2, x1 = min(sq.lhs, sq.rhs)
    return f"e__{x2}.{x1}"


@dataclass
class DelayResult:
    graph: KGraph
    edge: str
    color: int
    linked: tuple[str, ...]  # the linkage class of the delayed edge, in discovery order
    classes: dict[str, Square]  # added edge -> the square (class) it stands for
    new_vertices: dict[str, str]  # g -> v_g
    split: dict[str, tuple[str, str]]  # g -> (g^1, g^2)
    inclusion: dict[str, str]  # ids surviving unchanged in the output -> ids in the input

    @property
    def delayed_vertex(self) -> str:
        return self.new_vertices[self.edge]


def linkage_class(k: KGraph, f: str) -> tuple[str, ...]:
    """Edges of color(f) reachable from ``f`` through squares whose other
    color differs, linking the two color(f) edges of each such square."""
    g = k.skeleton
    c = g.color(f)
    adjacency: dict[str, list[str]] = {}
    for sq in k.squares:
        ends = [e for e in sq.edges() if g.color(e) == c]
        if len(ends) != 2:
            continue
        x, y = ends
        adjacency.setdefault(x, []).append(y)
        adjacency.setdefault(y, []).append(x)
    order = [f]
    seen = {f}
    queue = deque([f])
    while queue:
        x = queue.popleft()
        for y in adjacency.get(x, ()):
            if y not in seen:
                seen.add(y)
                order.append(y)
                queue.append(y)
    return tuple(order)


def delay(k: KGraph, f: str) -> DelayResult:
    g = k.skeleton
    if not g.has_edge(f):
        raise UnknownEdge(f)
    c = g.color(f)
    linked = linkage_class(k, f)
    members = set(linked)

    classes: dict[str, Square] = {}
    endpoints: dict[str, tuple[str, str, int]] = {}
    for sq in k.squares:
        if not any(e in members for e in sq.edges()):
            continue
        (inner_side,) = [s for s in sq.sides() if g.color(s[1]) == c]
        (outer_side,) = [s for s in sq.sides() if g.color(s[0]) == c]
        name = class_edge(sq)
        classes[name] = sq
        other = g.color(outer_side[1])
        endpoints[name] = (delayed_vertex(inner_side[1]), delayed_vertex(outer_side[0]), other)

    vertices = list(g.vertices) + [delayed_vertex(x) for x in linked]
    edges = []
    split = {}
    inclusion = {v: v for v in g.vertices}
    for e in g.edges:
        if e.id in members:
            first, second = split_edges(e.id)
            split[e.id] = (first, second)
            edges.append((first, c, e.src, delayed_vertex(e.id)))
            edges.append((second, c, delayed_vertex(e.id), e.rng))
        else:
            edges.append(tuple(e))
            inclusion[e.id] = e.id
    for name in sorted(classes):
        s, r, color = endpoints[name]
        edges.append((name, color, s, r))
    skel = build_skeleton(g.rank, vertices, edges)

    squares = []
    for sq in k.squares:
        if not any(e in members for e in sq.edges()):
            squares.append(sq)
    for name, sq in sorted(classes.items()):
        (b, gg) = next(s for s in sq.sides() if g.color(s[1]) == c)
        (h, a) = next(s for s in sq.sides() if g.color(s[0]) == c)
        g1, g2 = split[gg]
        h1, h2 = split[h]
        squares.append(Square((name, g1), (h1, a)))
        squares.append(Square((b, g2), (h2, name)))

    # two added edges of different colors meeting at some v_g: faces of a 3-cube
    by_range: dict[str, list[str]] = {}
    by_source: dict[str, list[str]] = {}
    for name in sorted(classes):
        s, r, _ = endpoints[name]
        by_range.setdefault(r, []).append(name)
        by_source.setdefault(s, []).append(name)
    paired: set = set()
    for x in linked:
        vx = delayed_vertex(x)
        for alpha in by_range.get(vx, ()):
            for beta in by_source.get(vx, ()):
                if endpoints[alpha][2] == endpoints[beta][2] or (beta, alpha) in paired:
                    continue
                delta, gamma = complete_cube(g, k.squares, classes[alpha], classes[beta], x)
                lhs, rhs = (beta, alpha), (class_edge(gamma), class_edge(delta))
                paired.add(lhs)
                paired.add(rhs)
                squares.append(Square(lhs, rhs))

    out = assemble(skel, squares)
    return DelayResult(
        graph=out,
        edge=f,
        color=c,
        linked=linked,
        classes=classes,
        new_vertices={x: delayed_vertex(x) for x in linked},
        split=split,
        inclusion=inclusion,
    )
