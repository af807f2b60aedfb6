"""Finite edge-colored directed multigraphs (1-skeletons).

Colors are the integers ``1..rank``. Vertex and edge identifiers are opaque
strings supplied by the caller; the two namespaces must not overlap. Loops
and parallel edges are allowed.
"""
from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple

from .errors import ColorOutOfRange, DanglingEndpoint, DuplicateId, UnknownEdge, UnknownVertex


class Edge(NamedTuple):
    id: str
    color: int
    src: str
    rng: str


@dataclass(frozen=True, eq=False)
class ColoredDigraph:
    rank: int
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {e.id: e for e in self.edges})

    def __eq__(self, other):
        if not isinstance(other, ColoredDigraph):
            return NotImplemented
        return (
            self.rank == other.rank
            and set(self.vertices) == set(other.vertices)
            and set(self.edges) == set(other.edges)
        )

    def __hash__(self):
        return hash((self.rank, frozenset(self.vertices), frozenset(self.edges)))

    def __repr__(self):
        return f"ColoredDigraph(rank={self.rank}, |V|={len(self.vertices)}, |E|={len(self.edges)})"

    def edge(self, eid: str) -> Edge:
        try:
            return self._index[eid]
        except KeyError:
            raise UnknownEdge(eid) from None

    def has_edge(self, eid: str) -> bool:
        return eid in self._index

    def has_vertex(self, v: str) -> bool:
        return v in self._vertex_set

    def color(self, eid: str) -> int:
        return self._index[eid].color

    def src(self, eid: str) -> str:
        return self._index[eid].src

    def rng(self, eid: str) -> str:
        return self._index[eid].rng

    @cached_property
    def _vertex_set(self) -> frozenset:
        return frozenset(self.vertices)

    @cached_property
    def _in(self) -> dict:
        table = defaultdict(list)
        for e in self.edges:
            table[e.rng, e.color].append(e.id)
        return {k: tuple(v) for k, v in table.items()}

    @cached_property
    def _out(self) -> dict:
        table = defaultdict(list)
        for e in self.edges:
            table[e.src, e.color].append(e.id)
        return {k: tuple(v) for k, v in table.items()}

    @cached_property
    def _in_all(self) -> dict:
        return {v: tuple(e for c in range(1, self.rank + 1) for e in self._in.get((v, c), ())) for v in self.vertices}

    @cached_property
    def _out_all(self) -> dict:
        return {v: tuple(e for c in range(1, self.rank + 1) for e in self._out.get((v, c), ())) for v in self.vertices}

    def in_edges(self, v: str, color: int | None = None) -> tuple[str, ...]:
        """Edges with range ``v`` (the set ``v Λ^color``), ordered by color."""
        if color is not None:
            return self._in.get((v, color), ())
        return self._in_all.get(v, ())

    def out_edges(self, v: str, color: int | None = None) -> tuple[str, ...]:
        """Edges with source ``v`` (the set ``Λ^color v``), ordered by color."""
        if color is not None:
            return self._out.get((v, color), ())
        return self._out_all.get(v, ())

    def edges_of_color(self, color: int) -> tuple[str, ...]:
        return tuple(e.id for e in self.edges if e.color == color)

    def degree_vector(self, path: Iterable[str]) -> tuple[int, ...]:
        counts = [0] * self.rank
        for eid in path:
            counts[self._index[eid].color - 1] += 1
        return tuple(counts)


def _check_color(token, color, rank):
    if not isinstance(color, int) or isinstance(color, bool) or not 1 <= color <= rank:
        raise ColorOutOfRange(token, color, rank)


def build_skeleton(rank: int, vertices: Iterable[str], edges: Iterable) -> ColoredDigraph:
    """Validate and freeze a 1-skeleton.

    ``edges`` holds ``(id, color, src, rng)`` records (tuples or :class:`Edge`).
    """
    if not isinstance(rank, int) or rank < 1:
        raise ValueError(f"rank must be a positive integer, got {rank!r}")
    vlist = list(vertices)
    vset = set()
    for v in vlist:
        if v in vset:
            raise DuplicateId(v)
        vset.add(v)
    seen = set(vset)
    elist = []
    for rec in edges:
        e = Edge(*rec)
        if e.id in seen:
            raise DuplicateId(e.id)
        seen.add(e.id)
        _check_color(e.id, e.color, rank)
        for end in (e.src, e.rng):
            if end not in vset:
                raise DanglingEndpoint(e.id, end)
        elist.append(e)
    return ColoredDigraph(rank, tuple(vlist), tuple(elist))


def subgraph_by_colors(g: ColoredDigraph, colors: Iterable[int]) -> ColoredDigraph:
    """Same vertices, only the edges whose color lies in ``colors``."""
    keep = set(colors)
    for c in keep:
        _check_color(f"color {c}", c, g.rank)
    return ColoredDigraph(g.rank, g.vertices, tuple(e for e in g.edges if e.color in keep))


def undirected_component(g: ColoredDigraph, w: str) -> tuple[frozenset, frozenset]:
    """Connected component of ``w`` ignoring edge direction: (vertices, edge ids)."""
    if not g.has_vertex(w):
        raise UnknownVertex(w)
    adjacency = defaultdict(list)
    for e in g.edges:
        adjacency[e.src].append((e.id, e.rng))
        adjacency[e.rng].append((e.id, e.src))
    verts = {w}
    edges = set()
    queue = deque([w])
    while queue:
        x = queue.popleft()
        for eid, y in adjacency[x]:
            edges.add(eid)
            if y not in verts:
                verts.add(y)
                queue.append(y)
    return frozenset(verts), frozenset(edges)
