"""The reduction move and its hypothesis checks."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from ..errors import (
    BridgeColorNotInB,
    ColorOutOfRange,
    HypothesesNotMet,
    InducedSquareAmbiguity,
    UnknownVertex,
)
from ..factorization import Square, bicolored_two_paths, color_word
from ..kgraph import GradedFunctor, KGraph, Realization, assemble, check_graded_functor
from ..report import Report
from ..skeleton import ColoredDigraph, build_skeleton, subgraph_by_colors, undirected_component


def _color_set(k: KGraph, colors: Iterable[int]) -> frozenset:
    cs = frozenset(colors)
    for c in cs:
        if not isinstance(c, int) or not 1 <= c <= k.rank:
            raise ColorOutOfRange(f"color {c}", c, k.rank)
    return cs


def neighborhood(k: KGraph, w: str, colors: Iterable[int]) -> tuple[frozenset, frozenset]:
    """Component of ``w`` in the subgraph of colors outside ``colors``."""
    B = _color_set(k, colors)
    if not k.skeleton.has_vertex(w):
        raise UnknownVertex(w)
    rest = [c for c in range(1, k.rank + 1) if c not in B]
    return undirected_component(subgraph_by_colors(k.skeleton, rest), w)


@dataclass
class Reducibility:
    vertex: str
    ok: bool
    source: str | None = None
    bridges: dict[int, str] = field(default_factory=dict)
    failure: str | None = None

    def __bool__(self):
        return self.ok


def is_reducible(k: KGraph, w: str, colors: Iterable[int]) -> Reducibility:
    """Single bridge per color, common bridge source, no B-loop at ``w``,
    and only B-colored edges from the bridge source to ``w``."""
    g = k.skeleton
    if not g.has_vertex(w):
        raise UnknownVertex(w)
    B = sorted(_color_set(k, colors))
    if not B:
        return Reducibility(w, False, failure="color set is empty")
    bridges = {}
    for b in B:
        into = g.in_edges(w, b)
        if len(into) != 1:
            return Reducibility(w, False, failure=f"{len(into)} edges of color {b} have range {w}")
        bridges[b] = into[0]
    sources = {g.src(e) for e in bridges.values()}
    if len(sources) != 1:
        return Reducibility(w, False, bridges=bridges, failure=f"bridge edges have several sources {sorted(sources)}")
    (v,) = sources
    for b in B:
        for e in g.out_edges(w, b):
            if g.rng(e) == w:
                return Reducibility(w, False, v, bridges, failure=f"edge {e} of color {b} is a loop at {w}")
    for e in g.in_edges(w):
        if g.src(e) == v and g.color(e) not in B:
            return Reducibility(w, False, v, bridges, failure=f"edge {e} from {v} to {w} has color {g.color(e)} outside B")
    return Reducibility(w, True, v, bridges)


def is_stationary(k: KGraph, edges: Iterable[str], colors: Iterable[int]) -> Report:
    """Common endpoints and closure of ``edges`` under swaps with B-colored edges."""
    g, S = k.skeleton, k.squares
    F = list(edges)
    B = _color_set(k, colors)
    report = Report("stationary")
    witnesses = []
    if not F:
        report.fail("edge set is empty")
        return report
    ends = {(g.src(f), g.rng(f)) for f in F}
    if len(ends) != 1:
        report.fail(f"edges do not share source and range: {sorted(ends)}")
        return report
    members = set(F)
    for f in F:
        for lam in g.out_edges(g.rng(f)):
            if g.color(lam) not in B or g.color(lam) == g.color(f):
                continue
            nu, mu = S.partner((lam, f)) or (lam, f)
            if mu not in members:
                witnesses.append([[lam, f], [nu, mu]])
                report.fail(f"{lam} {f} ~ {nu} {mu} but {mu} is not in the set")
        for lam in g.in_edges(g.src(f)):
            if g.color(lam) not in B or g.color(lam) == g.color(f):
                continue
            nu, mu = S.partner((f, lam)) or (f, lam)
            if nu not in members:
                witnesses.append([[f, lam], [nu, mu]])
                report.fail(f"{f} {lam} ~ {nu} {mu} but {nu} is not in the set")
    report.details["witnesses"] = witnesses
    return report


@dataclass
class HrReport(Report):
    vertex: str = ""
    colors: tuple[int, ...] = ()
    complement: tuple[int, ...] = ()
    u_vertices: frozenset = frozenset()
    u_edges: frozenset = frozenset()
    reducibility: dict = field(default_factory=dict)
    bridges: frozenset = frozenset()
    cobridges: frozenset = frozenset()
    disjoint: bool = False
    stationary: dict = field(default_factory=dict)
    cobridge_exit: bool = False

    def bridge(self, b: int, x: str) -> str:
        """The bridge edge of color ``b`` with range ``x``."""
        return self.reducibility[x].bridges[b]

    def to_dict(self):
        out = super().to_dict()
        out.update(
            vertex=self.vertex,
            colors=list(self.colors),
            complement=list(self.complement),
            neighborhood={"vertices": sorted(self.u_vertices), "edges": sorted(self.u_edges)},
            reducible={
                x: {
                    "ok": r.ok,
                    "source": r.source,
                    "bridges": {str(b): e for b, e in sorted(r.bridges.items())},
                    "failure": r.failure,
                }
                for x, r in sorted(self.reducibility.items())
            },
            bridges=sorted(self.bridges),
            cobridges=sorted(self.cobridges),
            disjoint=self.disjoint,
            stationary={x: r.ok for x, r in sorted(self.stationary.items())},
            cobridge_exit=self.cobridge_exit,
        )
        return out


def check_hr(k: KGraph, w: str, colors: Iterable[int]) -> HrReport:
    """Full reducibility of ``w`` with stationary bridge sets."""
    g = k.skeleton
    B = _color_set(k, colors)
    report = HrReport(
        "H_R",
        vertex=w,
        colors=tuple(sorted(B)),
        complement=tuple(c for c in range(1, k.rank + 1) if c not in B),
    )
    if not B:
        report.fail("color set is empty")
        return report
    U, UE = neighborhood(k, w, B)
    report.u_vertices, report.u_edges = U, UE
    for x in sorted(U):
        r = is_reducible(k, x, B)
        report.reducibility[x] = r
        if not r:
            report.fail(f"{x} is not reducible: {r.failure}")
    bridges = frozenset(e for x in U for e in g.in_edges(x) if g.color(e) in B)
    cobridges = frozenset(e for x in U for e in g.out_edges(x) if g.color(e) in B)
    report.bridges, report.cobridges = bridges, cobridges
    report.disjoint = not (bridges & cobridges)
    if not report.disjoint:
        report.fail(f"bridge and co-bridge edges overlap: {sorted(bridges & cobridges)}")
    for x in sorted(U):
        into = [e for e in g.in_edges(x) if g.color(e) in B]
        st = is_stationary(k, into, B)
        report.stationary[x] = st
        if not st:
            report.fail(f"bridge set at {x} is not stationary: {'; '.join(st.problems)}")
    # a consequence of the above; failing here with everything else passing is a bug
    escaping = sorted(e for e in cobridges if g.rng(e) in U)
    report.cobridge_exit = not escaping
    if report.ok and escaping:
        report.fail(f"co-bridge edges {escaping} return into the neighborhood")
    return report


# -- the move ------------------------------------------------------------------

@dataclass
class ReductionResult:
    graph: KGraph
    realization: Realization
    bridge_color: int
    hr: HrReport
    classification: dict[str, str]  # edge of the output -> "Xi" or "Theta"
    grading_report: Report
    realization_report: Report


def _unit(c, k):
    return tuple(1 if i == c - 1 else 0 for i in range(k))


def induce_squares(
    new: ColoredDigraph, parent: KGraph, par: Mapping[str, tuple], what: str = "reduction"
) -> list[Square]:
    """Pair up the bicolored 2-paths of ``new`` whose parent images are equivalent."""
    groups = defaultdict(list)
    for p in bicolored_two_paths(new):
        image = tuple(par[p[0]]) + tuple(par[p[1]])
        groups[parent.morphism_key(image)].append(p)
    squares = []
    for key, members in groups.items():
        if len(members) != 2:
            raise InducedSquareAmbiguity(
                f"{what}: {len(members)} 2-path(s) {members} share the parent class {' '.join(key[2])}"
            )
        p, q = sorted(members)
        if color_word(new, p) != color_word(new, q)[::-1]:
            raise InducedSquareAmbiguity(f"{what}: {p} and {q} do not transpose colors")
        squares.append(Square(p, q))
    squares.sort()
    return squares


def reduce(k: KGraph, w: str, colors: Iterable[int], bridge_color: int) -> ReductionResult:
    """Delete the neighborhood of ``w`` and its bridges; re-source co-bridges."""
    B = _color_set(k, colors)
    if bridge_color not in B:
        raise BridgeColorNotInB(f"bridge color {bridge_color} is not in {sorted(B)}")
    hr = check_hr(k, w, B)
    if not hr.ok:
        raise HypothesesNotMet(hr)
    g = k.skeleton
    U = hr.u_vertices
    removed = hr.u_edges | hr.bridges

    vertices = [v for v in g.vertices if v not in U]
    edges, par, classification = [], {}, {}
    for e in g.edges:
        if e.id in removed:
            continue
        if e.src in U:
            f = hr.bridge(bridge_color, e.src)
            edges.append((e.id, e.color, g.src(f), e.rng))
            par[e.id] = (e.id, f)
            classification[e.id] = "Theta"
        else:
            edges.append((e.id, e.color, e.src, e.rng))
            par[e.id] = (e.id,)
            classification[e.id] = "Xi"
    new = build_skeleton(g.rank, vertices, edges)

    grading = GradedFunctor(
        {
            e.id: tuple(
                x - (1 if (e.src in U and e.color in B and i == bridge_color - 1) else 0)
                for i, x in enumerate(_unit(e.color, g.rank))
            )
            for e in g.edges
        },
        g.rank,
    )
    grading_report = check_graded_functor(k, grading)
    if not grading_report.ok:
        raise HypothesesNotMet(grading_report)

    squares = induce_squares(new, k, par)
    out = assemble(new, squares)
    realization = Realization(out, k, {v: v for v in vertices}, par, grading)
    realization_report = Report("grading of parent images")
    for e in new.edges:
        if grading(par[e.id]) != _unit(e.color, g.rank):
            realization_report.fail(f"grading of par({e.id}) is {grading(par[e.id])}")
    return ReductionResult(out, realization, bridge_color, hr, classification, grading_report, realization_report)
