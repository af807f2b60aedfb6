"""Complete edges and complete-edge reduction."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from ..errors import HypothesesNotMet, UnknownVertex
from ..kgraph import GradedFunctor, KGraph, Realization, assemble, check_graded_functor
from ..report import Report
from ..skeleton import build_skeleton
from .reduction import induce_squares, is_stationary


def is_complete_edge(k: KGraph, edges: Iterable[str]) -> Report:
    """One edge per color, common endpoints, closed under all square swaps."""
    g = k.skeleton
    F = list(edges)
    report = Report("complete edge")
    colors = sorted(g.color(e) for e in F)
    if colors != list(range(1, g.rank + 1)):
        report.fail(f"colors {colors} are not exactly 1..{g.rank}")
        return report
    closure = is_stationary(k, F, range(1, g.rank + 1))
    report.details["closure"] = closure
    if not closure.ok:
        for p in closure.problems:
            report.fail(p)
    return report


@dataclass
class CompleteEdgeResult:
    graph: KGraph
    realization: Realization
    vertex: str
    target: str  # the common range x of the source-w complete edge
    fixed_edge: str
    hypotheses: Report
    grading_report: Report


def complete_edge_reduction(k: KGraph, w: str, fixed_edge: str | None = None) -> CompleteEdgeResult:
    """Remove ``w`` and its outgoing complete edge; send edges into ``w`` to x.

    ``fixed_edge`` is the outgoing edge used by the parent map (default: its
    color-1 edge).
    """
    g = k.skeleton
    if not g.has_vertex(w):
        raise UnknownVertex(w)
    hyp = Report("H_CR")
    incoming, outgoing = g.in_edges(w), g.out_edges(w)
    for label, side in (("edges into", incoming), ("edges out of", outgoing)):
        sub = is_complete_edge(k, side) if side else None
        if sub is None:
            hyp.fail(f"no {label} {w}")
        elif not sub.ok:
            hyp.fail(f"{label} {w} do not form a complete edge: {'; '.join(sub.problems)}")
    if hyp.ok:
        x = g.rng(outgoing[0])
        if x == w:
            hyp.fail(f"outgoing complete edge at {w} is a loop")
    if not hyp.ok:
        raise HypothesesNotMet(hyp)

    if fixed_edge is None:
        fixed_edge = min(outgoing, key=g.color)
    elif fixed_edge not in outgoing:
        hyp.fail(f"{fixed_edge} is not an edge out of {w}")
        raise HypothesesNotMet(hyp)
    removed = set(outgoing)
    vertices = [v for v in g.vertices if v != w]
    edges, par = [], {}
    for e in g.edges:
        if e.id in removed:
            continue
        if e.rng == w:
            edges.append((e.id, e.color, e.src, x))
            par[e.id] = (fixed_edge, e.id)
        else:
            edges.append(tuple(e))
            par[e.id] = (e.id,)
    new = build_skeleton(g.rank, vertices, edges)

    shift = g.color(fixed_edge) - 1
    values = {}
    for e in g.edges:
        unit = [1 if i == e.color - 1 else 0 for i in range(g.rank)]
        if e.src == w:
            unit[shift] -= 1
        values[e.id] = tuple(unit)
    grading = GradedFunctor(values, g.rank)
    grading_report = check_graded_functor(k, grading)
    if not grading_report.ok:
        raise HypothesesNotMet(grading_report)

    out = assemble(new, induce_squares(new, k, par, what="complete-edge reduction"))
    realization = Realization(out, k, {v: v for v in vertices}, par, grading)
    return CompleteEdgeResult(out, realization, w, x, fixed_edge, hyp, grading_report)
