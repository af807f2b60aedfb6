"""Hereditary/saturated closure of vertex sets and the Morita certificate."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable

from .errors import UnknownVertex
from .kgraph import KGraph, source_free_report, verify_realization
from .moves.reduction import ReductionResult, reduce
from .report import Report


@dataclass
class Saturation:
    seed: frozenset
    closure: frozenset
    max_degree: int
    trace: list[tuple[str, str, object]] = field(default_factory=list)
    # each trace step is (vertex, rule, witness): witness is the edge for
    # "hereditary" and the degree vector for "saturated"

    def to_dict(self):
        return {
            "seed": sorted(self.seed),
            "closure": sorted(self.closure),
            "max_degree": self.max_degree,
            "trace": [[v, rule, list(w) if isinstance(w, tuple) else w] for v, rule, w in self.trace],
        }


def _degrees(rank, max_degree):
    for total in range(1, max_degree + 1):
        for combo in itertools.combinations_with_replacement(range(rank), total):
            n = [0] * rank
            for i in combo:
                n[i] += 1
            yield tuple(n)


def sources_of_degree(k: KGraph, v: str, n: tuple[int, ...], memo: dict | None = None) -> frozenset:
    """``s(v Λ^n)``, peeling off the lowest color first (unique factorization)."""
    if memo is None:
        memo = {}
    key = (v, n)
    if key in memo:
        return memo[key]
    c = next((i for i, x in enumerate(n) if x), None)
    if c is None:
        out = frozenset([v])
    else:
        rest = n[:c] + (n[c] - 1,) + n[c + 1:]
        g = k.skeleton
        out = frozenset().union(*(sources_of_degree(k, g.src(e), rest, memo) for e in g.in_edges(v, c + 1)))
    memo[key] = out
    return out


def saturate(k: KGraph, seed: Iterable[str], max_degree: int | None = None) -> Saturation:
    """Least hereditary set containing ``seed`` that is saturated for every
    degree ``n`` with ``1 <= |n| <= max_degree``.

    Hereditary closure runs to a fixed point before each saturated step.
    ``max_degree=0`` gives the hereditary closure alone; ``None`` uses the
    number of vertices.
    """
    g = k.skeleton
    X = frozenset(seed)
    for v in X:
        if not g.has_vertex(v):
            raise UnknownVertex(v)
    if max_degree is None:
        max_degree = len(g.vertices)
    sigma = set(X)
    trace = []
    degrees = list(_degrees(g.rank, max_degree))
    memo: dict = {}
    while True:
        frontier = sorted(sigma)
        while frontier:
            nxt = []
            for v in frontier:
                for e in g.in_edges(v):
                    s = g.src(e)
                    if s not in sigma:
                        sigma.add(s)
                        trace.append((s, "hereditary", e))
                        nxt.append(s)
            frontier = nxt
        added = False
        for v in g.vertices:
            if v in sigma:
                continue
            for n in degrees:
                if sources_of_degree(k, v, n, memo) <= sigma:
                    sigma.add(v)
                    trace.append((v, "saturated", n))
                    added = True
                    break
            if added:
                break
        if not added:
            return Saturation(X, frozenset(sigma), max_degree, trace)


def replay(k: KGraph, sat: Saturation) -> frozenset:
    """Re-apply a trace step by step, checking each justification by path enumeration."""
    g = k.skeleton
    sigma = set(sat.seed)
    for v, rule, witness in sat.trace:
        if rule == "hereditary":
            valid = g.rng(witness) in sigma and g.src(witness) == v
        else:
            valid = {g.src(p[-1]) for p in k.morphisms_into(v, witness)} <= sigma
        if not valid:
            raise ValueError(f"trace step {(v, rule, witness)} is not justified")
        sigma.add(v)
    return frozenset(sigma)


@dataclass
class MoritaCertificate:
    graph: KGraph
    vertex: str
    colors: tuple[int, ...]
    bridge_color: int
    reduction: ReductionResult
    source_free: Report
    realization: Report
    corner: frozenset
    saturation: Saturation
    hereditary_only: bool
    verdict: Report

    @property
    def ok(self) -> bool:
        return self.verdict.ok

    def to_dict(self):
        return {
            "vertex": self.vertex,
            "colors": list(self.colors),
            "bridge_color": self.bridge_color,
            "hypotheses": self.reduction.hr.to_dict(),
            "source_free": self.source_free.to_dict(),
            "grading": self.reduction.grading_report.to_dict(),
            "realization": self.realization.to_dict(),
            "corner": sorted(self.corner),
            "saturation": self.saturation.to_dict(),
            "hereditary_only": self.hereditary_only,
            "verdict": self.verdict.to_dict(),
        }


def morita_certificate(
    k: KGraph,
    w: str,
    colors: Iterable[int],
    bridge_color: int,
    injectivity_bound: int | None = 3,
    max_degree: int | None = None,
) -> MoritaCertificate:
    """Run the reduction and gather the combinatorial premises of corner
    Morita equivalence. Raises ``HypothesesNotMet`` if H_R fails."""
    colors = tuple(sorted(set(colors)))
    result = reduce(k, w, colors, bridge_color)
    sf = source_free_report(k)
    real = verify_realization(result.realization, injectivity_bound)
    corner = frozenset(v for v in k.vertices if v not in result.hr.u_vertices)
    sat = saturate(k, corner, 0)
    hereditary_only = len(sat.closure) == len(k.vertices)
    if not hereditary_only:
        sat = saturate(k, corner, max_degree)

    verdict = Report("Morita certificate")
    for sub in (result.hr, sf, result.grading_report, result.realization_report, real):
        if not sub.ok:
            verdict.fail(f"{sub.name} failed")
    if sat.closure != frozenset(k.vertices):
        missing = sorted(set(k.vertices) - sat.closure)
        verdict.fail(f"saturation of the corner misses {missing} (bound {sat.max_degree})")
    verdict.details["hereditary_only"] = hereditary_only
    return MoritaCertificate(
        k, w, colors, bridge_color, result, sf, real, corner, sat, hereditary_only, verdict
    )
