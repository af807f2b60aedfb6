"""Validated k-graphs, graded functors, realizations and isomorphism search."""
from __future__ import annotations

import itertools
from collections import Counter, defaultdict, deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import Kg2Failure, Kg3Failure, NoIntegralLeftInverse, NotInjectiveOmega
from .factorization import (
    Path,
    SquareSet,
    canonical_form,
    color_word,
    equivalent,
    is_composable,
    path_rng,
    path_src,
    paths_into,
    validate_kg2,
    validate_kg3,
)
from .report import Report
from .skeleton import ColoredDigraph, build_skeleton


@dataclass(frozen=True, eq=False)
class KGraph:
    """A 1-skeleton plus square set that passed KG2 and KG3.

    Build instances with :func:`assemble`; the constructor does not validate.
    """

    skeleton: ColoredDigraph
    squares: SquareSet
    kg2: Report = field(repr=False)
    kg3: Report = field(repr=False)

    @property
    def rank(self) -> int:
        return self.skeleton.rank

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.skeleton.vertices

    @property
    def edges(self):
        return self.skeleton.edges

    def __repr__(self):
        g = self.skeleton
        return f"KGraph(rank={g.rank}, |V|={len(g.vertices)}, |E|={len(g.edges)}, |S|={len(self.squares)})"

    def degree(self, path: Sequence[str]) -> tuple[int, ...]:
        return self.skeleton.degree_vector(path)

    def canonical(self, path: Sequence[str]) -> Path:
        return canonical_form(self.skeleton, self.squares, path)

    def equivalent(self, p: Sequence[str], q: Sequence[str]) -> bool:
        return equivalent(self.skeleton, self.squares, p, q)

    def morphism_key(self, path: Sequence[str], vertex: str | None = None) -> tuple:
        """Hashable identity of the morphism represented by ``path``.

        Empty paths need ``vertex`` to say which identity morphism they are.
        """
        path = tuple(path)
        if not path:
            return (vertex, vertex, ())
        g = self.skeleton
        return (path_src(g, path), path_rng(g, path), self.canonical(path))

    def morphisms_into(self, v: str, degree: Sequence[int]) -> list[Path]:
        """Normal forms of ``v Λ^n``: one canonical-word path per morphism."""
        word = [c for c in range(1, self.rank + 1) for _ in range(degree[c - 1])]
        return list(paths_into(self.skeleton, v, word))

    def morphisms(self, max_length: int) -> Iterator[tuple[str, Path]]:
        """All morphisms with ``|d| <= max_length`` as ``(range, normal form)``."""
        for v in self.vertices:
            yield v, ()
            for n in range(1, max_length + 1):
                for word in itertools.combinations_with_replacement(range(1, self.rank + 1), n):
                    for p in paths_into(self.skeleton, v, word):
                        yield v, p


def assemble(skeleton: ColoredDigraph, squares: SquareSet | Iterable) -> KGraph:
    """Validate KG2 then KG3 and wrap the pair as a :class:`KGraph`."""
    if not isinstance(squares, SquareSet):
        squares = SquareSet(squares)
    kg2 = validate_kg2(skeleton, squares)
    if not kg2.ok:
        raise Kg2Failure(kg2)
    kg3 = validate_kg3(skeleton, squares, kg2)
    if not kg3.ok:
        raise Kg3Failure(kg3)
    return KGraph(skeleton, squares, kg2, kg3)


def source_free_report(k: KGraph) -> Report:
    """Aggregate and per-color incoming-edge checks at every vertex.

    Aggregate means some edge has range ``v``; per-color means every color
    has one. The report passes only when the per-color condition holds.
    """
    g = k.skeleton
    report = Report("source-free")
    aggregate, per_color, missing = {}, {}, []
    for v in g.vertices:
        colors = [c for c in range(1, g.rank + 1) if g.in_edges(v, c)]
        aggregate[v] = bool(colors)
        per_color[v] = len(colors) == g.rank
        for c in range(1, g.rank + 1):
            if c not in colors:
                missing.append([v, c])
                report.fail(f"vertex {v} receives no edge of color {c}")
    report.details.update(
        aggregate=aggregate,
        per_color=per_color,
        aggregate_ok=all(aggregate.values()),
        violations=missing,
    )
    return report


# -- graded functors ----------------------------------------------------------

class GradedFunctor:
    """A functor to Z^m given by its values on edges; vertices go to 0."""

    def __init__(self, values: Mapping[str, Sequence[int]], dim: int):
        self.dim = dim
        self.values = {e: tuple(v) for e, v in values.items()}

    @classmethod
    def degree(cls, k: KGraph) -> "GradedFunctor":
        return cls({e.id: _unit(e.color, k.rank) for e in k.edges}, k.rank)

    def __call__(self, path: Iterable[str]) -> tuple[int, ...]:
        total = [0] * self.dim
        for e in path:
            for i, x in enumerate(self.values[e]):
                total[i] += x
        return tuple(total)


def _unit(color: int, dim: int) -> tuple[int, ...]:
    return tuple(1 if i == color - 1 else 0 for i in range(dim))


def check_graded_functor(k: KGraph, grading: GradedFunctor) -> Report:
    report = Report("graded functor")
    missing = [e.id for e in k.edges if e.id not in grading.values]
    for e in missing:
        report.fail(f"no value for edge {e}")
    if missing:
        return report
    bad = []
    for sq in k.squares:
        left, right = grading(sq.lhs), grading(sq.rhs)
        if left != right:
            bad.append([list(sq.lhs), list(sq.rhs)])
            report.fail(f"square {' '.join(sq.lhs)} = {' '.join(sq.rhs)}: {left} != {right}")
    report.details.update(violations=bad, squares_checked=len(k.squares))
    return report


# -- realizations ------------------------------------------------------------

@dataclass
class Realization:
    """A functor ``source -> target`` on edges plus a grading of ``target``.

    ``edge_map`` sends each source edge to a target path (possibly empty, in
    which case ``vertex_map`` says where it lands).
    """

    source: KGraph
    target: KGraph
    vertex_map: dict[str, str]
    edge_map: dict[str, Path]
    grading: GradedFunctor

    def image(self, path: Sequence[str]) -> Path:
        out: tuple = ()
        for e in path:
            out = out + tuple(self.edge_map[e])
        return out


DEFAULT_INJECTIVITY_BOUND = 3


def verify_realization(r: Realization, degree_bound: int | None = DEFAULT_INJECTIVITY_BOUND) -> Report:
    """Endpoint, grading, relation and (bounded) injectivity checks.

    ``degree_bound=None`` skips the injectivity check.
    """
    report = Report("realization")
    src_g, tgt = r.source.skeleton, r.target
    tgt_g = tgt.skeleton

    endpoint_bad = []
    for e in src_g.edges:
        img = tuple(r.edge_map.get(e.id, ()))
        if e.id not in r.edge_map:
            endpoint_bad.append(e.id)
            report.fail(f"(a) edge {e.id} has no image")
            continue
        vs, vr = r.vertex_map.get(e.src), r.vertex_map.get(e.rng)
        if not img:
            if vs != vr:
                endpoint_bad.append(e.id)
                report.fail(f"(a) edge {e.id} collapses to a vertex but its endpoints map apart")
            continue
        if not all(tgt_g.has_edge(x) for x in img) or not is_composable(tgt_g, img):
            endpoint_bad.append(e.id)
            report.fail(f"(a) image of {e.id} is not a path of the target")
            continue
        if path_src(tgt_g, img) != vs or path_rng(tgt_g, img) != vr:
            endpoint_bad.append(e.id)
            report.fail(f"(a) image of {e.id} has the wrong endpoints")
    report.details["endpoints_ok"] = not endpoint_bad
    if endpoint_bad:
        return report

    grading_bad = []
    for e in src_g.edges:
        got = r.grading(r.edge_map[e.id])
        want = _unit(e.color, src_g.rank)
        if got != want:
            grading_bad.append(e.id)
            report.fail(f"(b) grading of image of {e.id} is {got}, expected {want}")
    report.details["grading_ok"] = not grading_bad

    relation_bad = []
    for sq in r.source.squares:
        v = r.vertex_map[src_g.src(sq.lhs[1])]
        if tgt.morphism_key(r.image(sq.lhs), v) != tgt.morphism_key(r.image(sq.rhs), v):
            relation_bad.append([list(sq.lhs), list(sq.rhs)])
            report.fail(f"(c) images of square {' '.join(sq.lhs)} = {' '.join(sq.rhs)} are not equivalent")
    report.details["relations_ok"] = not relation_bad

    if degree_bound is not None:
        seen: dict[tuple, tuple] = {}
        collisions = []
        count = 0
        for v, p in r.source.morphisms(degree_bound):
            count += 1
            start = r.vertex_map[src_g.src(p[-1])] if p else r.vertex_map[v]
            key = tgt.morphism_key(r.image(p), start)
            if key in seen and seen[key] != (v, p):
                collisions.append([list(seen[key][1]), list(p)])
                report.fail(f"(d) {' '.join(seen[key][1]) or seen[key][0]} and {' '.join(p) or v} have equal images")
            seen.setdefault(key, (v, p))
        report.details["injectivity"] = {"bound": degree_bound, "morphisms": count, "collisions": collisions}
    return report


# -- quasimorphisms -----------------------------------------------------------

@dataclass(frozen=True)
class MonoidMap:
    """A monoid map N^l -> N^k given by a k x l nonnegative integer matrix."""

    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "matrix", tuple(tuple(int(x) for x in row) for row in self.matrix))
        if any(x < 0 for row in self.matrix for x in row):
            raise ValueError("monoid map entries must be nonnegative")
        if len({len(row) for row in self.matrix}) > 1:
            raise ValueError("ragged matrix")

    @property
    def rows(self) -> int:
        return len(self.matrix)

    @property
    def cols(self) -> int:
        return len(self.matrix[0]) if self.matrix else 0

    def __call__(self, n: Sequence[int]) -> tuple[int, ...]:
        return tuple(sum(a * x for a, x in zip(row, n)) for row in self.matrix)

    def left_inverse(self) -> tuple[tuple[int, ...], ...]:
        """An integer matrix ``pi`` with ``pi @ omega = I``.

        Found by column-reducing ``omega^T`` to lower-triangular Hermite form.
        Raises :class:`NotInjectiveOmega` if the columns are dependent and
        :class:`NoIntegralLeftInverse` if only rational inverses exist.
        """
        k, l = self.rows, self.cols
        a = [[self.matrix[i][j] for i in range(k)] for j in range(l)]  # omega^T, l x k
        v = [[int(i == j) for j in range(k)] for i in range(k)]

        def col_op(dst, src, factor):
            # column dst -= factor * column src, mirrored on v
            for row in a:
                row[dst] -= factor * row[src]
            for row in v:
                row[dst] -= factor * row[src]

        def col_swap(i, j):
            for row in a:
                row[i], row[j] = row[j], row[i]
            for row in v:
                row[i], row[j] = row[j], row[i]

        for r in range(l):
            if r >= k:
                raise NotInjectiveOmega("omega has more columns than rows")
            while True:
                nonzero = [j for j in range(r, k) if a[r][j] != 0]
                if not nonzero:
                    raise NotInjectiveOmega("omega has dependent columns")
                pivot = min(nonzero, key=lambda j: abs(a[r][j]))
                col_swap(r, pivot)
                done = True
                for j in range(r + 1, k):
                    if a[r][j]:
                        col_op(j, r, a[r][j] // a[r][r])
                        if a[r][j]:
                            done = False
                if done:
                    break
        diag = [a[i][i] for i in range(l)]
        if any(abs(d) != 1 for d in diag):
            raise NoIntegralLeftInverse(f"Hermite diagonal {diag} is not unimodular")
        # h^-1 for lower-triangular h with unit diagonal entries
        h = [[a[i][j] for j in range(l)] for i in range(l)]
        hinv = [[0] * l for _ in range(l)]
        for col in range(l):
            for i in range(l):
                s = int(i == col) - sum(h[i][j] * hinv[j][col] for j in range(i))
                hinv[i][col] = s * h[i][i]  # h[i][i] is +-1
        x = [[sum(v[i][t] * hinv[t][j] for t in range(l)) for j in range(l)] for i in range(k)]
        return tuple(tuple(x[i][j] for i in range(k)) for j in range(l))


def verify_quasimorphism(
    gamma: KGraph,
    lam: KGraph,
    psi: Mapping[str, Sequence[str]],
    omega: MonoidMap,
    vertex_map: Mapping[str, str] | None = None,
    induce: bool | None = None,
    degree_bound: int | None = DEFAULT_INJECTIVITY_BOUND,
) -> Report:
    """Check ``omega . d_gamma == d_lam . psi`` and square compatibility.

    With ``induce=None`` the induced realization is built and verified
    whenever omega is injective; ``induce=True`` makes a non-injective omega
    an error; ``induce=False`` never builds it.
    """
    report = Report("quasimorphism")
    if omega.rows != lam.rank or omega.cols != gamma.rank:
        report.fail(f"omega is {omega.rows}x{omega.cols}, expected {lam.rank}x{gamma.rank}")
        return report
    vmap = dict(vertex_map) if vertex_map is not None else _infer_vertex_map(gamma, lam, psi)
    lam_g = lam.skeleton
    for e in gamma.edges:
        img = tuple(psi.get(e.id, ()))
        if e.id not in psi or not all(lam_g.has_edge(x) for x in img) or not is_composable(lam_g, img):
            report.fail(f"psi({e.id}) is not a path of the target")
            continue
        if img and (path_src(lam_g, img) != vmap.get(e.src) or path_rng(lam_g, img) != vmap.get(e.rng)):
            report.fail(f"psi({e.id}) has the wrong endpoints")
        want = omega(_unit(e.color, gamma.rank))
        got = lam.degree(img)
        if got != want:
            report.fail(f"d(psi({e.id})) = {got}, omega(d({e.id})) = {want}")
    if not report.ok:
        return report
    for sq in gamma.squares:
        v = vmap[gamma.skeleton.src(sq.lhs[1])]
        lhs = tuple(x for e in sq.lhs for x in psi[e])
        rhs = tuple(x for e in sq.rhs for x in psi[e])
        if lam.morphism_key(lhs, v) != lam.morphism_key(rhs, v):
            report.fail(f"images of square {' '.join(sq.lhs)} = {' '.join(sq.rhs)} are not equivalent")
    if induce is False:
        return report
    try:
        pi = omega.left_inverse()
    except NotInjectiveOmega as exc:
        if induce:
            raise
        report.details["induced"] = f"skipped: {exc}"
        return report
    grading = GradedFunctor(
        {e.id: tuple(row[e.color - 1] for row in pi) for e in lam.edges},
        gamma.rank,
    )
    realization = Realization(gamma, lam, vmap, {e: tuple(p) for e, p in psi.items()}, grading)
    sub = verify_realization(realization, degree_bound)
    report.details["left_inverse"] = [list(row) for row in pi]
    report.details["induced"] = sub
    if not sub.ok:
        report.fail("induced realization does not verify")
    return report


def _infer_vertex_map(gamma, lam, psi):
    vmap = {}
    for e in gamma.edges:
        img = tuple(psi.get(e.id, ()))
        if img:
            vmap.setdefault(e.src, path_src(lam.skeleton, img))
            vmap.setdefault(e.rng, path_rng(lam.skeleton, img))
    return vmap


def identity_realization(k: KGraph) -> Realization:
    return Realization(
        k, k, {v: v for v in k.vertices}, {e.id: (e.id,) for e in k.edges}, GradedFunctor.degree(k)
    )


# -- isomorphism ---------------------------------------------------------------

@dataclass
class Isomorphism:
    vertex_map: dict[str, str]
    edge_map: dict[str, str]
    color_permutation: tuple[int, ...]  # color c of the first graph -> color_permutation[c-1]

    def to_dict(self):
        return {
            "vertices": dict(sorted(self.vertex_map.items())),
            "edges": dict(sorted(self.edge_map.items())),
            "colors": list(self.color_permutation),
        }


def _profile(g: ColoredDigraph, v: str, perm) -> tuple:
    k = g.rank
    ins = [0] * k
    outs = [0] * k
    loops = [0] * k
    for c in range(1, k + 1):
        pc = perm[c - 1] - 1
        ins[pc] = len(g.in_edges(v, c))
        outs[pc] = len(g.out_edges(v, c))
        loops[pc] = sum(1 for e in g.out_edges(v, c) if g.rng(e) == v)
    return tuple(ins), tuple(outs), tuple(loops)


def isomorphic(k1: KGraph, k2: KGraph, allow_color_permutation: bool = False) -> Isomorphism | None:
    """Find a square-preserving isomorphism ``k1 -> k2``, or ``None``.

    Colors are fixed unless ``allow_color_permutation`` is set, in which case
    every permutation of the colors is tried in lexicographic order.
    """
    if k1.rank != k2.rank:
        return None
    perms = itertools.permutations(range(1, k1.rank + 1)) if allow_color_permutation else [
        tuple(range(1, k1.rank + 1))
    ]
    for perm in perms:
        found = _isomorphism_with(k1, k2, perm)
        if found is not None:
            return found
    return None


def _isomorphism_with(k1: KGraph, k2: KGraph, perm) -> Isomorphism | None:
    g1, g2 = k1.skeleton, k2.skeleton
    ident = tuple(range(1, g2.rank + 1))
    if len(g1.vertices) != len(g2.vertices) or len(g1.edges) != len(g2.edges):
        return None
    if len(k1.squares) != len(k2.squares):
        return None
    if Counter(perm[e.color - 1] for e in g1.edges) != Counter(e.color for e in g2.edges):
        return None
    prof1 = {v: _profile(g1, v, perm) for v in g1.vertices}
    prof2 = {v: _profile(g2, v, ident) for v in g2.vertices}
    if Counter(prof1.values()) != Counter(prof2.values()):
        return None

    def links(g, p):
        table = defaultdict(lambda: [0] * g.rank)
        nbrs = defaultdict(set)
        for e in g.edges:
            table[e.src, e.rng][p[e.color - 1] - 1] += 1
            nbrs[e.src].add(e.rng)
            nbrs[e.rng].add(e.src)
        return {key: tuple(v) for key, v in table.items()}, nbrs

    (link1, nbrs1), (link2, nbrs2) = links(g1, perm), links(g2, ident)
    none = (0,) * g1.rank

    position1 = {v: i for i, v in enumerate(g1.vertices)}
    order = []
    placed = set()
    for root in g1.vertices:
        if root in placed:
            continue
        placed.add(root)
        queue = deque([root])
        while queue:
            x = queue.popleft()
            order.append(x)
            for y in _ordered(nbrs1[x], position1):
                if y not in placed:
                    placed.add(y)
                    queue.append(y)

    by_profile = defaultdict(list)
    for v in g2.vertices:
        by_profile[prof2[v]].append(v)

    vmap: dict[str, str] = {}
    inverse: dict[str, str] = {}

    def candidates(x):
        pool = by_profile[prof1[x]]
        preferred = [x] if x in pool else []
        return preferred + [y for y in pool if y != x]

    def consistent(x, y):
        if link1.get((x, x), none) != link2.get((y, y), none):
            return False
        mapped1 = [u for u in nbrs1[x] if u in vmap]
        mapped2 = [u for u in nbrs2[y] if u in inverse]
        if len(mapped1) != len(mapped2):
            return False
        for u in mapped1:
            mu = vmap[u]
            if link1.get((x, u), none) != link2.get((y, mu), none):
                return False
            if link1.get((u, x), none) != link2.get((mu, y), none):
                return False
        return True

    def search(i):
        if i == len(order):
            emap = _match_edges(k1, k2, perm, vmap)
            if emap is not None:
                return Isomorphism(dict(vmap), emap, tuple(perm))
            return None
        x = order[i]
        for y in candidates(x):
            if y in inverse or not consistent(x, y):
                continue
            vmap[x] = y
            inverse[y] = x
            found = search(i + 1)
            if found is not None:
                return found
            del vmap[x]
            del inverse[y]
        return None

    return search(0)


def _ordered(items, position):
    return sorted(items, key=position.__getitem__)


def _match_edges(k1, k2, perm, vmap):
    g1, g2 = k1.skeleton, k2.skeleton
    classes2 = defaultdict(list)
    for e in g2.edges:
        classes2[e.src, e.rng, e.color].append(e.id)
    order = list(g1.edges)
    touching = defaultdict(list)
    for sq in k1.squares:
        for e in set(sq.edges()):
            touching[e].append(sq)
    emap: dict[str, str] = {}
    used: set = set()

    def square_ok(sq):
        if not all(e in emap for e in sq.edges()):
            return True
        lhs = (emap[sq.lhs[0]], emap[sq.lhs[1]])
        rhs = (emap[sq.rhs[0]], emap[sq.rhs[1]])
        return k2.squares.partner(lhs) == rhs

    def search(i):
        if i == len(order):
            return True
        e = order[i]
        pool = classes2[vmap[e.src], vmap[e.rng], perm[e.color - 1]]
        pool = ([e.id] if e.id in pool else []) + [f for f in pool if f != e.id]
        for f in pool:
            if f in used:
                continue
            emap[e.id] = f
            used.add(f)
            if all(square_ok(sq) for sq in touching[e.id]) and search(i + 1):
                return True
            del emap[e.id]
            used.discard(f)
        return False

    return dict(emap) if search(0) else None


def relabel(k: KGraph, vertex_names: Mapping[str, str] = {}, edge_names: Mapping[str, str] = {}) -> KGraph:
    """Rename vertices and edges; unlisted ids keep their names."""
    g = k.skeleton
    rv = lambda v: vertex_names.get(v, v)
    re_ = lambda e: edge_names.get(e, e)
    skel = build_skeleton(
        g.rank, [rv(v) for v in g.vertices], [(re_(e.id), e.color, rv(e.src), rv(e.rng)) for e in g.edges]
    )
    squares = [((re_(a), re_(b)), (re_(c), re_(d))) for (a, b), (c, d) in k.squares]
    return assemble(skel, squares)
