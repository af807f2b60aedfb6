"""The line-oriented ``.kg`` text format.

Example::

    kg 1
    # square a2 a1 = b2 b1 means a2 a1 ~ b2 b1, rightmost edge traversed first
    rank 2
    color 1 black
    #@ generator: torus 3 1
    vertex u0
    edge a0 1 u0 u1
    square a1 b0 = b1 a0

Plain ``#`` lines are comments and are dropped; ``#@ key: value`` lines are
metadata and survive a round trip. Serialization sorts every section, so
``serialize(parse(text))`` is the canonical form of ``text``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..errors import KGraphError
from ..factorization import Square
from ..kgraph import KGraph, assemble
from ..skeleton import ColoredDigraph, Edge, build_skeleton

FORMAT_VERSION = 1
CONVENTION = "# square a2 a1 = b2 b1 means a2 a1 ~ b2 b1, rightmost edge traversed first"

_TOKEN = re.compile(r"\S+")
_META = re.compile(r"#@\s*([A-Za-z0-9_.-]+)\s*:\s?(.*)$")


class KgSyntaxError(KGraphError):
    def __init__(self, line: int, column: int, expected: str, found: str | None = None):
        where = f"line {line}, column {column}"
        got = f", found {found!r}" if found is not None else ""
        super().__init__(f"{where}: expected {expected}{got}")
        self.line = line
        self.column = column
        self.expected = expected
        self.found = found


class KgSemanticError(KGraphError):
    def __init__(self, message: str, tokens=(), line: int | None = None):
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)
        self.tokens = tuple(tokens)
        self.line = line


@dataclass
class KgDocument:
    rank: int
    vertices: list[str] = field(default_factory=list)
    edges: list[Edge] = field(default_factory=list)
    squares: list[Square] = field(default_factory=list)
    color_names: dict[int, str] = field(default_factory=dict)
    metadata: dict[str, str] = field(default_factory=dict)
    version: int = FORMAT_VERSION

    def skeleton(self) -> ColoredDigraph:
        return build_skeleton(self.rank, self.vertices, self.edges)

    def to_kgraph(self) -> KGraph:
        """Validate KG2 and KG3; raises ``Kg2Failure`` / ``Kg3Failure``."""
        return assemble(self.skeleton(), self.squares)

    @classmethod
    def from_kgraph(cls, k: KGraph, color_names=None, metadata=None) -> "KgDocument":
        return cls(
            rank=k.rank,
            vertices=list(k.vertices),
            edges=list(k.edges),
            squares=list(k.squares),
            color_names=dict(color_names or {}),
            metadata=dict(metadata or {}),
        )

    def canonical(self) -> "KgDocument":
        squares = sorted({_oriented(sq) for sq in self.squares})
        return KgDocument(
            rank=self.rank,
            vertices=sorted(self.vertices),
            edges=sorted(self.edges, key=lambda e: e.id),
            squares=squares,
            color_names=dict(sorted(self.color_names.items())),
            metadata=dict(sorted(self.metadata.items())),
            version=self.version,
        )

    def to_dict(self) -> dict:
        doc = self.canonical()
        return {
            "format": "kg",
            "version": doc.version,
            "rank": doc.rank,
            "colors": {str(c): name for c, name in doc.color_names.items()},
            "metadata": doc.metadata,
            "vertices": doc.vertices,
            "edges": [{"id": e.id, "color": e.color, "src": e.src, "rng": e.rng} for e in doc.edges],
            "squares": [{"lhs": list(sq.lhs), "rhs": list(sq.rhs)} for sq in doc.squares],
        }


def _oriented(sq: Square) -> Square:
    lhs, rhs = tuple(sq.lhs), tuple(sq.rhs)
    return Square(lhs, rhs) if lhs <= rhs else Square(rhs, lhs)


def serialize(doc: KgDocument) -> str:
    doc = doc.canonical()
    lines = [f"kg {doc.version}", CONVENTION, f"rank {doc.rank}"]
    lines += [f"color {c} {name}" for c, name in doc.color_names.items()]
    lines += [f"#@ {key}: {value}" for key, value in doc.metadata.items()]
    lines += [f"vertex {v}" for v in doc.vertices]
    lines += [f"edge {e.id} {e.color} {e.src} {e.rng}" for e in doc.edges]
    lines += [f"square {a2} {a1} = {b2} {b1}" for (a2, a1), (b2, b1) in doc.squares]
    return "\n".join(lines) + "\n"


def dumps(k: KGraph, color_names=None, metadata=None) -> str:
    return serialize(KgDocument.from_kgraph(k, color_names, metadata))


# -- parsing ---------------------------------------------------------------------

_ARITY = {"vertex": 1, "edge": 4, "square": 5, "color": 2, "rank": 1}
_SHAPE = {
    "vertex": "vertex ID",
    "edge": "edge ID COLOR SOURCE RANGE",
    "square": "square A2 A1 = B2 B1",
    "color": "color N NAME",
    "rank": "rank N",
}


def _integer(tok, lineno, what):
    text, col = tok
    if not text.isdigit():
        raise KgSyntaxError(lineno, col, what, text)
    return int(text)


def _identifier(tok, lineno):
    text, col = tok
    if text == "=" or text.startswith("#"):
        raise KgSyntaxError(lineno, col, "identifier", text)
    return text


def parse(text: str) -> KgDocument:
    """Parse ``.kg`` text. Syntax problems raise :class:`KgSyntaxError`;
    dangling ids, bad colors, malformed or doubly covered squares raise
    :class:`KgSemanticError`. KG2/KG3 are left to :meth:`KgDocument.to_kgraph`."""
    header_seen = False
    doc = None
    metadata: dict[str, str] = {}
    where: dict[str, int] = {}  # declared id -> line
    raw_edges, raw_squares = [], []
    color_names: dict[int, str] = {}
    vertices: list[str] = []

    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#@"):
            m = _META.match(stripped)
            if not m:
                raise KgSyntaxError(lineno, line.index("#@") + 1, "'#@ key: value'")
            key, value = m.group(1), m.group(2).rstrip()
            if key in metadata:
                raise KgSemanticError(f"metadata key {key!r} given twice", [key], lineno)
            metadata[key] = value
            continue
        if stripped.startswith("#"):
            continue
        tokens = [(m.group(), m.start() + 1) for m in _TOKEN.finditer(line)]
        keyword, col = tokens[0]
        args = tokens[1:]

        if not header_seen:
            if keyword != "kg":
                raise KgSyntaxError(lineno, col, "header 'kg 1'", keyword)
            if len(args) != 1:
                raise KgSyntaxError(lineno, col, "header 'kg 1'")
            version = _integer(args[0], lineno, "format version")
            if version != FORMAT_VERSION:
                raise KgSyntaxError(lineno, args[0][1], f"format version {FORMAT_VERSION}", args[0][0])
            header_seen = True
            continue

        if keyword not in _ARITY:
            raise KgSyntaxError(lineno, col, "one of " + ", ".join(sorted(_ARITY)), keyword)
        if len(args) != _ARITY[keyword]:
            at = args[_ARITY[keyword]][1] if len(args) > _ARITY[keyword] else len(line.rstrip()) + 1
            raise KgSyntaxError(lineno, at, f"'{_SHAPE[keyword]}'")

        if keyword == "rank":
            if doc is not None:
                raise KgSyntaxError(lineno, col, "a single rank declaration", keyword)
            rank = _integer(args[0], lineno, "positive rank")
            if rank < 1:
                raise KgSyntaxError(lineno, args[0][1], "positive rank", args[0][0])
            doc = KgDocument(rank)
            continue
        if doc is None:
            raise KgSyntaxError(lineno, col, "'rank N' before declarations", keyword)

        if keyword == "color":
            c = _integer(args[0], lineno, "color number")
            if not 1 <= c <= doc.rank:
                raise KgSemanticError(f"color {c} outside 1..{doc.rank}", [args[0][0]], lineno)
            if c in color_names:
                raise KgSemanticError(f"color {c} named twice", [args[0][0]], lineno)
            color_names[c] = args[1][0]
        elif keyword == "vertex":
            v = _identifier(args[0], lineno)
            _declare(where, v, lineno)
            vertices.append(v)
        elif keyword == "edge":
            eid = _identifier(args[0], lineno)
            c = _integer(args[1], lineno, "color number")
            src, rng = _identifier(args[2], lineno), _identifier(args[3], lineno)
            _declare(where, eid, lineno)
            raw_edges.append((Edge(eid, c, src, rng), lineno))
        else:
            if args[2][0] != "=":
                raise KgSyntaxError(lineno, args[2][1], "'='", args[2][0])
            a2, a1 = _identifier(args[0], lineno), _identifier(args[1], lineno)
            b2, b1 = _identifier(args[3], lineno), _identifier(args[4], lineno)
            raw_squares.append((Square((a2, a1), (b2, b1)), lineno))

    if not header_seen:
        raise KgSyntaxError(1, 1, "header 'kg 1'")
    if doc is None:
        raise KgSyntaxError(len(text.splitlines()) + 1, 1, "'rank N'")

    vset = set(vertices)
    edges = {}
    for e, lineno in raw_edges:
        if not 1 <= e.color <= doc.rank:
            raise KgSemanticError(f"edge {e.id}: color {e.color} outside 1..{doc.rank}", [e.id], lineno)
        for end in (e.src, e.rng):
            if end not in vset:
                raise KgSemanticError(f"edge {e.id} references undeclared vertex {end}", [e.id, end], lineno)
        edges[e.id] = e
    covered: dict[tuple, int] = {}
    for sq, lineno in raw_squares:
        _check_square(sq, edges, lineno)
        for side in sq.sides():
            if side in covered:
                raise KgSemanticError(
                    f"2-path {' '.join(side)} already covered by the square on line {covered[side]}",
                    side,
                    lineno,
                )
            covered[side] = lineno

    doc.vertices = vertices
    doc.edges = [e for e, _ in raw_edges]
    doc.squares = [sq for sq, _ in raw_squares]
    doc.color_names = color_names
    doc.metadata = metadata
    return doc


def _declare(where, ident, lineno):
    if ident in where:
        raise KgSemanticError(f"identifier {ident} already declared on line {where[ident]}", [ident], lineno)
    where[ident] = lineno


def _check_square(sq, edges, lineno):
    for e in sq.edges():
        if e not in edges:
            raise KgSemanticError(f"square references undeclared edge {e}", [e], lineno)
    (a2, a1), (b2, b1) = sq
    ca2, ca1, cb2, cb1 = (edges[x].color for x in (a2, a1, b2, b1))
    names = list(sq.edges())
    if ca2 == ca1:
        raise KgSemanticError(f"square side {a2} {a1} is not bicolored (both color {ca1})", names, lineno)
    if (ca2, ca1) != (cb1, cb2):
        raise KgSemanticError(
            f"square sides {a2} {a1} and {b2} {b1} do not transpose colors", names, lineno
        )
    for x2, x1 in sq.sides():
        if edges[x1].rng != edges[x2].src:
            raise KgSemanticError(f"square side {x2} {x1} is not composable", names, lineno)
    if edges[a1].src != edges[b1].src or edges[a2].rng != edges[b2].rng:
        raise KgSemanticError(f"square sides {a2} {a1} and {b2} {b1} are not parallel", names, lineno)


def loads(text: str) -> KGraph:
    return parse(text).to_kgraph()
