"""Factorization squares and path rewriting.

A path is a tuple of edge ids written in composition order: the rightmost
edge is traversed first, so ``(e2, e1)`` means "``e1`` then ``e2``" and
``src(path) = src(e1)``, ``rng(path) = rng(e2)``.

A square ``(a2, a1) ~ (b2, b1)`` identifies the two color orders of a
bicolored 2-path. Equivalence of longer paths is decided by rewriting both
sides to the nondecreasing color word with adjacent square swaps.
"""
from __future__ import annotations

import random
from collections import defaultdict
from typing import Iterable, Iterator, NamedTuple, Sequence

from .errors import (
    Kg2NotEstablished,
    NotComposable,
    NotComposableConfiguration,
    TargetNotPermutation,
    UncoveredPath,
)
from .report import Report
from .skeleton import ColoredDigraph

Path = tuple  # tuple[str, ...], outermost edge first


class Square(NamedTuple):
    lhs: tuple[str, str]
    rhs: tuple[str, str]

    def sides(self):
        return (self.lhs, self.rhs)

    def edges(self):
        return self.lhs + self.rhs


class SquareSet:
    """The square generators of the factorization rule, with partner lookup.

    Duplicate coverage is tolerated at construction time and recorded in
    :attr:`conflicts` so that KG2 validation can report it.
    """

    def __init__(self, squares: Iterable):
        self.squares: tuple[Square, ...] = tuple(
            s if isinstance(s, Square) else Square(tuple(s[0]), tuple(s[1])) for s in squares
        )
        self._partner: dict[tuple, tuple] = {}
        self._owner: dict[tuple, Square] = {}
        self.conflicts: list[tuple] = []
        for sq in self.squares:
            for side, other in ((sq.lhs, sq.rhs), (sq.rhs, sq.lhs)):
                if side in self._partner:
                    self.conflicts.append(side)
                    continue
                self._partner[side] = other
                self._owner[side] = sq

    def __iter__(self) -> Iterator[Square]:
        return iter(self.squares)

    def __len__(self) -> int:
        return len(self.squares)

    def __contains__(self, path) -> bool:
        return tuple(path) in self._partner

    def partner(self, path) -> tuple | None:
        return self._partner.get(tuple(path))

    def square_of(self, path) -> Square | None:
        return self._owner.get(tuple(path))

    def without(self, square: Square) -> "SquareSet":
        return SquareSet(s for s in self.squares if s != square)

    def replacing(self, old: Square, new: Square) -> "SquareSet":
        return SquareSet(new if s == old else s for s in self.squares)


# -- path helpers -------------------------------------------------------------

def path_src(g: ColoredDigraph, p: Sequence[str]) -> str:
    return g.src(p[-1])


def path_rng(g: ColoredDigraph, p: Sequence[str]) -> str:
    return g.rng(p[0])


def color_word(g: ColoredDigraph, p: Sequence[str]) -> tuple[int, ...]:
    return tuple(g.color(e) for e in p)


def is_composable(g: ColoredDigraph, p: Sequence[str]) -> bool:
    return all(g.src(p[i]) == g.rng(p[i + 1]) for i in range(len(p) - 1))


def bicolored_two_paths(g: ColoredDigraph) -> Iterator[tuple[str, str]]:
    for e1 in g.edges:
        for e2 in g.out_edges(e1.rng):
            if g.color(e2) != e1.color:
                yield (e2, e1.id)


def tricolored_three_paths(g: ColoredDigraph) -> Iterator[tuple[str, str, str]]:
    for e1, e2 in _pairs(g):
        c1, c2 = g.color(e1), g.color(e2)
        if c1 == c2:
            continue
        for e3 in g.out_edges(g.rng(e2)):
            if g.color(e3) not in (c1, c2):
                yield (e3, e2, e1)


def _pairs(g):
    for e1 in g.edges:
        for e2 in g.out_edges(e1.rng):
            yield e1.id, e2


def paths_from(g: ColoredDigraph, v: str, length: int) -> Iterator[Path]:
    """All composable paths with source ``v`` and the given number of edges."""
    if length == 0:
        yield ()
        return
    stack = [((e,), g.rng(e)) for e in reversed(g.out_edges(v))]
    while stack:
        p, end = stack.pop()
        if len(p) == length:
            yield p
            continue
        for e in reversed(g.out_edges(end)):
            stack.append(((e,) + p, g.rng(e)))


def paths_into(g: ColoredDigraph, v: str, word: Sequence[int]) -> Iterator[Path]:
    """All paths with range ``v`` whose color word is exactly ``word``."""
    word = tuple(word)

    def extend(prefix, at):
        i = len(prefix)
        if i == len(word):
            yield prefix
            return
        for e in g.in_edges(at, word[i]):
            yield from extend(prefix + (e,), g.src(e))

    yield from extend((), v)


# -- KG validation ------------------------------------------------------------

def _square_problems(g: ColoredDigraph, sq: Square) -> list[str]:
    problems = []
    label = f"square {' '.join(sq.lhs)} = {' '.join(sq.rhs)}"
    if len(sq.lhs) != 2 or len(sq.rhs) != 2:
        return [f"{label}: sides must be 2-paths"]
    missing = [e for e in sq.edges() if not g.has_edge(e)]
    if missing:
        return [f"{label}: unknown edge(s) {', '.join(missing)}"]
    (a2, a1), (b2, b1) = sq.lhs, sq.rhs
    if not is_composable(g, sq.lhs):
        problems.append(f"{label}: left side not composable")
    if not is_composable(g, sq.rhs):
        problems.append(f"{label}: right side not composable")
    if g.color(a2) == g.color(a1):
        problems.append(f"{label}: left side is monochrome")
    if g.color(b2) != g.color(a1) or g.color(b1) != g.color(a2):
        problems.append(f"{label}: right side does not transpose the colors of the left side")
    if g.src(a1) != g.src(b1) or g.rng(a2) != g.rng(b2):
        problems.append(f"{label}: sides have different endpoints")
    return problems


def validate_kg2(g: ColoredDigraph, squares: SquareSet) -> Report:
    """Every composable bicolored 2-path lies in exactly one well-formed square."""
    report = Report("KG2")
    malformed = []
    for sq in squares:
        for msg in _square_problems(g, sq):
            malformed.append(msg)
            report.fail(msg)
    doubled = sorted(set(squares.conflicts))
    for p in doubled:
        report.fail(f"2-path {' '.join(p)} covered by more than one square")
    uncovered = [p for p in bicolored_two_paths(g) if p not in squares]
    for p in uncovered:
        report.fail(f"2-path {' '.join(p)} is not covered by any square")
    report.details.update(
        malformed=malformed,
        doubly_covered=[list(p) for p in doubled],
        uncovered=[list(p) for p in uncovered],
        squares=len(squares),
    )
    return report


def _swap_at(squares: SquareSet, p: list, i: int) -> None:
    pair = (p[i], p[i + 1])
    partner = squares.partner(pair)
    if partner is None:
        raise UncoveredPath(pair)
    p[i], p[i + 1] = partner


def validate_kg3(g: ColoredDigraph, squares: SquareSet, kg2: Report | None = None) -> Report:
    """Braid (3-cube) condition on every composable tricolored 3-path.

    Swapping the inner pair, the outer pair, then the inner pair again must
    give the same path as outer, inner, outer.
    """
    if kg2 is None:
        kg2 = validate_kg2(g, squares)
    if not kg2.ok:
        raise Kg2NotEstablished("KG3 requires a passing KG2 report")
    report = Report("KG3")
    failures = []
    checked = 0
    for p in tricolored_three_paths(g):
        checked += 1
        x = list(p)
        for i in (1, 0, 1):
            _swap_at(squares, x, i)
        y = list(p)
        for i in (0, 1, 0):
            _swap_at(squares, y, i)
        if x != y:
            failures.append(list(p))
            report.fail(f"3-path {' '.join(p)}: {' '.join(x)} != {' '.join(y)}")
    report.details.update(checked=checked, failing=failures)
    return report


# -- rewriting ----------------------------------------------------------------

def swap(squares: SquareSet, p: Sequence[str]) -> tuple[str, str]:
    partner = squares.partner(tuple(p))
    if partner is None:
        raise UncoveredPath(tuple(p))
    return partner


def _target_ranks(word, target):
    # i-th occurrence of a color in the word goes to its i-th occurrence in the target
    slots = defaultdict(list)
    for pos, c in enumerate(target):
        slots[c].append(pos)
    for queue in slots.values():
        queue.reverse()
    return [slots[c].pop() for c in word]


def normalize(
    g: ColoredDigraph,
    squares: SquareSet,
    p: Sequence[str],
    target: Sequence[int],
    rng: random.Random | None = None,
) -> Path:
    """Rewrite ``p`` to the equivalent path whose color word is ``target``.

    Adjacent swaps are applied to the leftmost inversion first; passing a
    ``random.Random`` picks a random inversion at each step instead.
    """
    p = list(p)
    if not is_composable(g, p):
        raise NotComposable(f"path {' '.join(p)} is not composable")
    word = color_word(g, p)
    target = tuple(target)
    if sorted(word) != sorted(target):
        raise TargetNotPermutation(f"{target} is not a permutation of {word}")
    ranks = _target_ranks(word, target)
    while True:
        inversions = [i for i in range(len(p) - 1) if ranks[i] > ranks[i + 1]]
        if not inversions:
            return tuple(p)
        i = inversions[0] if rng is None else rng.choice(inversions)
        _swap_at(squares, p, i)
        ranks[i], ranks[i + 1] = ranks[i + 1], ranks[i]


def canonical_form(g: ColoredDigraph, squares: SquareSet, p: Sequence[str]) -> Path:
    return normalize(g, squares, p, sorted(color_word(g, p)))


def equivalent(g: ColoredDigraph, squares: SquareSet, p: Sequence[str], q: Sequence[str]) -> bool:
    p, q = tuple(p), tuple(q)
    if not p or not q:
        return p == q
    if path_src(g, p) != path_src(g, q) or path_rng(g, p) != path_rng(g, q):
        return False
    if g.degree_vector(p) != g.degree_vector(q):
        return False
    return canonical_form(g, squares, p) == canonical_form(g, squares, q)


def complete_cube(
    g: ColoredDigraph, squares: SquareSet, sq_alpha: Square, sq_beta: Square, shared: str
) -> tuple[Square, Square]:
    """The two faces of the 3-cube spanned by ``sq_alpha`` and ``sq_beta``.

    ``shared`` must be the outer edge of a side of ``sq_alpha`` and the inner
    edge of a side of ``sq_beta``; the three colors involved must differ.
    Returns ``(delta, gamma)``: the faces opposite ``sq_beta`` and
    ``sq_alpha`` respectively.
    """
    inner = next((side[1] for side in sq_alpha.sides() if side[0] == shared), None)
    outer = next((side[0] for side in sq_beta.sides() if side[1] == shared), None)
    if inner is None or outer is None:
        raise NotComposableConfiguration(f"{shared!r} does not join the two squares")
    p = (outer, shared, inner)
    colors = color_word(g, p)
    if len(set(colors)) != 3:
        raise NotComposableConfiguration("cube completion needs three distinct colors")
    c_out, c_mid, c_in = colors
    # delta: the (c_mid, c_out) face through the source corner
    q = normalize(g, squares, p, (c_in, c_out, c_mid))
    delta = squares.square_of(q[1:])
    # gamma: the (c_mid, c_in) face through the range corner
    r = normalize(g, squares, p, (c_mid, c_in, c_out))
    gamma = squares.square_of(r[:2])
    if delta is None or gamma is None:
        raise UncoveredPath(q[1:] if delta is None else r[:2])
    return delta, gamma
