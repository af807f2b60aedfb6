"""Brute-force oracles shared by the test modules."""
from __future__ import annotations

import math
import random
from collections import Counter, deque

from hrgraph.factorization import color_word


def random_path(k, rng: random.Random, length: int) -> tuple:
    """A uniformly-stepped random walk of ``length`` edges, in written order
    (outermost edge first). Shorter if the walk hits a vertex with no exits."""
    g = k.skeleton
    walk = [rng.choice(g.edges).id]
    while len(walk) < length:
        exits = g.out_edges(g.rng(walk[-1]))
        if not exits:
            break
        walk.append(rng.choice(exits))
    return tuple(reversed(walk))


def swap_closure(k, p) -> set:
    """Every path reachable from ``p`` by swapping adjacent bicolored pairs."""
    g, S = k.skeleton, k.squares
    seen = {tuple(p)}
    queue = deque(seen)
    while queue:
        q = queue.popleft()
        for i in range(len(q) - 1):
            if g.color(q[i]) == g.color(q[i + 1]):
                continue
            partner = S.partner(q[i : i + 2])
            r = q[:i] + partner + q[i + 2 :]
            if r not in seen:
                seen.add(r)
                queue.append(r)
    return seen


def permutation_count(word) -> int:
    total = math.factorial(len(word))
    for n in Counter(word).values():
        total //= math.factorial(n)
    return total


def distinct_words(k, paths) -> set:
    return {color_word(k.skeleton, p) for p in paths}


def restrict(k, colors):
    """The sub-k-graph on the given colors (rank unchanged)."""
    from hrgraph.kgraph import assemble
    from hrgraph.skeleton import subgraph_by_colors

    g = subgraph_by_colors(k.skeleton, colors)
    keep = [sq for sq in k.squares if all(k.skeleton.color(e) in colors for e in sq.edges())]
    return assemble(g, keep)


def drop_colors(k, rank):
    """Reinterpret a k-graph whose edges use only colors 1..rank at that rank."""
    from hrgraph.kgraph import assemble
    from hrgraph.skeleton import build_skeleton

    g = k.skeleton
    return assemble(build_skeleton(rank, g.vertices, g.edges), list(k.squares))
