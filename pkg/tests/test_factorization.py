import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hrgraph.errors import (
    Kg2NotEstablished,
    NotComposableConfiguration,
    TargetNotPermutation,
    UncoveredPath,
)
from hrgraph.factorization import (
    Square,
    SquareSet,
    bicolored_two_paths,
    canonical_form,
    color_word,
    complete_cube,
    equivalent,
    normalize,
    path_rng,
    path_src,
    paths_from,
    swap,
    tricolored_three_paths,
    validate_kg2,
    validate_kg3,
)
from hrgraph.generators import gen_figure1, gen_torus
from hrgraph.moves import delay
from hrgraph.skeleton import build_skeleton

from helpers import permutation_count, random_path, swap_closure


# -- KG2 ---------------------------------------------------------------------------

def test_torus_31_kg2():
    k = gen_torus(3, 1)
    report = validate_kg2(k.skeleton, k.squares)
    assert report.ok
    assert report.details["squares"] == 3


def test_deleting_a_square_orphans_both_sides():
    k = gen_torus(3, 1)
    gone = k.squares.squares[0]
    report = validate_kg2(k.skeleton, k.squares.without(gone))
    assert not report.ok
    assert sorted(map(tuple, report.details["uncovered"])) == sorted(gone.sides())


def test_figure1_kg2_pairs_every_bicolored_path():
    k = gen_figure1()
    report = validate_kg2(k.skeleton, k.squares)
    assert report.ok
    paths = list(bicolored_two_paths(k.skeleton))
    assert len(paths) == 2 * len(k.squares) == 24


def test_doubly_covered_path_is_reported():
    k = gen_torus(3, 1)
    extra = Square(("b1", "a0"), ("b1", "a0"))
    report = validate_kg2(k.skeleton, SquareSet(list(k.squares) + [extra]))
    assert ["b1", "a0"] in report.details["doubly_covered"]


def test_malformed_square_is_reported_not_raised():
    k = gen_torus(3, 1)
    bad = Square(("a1", "a0"), ("a1", "a0"))
    report = validate_kg2(k.skeleton, SquareSet(list(k.squares) + [bad]))
    assert not report.ok
    assert any("monochrome" in p for p in report.details["malformed"])


# -- KG3 ---------------------------------------------------------------------------

def test_three_torus_braid_holds():
    k = gen_torus(2, 2, 2)
    report = validate_kg3(k.skeleton, k.squares)
    assert report.ok
    assert report.details["checked"] == 8 * 6


def test_rank_two_is_vacuous():
    k = gen_figure1()
    sub = gen_torus(4, 3)
    assert validate_kg3(sub.skeleton, sub.squares).details["checked"] == 0
    assert validate_kg3(k.skeleton, k.squares).ok


def test_kg3_requires_kg2():
    k = gen_torus(2, 2, 2)
    broken = k.squares.without(k.squares.squares[0])
    with pytest.raises(Kg2NotEstablished):
        validate_kg3(k.skeleton, broken)


def _one_vertex_rank3():
    # two loops in colors 1 and 2, one in color 3; squares chosen by hand
    g = build_skeleton(
        3, ["o"], [("a", 1, "o", "o"), ("a2", 1, "o", "o"), ("b", 2, "o", "o"), ("b2", 2, "o", "o"), ("c", 3, "o", "o")]
    )
    pairs = {}
    for x, y in [("a", "b"), ("a", "b2"), ("a2", "b"), ("a2", "b2"), ("a", "c"), ("a2", "c"), ("b", "c"), ("b2", "c")]:
        pairs[(y, x)] = (x, y)
    # cross the color-2/color-3 pairing so the instance is not a product
    pairs[("c", "b")], pairs[("c", "b2")] = ("b2", "c"), ("b", "c")
    return g, pairs


def _brute_braid(g, S, p):
    def at(path, i):
        path = list(path)
        path[i : i + 2] = S.partner(tuple(path[i : i + 2]))
        return path

    x = at(at(at(p, 1), 0), 1)
    y = at(at(at(p, 0), 1), 0)
    return x == y


def test_swapped_rhs_pair_breaks_braid():
    g, pairs = _one_vertex_rank3()
    good = SquareSet(pairs.items())
    assert validate_kg3(g, good).ok

    # the squares at b a and b a2 trade right-hand sides
    pairs[("b", "a")], pairs[("b", "a2")] = pairs[("b", "a2")], pairs[("b", "a")]
    bad = SquareSet(pairs.items())
    kg2 = validate_kg2(g, bad)
    assert kg2.ok
    report = validate_kg3(g, bad, kg2)
    assert not report.ok
    assert ["c", "b", "a"] in report.details["failing"]
    expected = [list(p) for p in tricolored_three_paths(g) if not _brute_braid(g, bad, p)]
    assert report.details["failing"] == expected


def test_single_rhs_substitution_breaks_kg2():
    g, pairs = _one_vertex_rank3()
    pairs[("b", "a")] = ("a2", "b")
    assert not validate_kg2(g, SquareSet(pairs.items())).ok


# -- swap / normalize / equivalent ---------------------------------------------------

def test_swap_in_torus():
    k = gen_torus(3, 1)
    assert swap(k.squares, ("b1", "a0")) == ("a0", "b0")


def test_swap_is_an_involution_preserving_endpoints():
    k = gen_figure1()
    g = k.skeleton
    for p in bicolored_two_paths(g):
        q = swap(k.squares, p)
        assert swap(k.squares, q) == p
        assert (path_src(g, q), path_rng(g, q)) == (path_src(g, p), path_rng(g, p))
        assert color_word(g, q) == color_word(g, p)[::-1]
        assert g.degree_vector(q) == g.degree_vector(p)


def test_swap_monochrome_is_uncovered():
    k = gen_torus(3, 1)
    with pytest.raises(UncoveredPath):
        swap(k.squares, ("a1", "a0"))


def test_normalize_monochrome_is_identity():
    k = gen_torus(3, 1)
    p = ("a2", "a1", "a0")
    assert normalize(k.skeleton, k.squares, p, (1, 1, 1)) == p


def test_normalize_torus_single_swap():
    k = gen_torus(3, 1)
    assert normalize(k.skeleton, k.squares, ("b1", "a0"), (1, 2)) == ("a0", "b0")


def test_normalize_figure1():
    k = gen_figure1()
    got = normalize(k.skeleton, k.squares, ("black_wx", "blue_vw"), (2, 1))
    assert got == ("blue_wx", "black_vw")


def test_normalize_rejects_foreign_word():
    k = gen_torus(3, 1)
    with pytest.raises(TargetNotPermutation):
        normalize(k.skeleton, k.squares, ("b1", "a0"), (1, 1))


def test_equivalent_examples():
    k = gen_torus(3, 1)
    g, S = k.skeleton, k.squares
    assert equivalent(g, S, ("a0", "b0"), ("a0", "b0"))
    for sq in S:
        assert equivalent(g, S, sq.lhs, sq.rhs)
    assert not equivalent(g, S, ("a0", "b0"), ("b1", "a1"))


def test_normalize_preserves_endpoints_and_degree():
    k = gen_torus(3, 2, 2)
    g, rng = k.skeleton, random.Random(7)
    for _ in range(50):
        p = random_path(k, rng, 5)
        word = list(color_word(g, p))
        rng.shuffle(word)
        q = normalize(g, k.squares, p, word)
        assert color_word(g, q) == tuple(word)
        assert path_src(g, q) == path_src(g, p) and path_rng(g, q) == path_rng(g, p)
        assert g.degree_vector(q) == g.degree_vector(p)


def test_squares_only_identify_two_paths():
    for k in (gen_figure1(), gen_torus(2, 2, 2)):
        assert all(len(side) == 2 for sq in k.squares for side in sq.sides())


# -- confluence and class size ---------------------------------------------------------

@settings(max_examples=60, deadline=None)
@given(
    st.sampled_from([(3, 1), (2, 3), (4, 4), (2, 2, 2), (3, 2, 4)]),
    st.integers(0, 2**32 - 1),
    st.integers(1, 5),
)
def test_random_schedules_agree(sizes, seed, length):
    k = gen_torus(*sizes)
    rng = random.Random(seed)
    p = random_path(k, rng, length)
    word = list(color_word(k.skeleton, p))
    rng.shuffle(word)
    reference = normalize(k.skeleton, k.squares, p, word)
    for _ in range(5):
        assert normalize(k.skeleton, k.squares, p, word, rng=random.Random(rng.random())) == reference


@pytest.mark.parametrize("k", [gen_figure1(), gen_torus(3, 2), gen_torus(2, 2, 3)], ids=["fig1", "t32", "t223"])
def test_class_has_one_path_per_word(k):
    """The swap closure of a path has exactly one member per distinct
    rearrangement of its color word, and normalize lands in it."""
    g = k.skeleton
    rng = random.Random(3)
    for _ in range(40):
        p = random_path(k, rng, rng.randint(1, 5))
        cls = swap_closure(k, p)
        words = {color_word(g, q) for q in cls}
        assert len(cls) == len(words) == permutation_count(color_word(g, p))
        for w in words:
            assert normalize(g, k.squares, p, w) in cls


def test_classes_partition_paths_with_fixed_endpoints():
    k = gen_torus(2, 3)
    g = k.skeleton
    for v in g.vertices:
        by_key = {}
        for p in paths_from(g, v, 3):
            key = (path_rng(g, p), g.degree_vector(p))
            by_key.setdefault(key, []).append(p)
        for group in by_key.values():
            forms = {canonical_form(g, k.squares, p) for p in group}
            for form in forms:
                members = [p for p in group if canonical_form(g, k.squares, p) == form]
                assert len(members) == permutation_count(color_word(g, form))


# -- cube completion -------------------------------------------------------------------

def _translate(sizes, vertex, axis):
    coords = [int(c) for c in vertex[1:].split("_")]
    coords[axis] = (coords[axis] + 1) % sizes[axis]
    return "u" + "_".join(map(str, coords))


def test_cube_faces_in_three_torus():
    sizes = (2, 2, 2)
    k = gen_torus(*sizes)
    g, S = k.skeleton, k.squares
    shared = "a0_0_0"
    # alpha has the shared edge outermost on one side, beta innermost
    alpha = next(sq for sq in S if any(side[0] == shared for side in sq.sides()) and "b" in "".join(sq.edges()))
    beta = next(
        sq
        for sq in S
        if any(side[1] == shared for side in sq.sides()) and any(e.startswith("c") for e in sq.edges())
    )
    delta, gamma = complete_cube(g, S, alpha, beta, shared)
    assert delta in S.squares and gamma in S.squares
    c_in = next(g.color(side[1]) for side in alpha.sides() if side[0] == shared)
    c_out = next(g.color(side[0]) for side in beta.sides() if side[1] == shared)
    # in a product the opposite faces are translates: delta of beta back along
    # c_in (forward and back agree on 2-cycles), gamma of alpha along c_out
    assert {g.color(e) for e in delta.edges()} == {g.color(e) for e in beta.edges()}
    assert {g.color(e) for e in gamma.edges()} == {g.color(e) for e in alpha.edges()}
    start = lambda sq: g.src(sq.lhs[1])
    assert start(delta) == _translate(sizes, start(beta), c_in - 1)
    assert start(gamma) == _translate(sizes, start(alpha), c_out - 1)


def test_cube_needs_three_colors():
    k = gen_torus(3, 2)
    sq = k.squares.squares[0]
    shared = sq.lhs[0]
    with pytest.raises(NotComposableConfiguration):
        complete_cube(k.skeleton, k.squares, sq, sq, shared)


def test_cube_vertical_edges_lie_in_linkage_class():
    k = gen_torus(2, 2, 1)
    g, S = k.skeleton, k.squares
    d = delay(k, "a0_0")
    linked = set(d.linked)
    c = g.color("a0_0")
    completed = 0
    for (na, alpha), (nb, beta) in itertools.permutations(d.classes.items(), 2):
        other_a = {g.color(e) for e in alpha.edges()} - {c}
        other_b = {g.color(e) for e in beta.edges()} - {c}
        if other_a == other_b:
            continue
        for shared in linked:
            if not any(side[0] == shared for side in alpha.sides()):
                continue
            if not any(side[1] == shared for side in beta.sides()):
                continue
            delta, gamma = complete_cube(g, S, alpha, beta, shared)
            completed += 1
            for face in (delta, gamma, alpha, beta):
                vertical = [e for e in face.edges() if g.color(e) == c]
                assert set(vertical) <= linked
    assert completed > 0
