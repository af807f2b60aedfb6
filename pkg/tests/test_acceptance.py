"""End-to-end acceptance checks, one test per criterion.

Each test records a single PASS/FAIL line (see ``conftest.verdict``); the lines
are repeated together in the terminal summary.
"""
import io
import random
import shutil
import time
from collections import defaultdict
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path

from hrgraph.cli import main, parse, serialize
from hrgraph.factorization import (
    Square,
    SquareSet,
    bicolored_two_paths,
    color_word,
    normalize,
    path_rng,
    path_src,
    validate_kg2,
    validate_kg3,
)
from hrgraph.generators import gen_cr_example, gen_figure1, gen_torus, torus_corpus
from hrgraph.kgraph import check_graded_functor, isomorphic
from hrgraph.moves import check_hr, complete_edge_reduction, delay, product, reduce
from hrgraph.saturation import morita_certificate
from hrgraph.skeleton import build_skeleton

from helpers import drop_colors, permutation_count, random_path, restrict, swap_closure
from test_cli import COMMANDS

GOLDEN = Path(__file__).parent / "golden"
CORPUS = list(torus_corpus())


def _round_trip_sites():
    """(label, parent graph, delayed vertex, color) for every corpus edge."""
    for sizes, k in CORPUS:
        for e in k.edges:
            d = delay(k, e.id)
            yield f"T{sizes}/{e.id}", k, d.graph, d.delayed_vertex, e.color


def _named_reductions():
    fig1, cr = gen_figure1(), gen_cr_example()
    for b in (1, 2):
        yield f"figure1/b={b}", fig1, "w", (1, 2), b
        yield f"cr/b={b}", cr, "w", (1, 2), b


def _corpus_reductions():
    """Every reduction the suite performs: (label, parent, w, B, b)."""
    for label, _, parent, w, c in _round_trip_sites():
        yield label, parent, w, (c,), c
    yield from _named_reductions()


# -- 1 -----------------------------------------------------------------------------

def _substitutions(g, squares):
    """Every square with one side replaced by a different parallel 2-path."""
    parallel = defaultdict(list)
    for p in bicolored_two_paths(g):
        parallel[(path_src(g, p), path_rng(g, p), color_word(g, p))].append(p)
    for sq in squares:
        for side, other in ((sq.rhs, sq.lhs), (sq.lhs, sq.rhs)):
            for q in parallel[(path_src(g, side), path_rng(g, side), color_word(g, side))]:
                if q != side:
                    yield squares.replacing(sq, Square(other, q))


def _rejected(g, squares):
    kg2 = validate_kg2(g, squares)
    return not kg2.ok or not validate_kg3(g, squares, kg2).ok


def _one_vertex_control():
    """A valid 3-graph on one vertex with parallel loops, so substitutions exist."""
    g = build_skeleton(
        3, ["o"], [("a", 1, "o", "o"), ("a2", 1, "o", "o"), ("b", 2, "o", "o"), ("b2", 2, "o", "o"), ("c", 3, "o", "o")]
    )
    pairs = {(y, x): (x, y) for x in ("a", "a2") for y in ("b", "b2", "c")}
    pairs.update({("c", y): (y, "c") for y in ("b", "b2")})
    pairs[("c", "b")], pairs[("c", "b2")] = ("b2", "c"), ("b", "c")
    return g, SquareSet(pairs.items())


def test_criterion_1_validation_soundness(verdict):
    start = time.perf_counter()
    valid = deletions = candidates = 0
    problems = []
    for sizes, k in CORPUS:
        g, S = k.skeleton, k.squares
        if k.kg2.ok and k.kg3.ok:
            valid += 1
        else:
            problems.append(f"T{sizes} invalid")
        for sq in S:
            deletions += 1
            if validate_kg2(g, S.without(sq)).ok:
                problems.append(f"T{sizes}: deleting {sq} keeps KG2")
        for mutated in _substitutions(g, S):
            candidates += 1
            if not _rejected(g, mutated):
                problems.append(f"T{sizes}: a substitution survives")
    elapsed = time.perf_counter() - start

    g, S = _one_vertex_control()
    control = list(_substitutions(g, S))
    control_ok = validate_kg3(g, S).ok and all(_rejected(g, m) for m in control)

    ok = valid == len(CORPUS) and not problems and control_ok and elapsed < 10
    verdict(
        1,
        ok,
        f"{valid}/{len(CORPUS)} tori valid; {deletions} deletions all fail KG2; "
        f"{candidates} rhs-substitution candidates in the corpus (tori have no parallel 2-paths), "
        f"{len(control)} on a one-vertex control all rejected; {elapsed:.1f}s"
        + (f"; {problems[:3]}" if problems else ""),
    )


# -- 2 -----------------------------------------------------------------------------

def test_criterion_2_confluence(verdict):
    rng = random.Random(20)
    paths = disagreements = 0
    bad_classes = []
    for sizes, k in CORPUS:
        g = k.skeleton
        for _ in range(200):
            p = random_path(k, rng, rng.randint(1, 5))
            paths += 1
            word = list(color_word(g, p))
            rng.shuffle(word)
            results = {normalize(g, k.squares, p, word, rng=random.Random(rng.random())) for _ in range(5)}
            results.add(normalize(g, k.squares, p, word))
            if len(results) != 1:
                disagreements += 1
            cls = swap_closure(k, p)
            words = {color_word(g, q) for q in cls}
            if not len(cls) == len(words) == permutation_count(color_word(g, p)):
                bad_classes.append((sizes, p))
    verdict(
        2,
        disagreements == 0 and not bad_classes,
        f"{paths} paths x 5 schedules: {disagreements} disagreements; "
        f"{len(bad_classes)} classes whose size differs from the word's permutation count",
    )


# -- 3 -----------------------------------------------------------------------------

def test_criterion_3_figure1_reduction(verdict):
    result = reduce(gen_figure1(), "w", {1, 2}, 1)
    out = result.graph
    g = out.skeleton
    cycle = [e for e in g.edges if e.color in (1, 2)]
    loops = [e for e in g.edges if e.color == 3 and e.src == e.rng]
    r = result.realization
    mismatched = [e.id for e in g.edges if r.grading(r.edge_map[e.id]) != out.degree((e.id,))]
    ok = (
        len(g.vertices) == 3
        and len(cycle) == 6
        and len(loops) == 3
        and len(g.edges) == 9
        and out.kg2.ok
        and out.kg3.ok
        and not mismatched
    )
    verdict(
        3,
        ok,
        f"{len(g.vertices)} vertices, {len(cycle)} edges in colors 1-2, {len(loops)} color-3 loops, "
        f"KG2={out.kg2.ok} KG3={out.kg3.ok}, grading of par differs from degree on {mismatched or 'no edges'}",
    )


# -- 4 -----------------------------------------------------------------------------

def test_criterion_4_round_trip(verdict):
    start = time.perf_counter()
    count = 0
    failures = []
    for label, k, parent, w, c in _round_trip_sites():
        count += 1
        back = reduce(parent, w, {c}, c).graph
        if isomorphic(back, k) is None:
            failures.append(label)
    elapsed = time.perf_counter() - start
    verdict(
        4,
        not failures and elapsed < 60,
        f"{count - len(failures)}/{count} delay-then-reduce round trips isomorphic to the input; {elapsed:.1f}s"
        + (f"; first failures {failures[:3]}" if failures else ""),
    )


# -- 5 -----------------------------------------------------------------------------

def test_criterion_5_robustness(verdict):
    planar = drop_colors(restrict(gen_figure1(), {1, 2}), 2)
    reduced = reduce(planar, "w", {1, 2}, 1).graph
    summary = []
    ok = True
    for name, omega in [("C1", (1,)), ("C2", (2,)), ("T22", (2, 2))]:
        om = gen_torus(*omega)
        big = product(planar, om)
        expected = product(reduced, om)
        good = 0
        for y in om.vertices:
            v = f"(w,{y})"
            if check_hr(big, v, {1, 2}).ok and isomorphic(reduce(big, v, {1, 2}, 1).graph, expected) is not None:
                good += 1
        ok = ok and good == len(om.vertices)
        summary.append(f"{name}: {good}/{len(om.vertices)}")
    verdict(5, ok, "H_R holds and reduce(K x Omega) matches reduce(K) x Omega at " + ", ".join(summary))


# -- 6 -----------------------------------------------------------------------------

def test_criterion_6_complete_edge_agreement(verdict):
    k = gen_cr_example()
    cr = complete_edge_reduction(k, "w").graph
    agree = {b: isomorphic(cr, reduce(k, "w", {1, 2}, b).graph) is not None for b in (1, 2)}
    verdict(6, all(agree.values()), f"CR output isomorphic to reduce for bridge colors {agree}")


# -- 7 -----------------------------------------------------------------------------

def test_criterion_7_grading(verdict):
    rng = random.Random(7)
    reductions = paths = 0
    failures = []
    for label, parent, w, B, b in _corpus_reductions():
        result = reduce(parent, w, B, b)
        reductions += 1
        grading = result.realization.grading
        if not check_graded_functor(parent, grading).ok:
            failures.append(f"{label}: a square has unequal gradings")
            continue
        cob = result.hr.cobridges
        for _ in range(100):
            p = random_path(parent, rng, rng.randint(1, 6))
            paths += 1
            ell = sum(1 for e in p if e in cob)
            want = tuple(x - (ell if i == b - 1 else 0) for i, x in enumerate(parent.degree(p)))
            if grading(p) != want:
                failures.append(f"{label}: {p}")
                break
    verdict(
        7,
        not failures,
        f"{reductions} reductions: gradings agree on every square; {paths} random paths match "
        f"degree minus co-bridge count" + (f"; failures {failures[:3]}" if failures else ""),
    )


# -- 8 -----------------------------------------------------------------------------

def test_criterion_8_certificates(verdict):
    total = passed = hereditary = 0
    failures = []
    for label, parent, w, B, b in _corpus_reductions():
        cert = morita_certificate(parent, w, B, b)
        total += 1
        passed += cert.ok
        hereditary += cert.hereditary_only
        if not (cert.ok and cert.hereditary_only):
            failures.append(f"{label}: {cert.verdict.problems}")
    verdict(
        8,
        not failures,
        f"{passed}/{total} certificates pass, {hereditary}/{total} saturate by hereditary steps alone"
        + (f"; failures {failures[:3]}" if failures else ""),
    )


# -- 9 -----------------------------------------------------------------------------

def _run(argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue(), err.getvalue()


def test_criterion_9_cli(verdict, tmp_path, monkeypatch):
    problems = []
    goldens = sorted(p for p in GOLDEN.glob("*.kg") if p.name != "multi_raw.kg")
    for path in goldens:
        text = path.read_text()
        if serialize(parse(text)) != text:
            problems.append(f"{path.name} changes under parse/serialize")

    for f in GOLDEN.iterdir():
        shutil.copy(f, tmp_path / f.name)
    monkeypatch.chdir(tmp_path)
    for argv, golden in [
        (["gen", "torus", "3", "1", "-o", "g.kg"], "torus31.kg"),
        (["gen", "figure1", "-o", "g.kg"], "fig1.kg"),
        (["gen", "cr", "-o", "g.kg"], "cr.kg"),
        (["export", "fig1.kg", "--format", "dot", "-o", "g.kg"], "fig1.dot"),
        (["export", "torus31.kg", "--format", "json", "-o", "g.kg"], "torus31.json"),
    ]:
        _run(argv)
        if Path("g.kg").read_text() != (GOLDEN / golden).read_text():
            problems.append(f"{' '.join(argv[:2])} differs from {golden}")

    for argv in COMMANDS:
        runs = []
        for i in range(2):
            args = [f"out{i}" if a == "OUT" else a for a in argv]
            code, out, err = _run(args)
            runs.append((code, out, err, Path(f"out{i}").read_bytes() if "OUT" in argv else b""))
        if runs[0] != runs[1]:
            problems.append(f"{' '.join(argv[:2])} is not deterministic")
    verdict(
        9,
        not problems,
        f"{len(goldens)} golden files byte-identical, {len(COMMANDS)} commands identical across two runs"
        + (f"; {problems}" if problems else ""),
    )
