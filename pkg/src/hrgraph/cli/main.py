"""Command-line driver.

Exit codes: 0 when the command succeeds or the property holds, 1 when a
property is false or move hypotheses are unmet (a report is printed), 2 on
unreadable input or bad usage.
"""
from __future__ import annotations

import argparse
import itertools
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from ..errors import (
    HypothesesNotMet,
    InducedSquareAmbiguity,
    InvalidParameter,
    Kg2Failure,
    Kg3Failure,
    KGraphError,
)
from ..factorization import SquareSet, validate_kg2, validate_kg3
from ..generators import GENERATORS
from ..kgraph import KGraph, isomorphic, source_free_report
from ..moves import check_hr, complete_edge_reduction, delay, product, reduce
from ..report import Report
from ..saturation import morita_certificate, saturate
from .export import dumps_json, envelope, to_dot, to_json
from .kgformat import KgDocument, dumps, parse

OK, FALSE, USAGE = 0, 1, 2

COLOR_NAMES = {"figure1": {1: "black", 2: "blue", 3: "red"}}


class UsageError(Exception):
    pass


class PropertyFalse(Exception):
    def __init__(self, report: dict, text: str):
        super().__init__(text)
        self.report = report
        self.text = text


# -- helpers -------------------------------------------------------------------

def _read_document(path: str) -> KgDocument:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return parse(text)
    except KGraphError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _load(path: str) -> tuple[KgDocument, KGraph]:
    doc = _read_document(path)
    try:
        return doc, doc.to_kgraph()
    except (Kg2Failure, Kg3Failure) as exc:
        raise UsageError(f"{path}: not a valid k-graph ({exc.report.name} fails); run 'validate'") from None


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from None


def _colors(text: str) -> list[int]:
    try:
        colors = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of colors, got {text!r}") from None
    if not colors:
        raise argparse.ArgumentTypeError("color list is empty")
    return colors


def _names(text: str) -> list[str]:
    return [tok.strip() for tok in text.split(",") if tok.strip()]


def _inherit(doc: KgDocument, **extra) -> dict:
    meta = dict(doc.metadata)
    meta.update({k: v for k, v in extra.items() if v is not None})
    return meta


def _report_text(r: Report) -> str:
    return r.summary() + "\n"


# -- commands ------------------------------------------------------------------
# each returns (payload for --json, human text); failures raise PropertyFalse

def cmd_validate(args):
    doc = _read_document(args.file)
    g = doc.skeleton()
    squares = SquareSet(doc.squares)
    kg2 = validate_kg2(g, squares)
    reports = [kg2]
    if kg2.ok:
        reports.append(validate_kg3(g, squares, kg2))
    else:
        skipped = Report("KG3")
        skipped.fail("not checked: KG2 fails")
        reports.append(skipped)
    if args.per_color_source_free and all(reports):
        reports.append(source_free_report(KGraph(g, squares, reports[0], reports[1])))
    payload = {r.name: r.to_dict() for r in reports}
    text = "".join(_report_text(r) for r in reports)
    if not all(reports):
        raise PropertyFalse(payload, text)
    return payload, text


def cmd_check_hr(args):
    _, k = _load(args.file)
    hr = check_hr(k, args.vertex, args.colors)
    if not hr.ok:
        raise PropertyFalse(hr.to_dict(), _report_text(hr))
    return hr.to_dict(), _report_text(hr)


def _move_failed(exc):
    if isinstance(exc, HypothesesNotMet):
        return PropertyFalse(exc.report.to_dict(), _report_text(exc.report))
    r = Report("induced factorization")
    r.fail(str(exc))
    return PropertyFalse(r.to_dict(), _report_text(r))


_MOVE_ERRORS = (HypothesesNotMet, InducedSquareAmbiguity, Kg2Failure, Kg3Failure)


def cmd_reduce(args):
    doc, k = _load(args.file)
    try:
        result = reduce(k, args.vertex, args.colors, args.bridge_color)
    except _MOVE_ERRORS as exc:
        raise _move_failed(exc) from None
    move = f"reduce {args.vertex} {','.join(map(str, sorted(set(args.colors))))} {args.bridge_color}"
    _write(args.output, dumps(result.graph, doc.color_names, _inherit(doc, move=move)))
    real = result.realization
    par = {
        "par": {e: list(p) for e, p in sorted(real.edge_map.items())},
        "grading": {e: list(v) for e, v in sorted(real.grading.values.items())},
        "classification": dict(sorted(result.classification.items())),
    }
    if args.emit_par:
        _write(args.emit_par, dumps_json(par))
    g = result.graph
    payload = {
        "vertices": len(g.vertices),
        "edges": len(g.edges),
        "squares": len(g.squares),
        "hypotheses": result.hr.to_dict(),
        **par,
    }
    text = f"reduced graph: {len(g.vertices)} vertices, {len(g.edges)} edges, {len(g.squares)} squares\n"
    return payload, text


def cmd_delay(args):
    doc, k = _load(args.file)
    try:
        result = delay(k, args.edge)
    except (InducedSquareAmbiguity, Kg2Failure, Kg3Failure) as exc:
        raise _move_failed(exc) from None
    _write(args.output, dumps(result.graph, doc.color_names, _inherit(doc, move=f"delay {args.edge}")))
    payload = {
        "edge": result.edge,
        "color": result.color,
        "delayed_vertex": result.delayed_vertex,
        "linkage_class": list(result.linked),
        "added_edges": {name: [list(sq.lhs), list(sq.rhs)] for name, sq in sorted(result.classes.items())},
        "split": {e: list(pair) for e, pair in sorted(result.split.items())},
    }
    g = result.graph
    text = (
        f"delayed {args.edge} (linkage class of {len(result.linked)}): "
        f"{len(g.vertices)} vertices, {len(g.edges)} edges, {len(g.squares)} squares\n"
    )
    return payload, text


def cmd_cr(args):
    doc, k = _load(args.file)
    try:
        result = complete_edge_reduction(k, args.vertex, args.fixed_edge)
    except _MOVE_ERRORS as exc:
        raise _move_failed(exc) from None
    _write(args.output, dumps(result.graph, doc.color_names, _inherit(doc, move=f"cr {args.vertex}")))
    g = result.graph
    payload = {
        "vertex": result.vertex,
        "target": result.target,
        "fixed_edge": result.fixed_edge,
        "par": {e: list(p) for e, p in sorted(result.realization.edge_map.items())},
    }
    text = f"removed {result.vertex} into {result.target}: {len(g.vertices)} vertices, {len(g.edges)} edges\n"
    return payload, text


def cmd_product(args):
    doc_a, a = _load(args.a)
    doc_b, b = _load(args.b)
    p = product(a, b)
    names = dict(doc_a.color_names)
    names.update({c + a.rank: n for c, n in doc_b.color_names.items()})
    _write(args.output, dumps(p, names))
    payload = {"rank": p.rank, "vertices": len(p.vertices), "edges": len(p.edges), "squares": len(p.squares)}
    return payload, f"product: rank {p.rank}, {len(p.vertices)} vertices, {len(p.edges)} edges\n"


def cmd_iso(args):
    _, a = _load(args.a)
    _, b = _load(args.b)
    found = isomorphic(a, b, args.allow_color_permutation)
    if found is None:
        raise PropertyFalse({"isomorphic": False}, "not isomorphic\n")
    mapping = found.to_dict()
    if args.mapping:
        _write(args.mapping, dumps_json(mapping))
        text = "isomorphic\n"
    else:
        text = "isomorphic\n" + dumps_json(mapping)
    return {"isomorphic": True, "mapping": mapping}, text


def cmd_saturate(args):
    _, k = _load(args.file)
    sat = saturate(k, args.set, args.max_degree)
    payload = sat.to_dict()
    full = sat.closure == frozenset(k.vertices)
    payload["all_vertices"] = full
    lines = [f"{v} ({rule} via {w})" for v, rule, w in sat.trace]
    text = f"closure: {' '.join(sorted(sat.closure))}\n" + "".join(f"  + {line}\n" for line in lines)
    if not full:
        raise PropertyFalse(payload, text + "closure is not every vertex\n")
    return payload, text


def cmd_certify(args):
    _, k = _load(args.file)
    try:
        cert = morita_certificate(k, args.vertex, args.colors, args.bridge_color, max_degree=args.max_degree)
    except _MOVE_ERRORS as exc:
        raise _move_failed(exc) from None
    payload = cert.to_dict()
    _write(args.output, dumps_json(envelope("certify", cert.ok, payload)))
    text = _report_text(cert.verdict)
    if not cert.ok:
        raise PropertyFalse(payload, text)
    return payload, text


def cmd_export(args):
    doc = _read_document(args.file)
    text = to_dot(doc) if args.format == "dot" else to_json(doc)
    _write(args.output, text)
    return {"format": args.format}, ""


def cmd_gen(args):
    name = args.name
    if name not in GENERATORS:
        raise UsageError(f"unknown generator {name!r}; choose from {', '.join(sorted(GENERATORS))}")
    try:
        params = [int(x) for x in args.params]
    except ValueError:
        raise UsageError(f"generator parameters must be integers, got {args.params}") from None
    try:
        k = GENERATORS[name](*params)
    except (InvalidParameter, TypeError) as exc:
        raise UsageError(f"{name}: {exc}") from None
    meta = {"generator": " ".join([name] + [str(p) for p in params])}
    _write(args.output, dumps(k, COLOR_NAMES.get(name), meta))
    payload = {"generator": name, "params": params, "vertices": len(k.vertices), "edges": len(k.edges)}
    return payload, f"{name}: {len(k.vertices)} vertices, {len(k.edges)} edges, {len(k.squares)} squares\n"


def _certify_file(path: str) -> dict:
    """Certify every (vertex, color set) of one file at which H_R holds."""
    doc = parse(Path(path).read_text(encoding="utf-8"))
    k = doc.to_kgraph()
    entries = []
    for size in range(1, k.rank + 1):
        for colors in itertools.combinations(range(1, k.rank + 1), size):
            for w in sorted(k.vertices):
                if not check_hr(k, w, colors).ok:
                    continue
                try:
                    cert = morita_certificate(k, w, colors, colors[0])
                    ok, problems = cert.ok, cert.verdict.problems
                except _MOVE_ERRORS as exc:
                    ok, problems = False, [str(exc)]
                entries.append({"vertex": w, "colors": list(colors), "ok": ok, "problems": problems})
    return {"file": path, "certificates": entries, "ok": all(e["ok"] for e in entries)}


def cmd_certify_all(args):
    for path in args.files:
        _load(path)  # surface input errors before fanning out
    with ProcessPoolExecutor(max_workers=args.jobs) as pool:
        results = list(pool.map(_certify_file, args.files))
    payload = {"files": results}
    _write(args.output, dumps_json(envelope("certify-all", all(r["ok"] for r in results), payload)))
    lines = [
        f"{r['file']}: {sum(e['ok'] for e in r['certificates'])}/{len(r['certificates'])} certificates pass\n"
        for r in results
    ]
    if not all(r["ok"] for r in results):
        raise PropertyFalse(payload, "".join(lines))
    return payload, "".join(lines)


# -- argument parsing ------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hrgraph", description="Higher-rank graph moves and checks.")
    parser.add_argument("--json", action="store_true", help="print the report as structured JSON")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def command(name, func, help):
        p = sub.add_parser(name, help=help)
        p.set_defaults(func=func)
        p.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help=argparse.SUPPRESS)
        return p

    p = command("validate", cmd_validate, "check KG2 and KG3")
    p.add_argument("file")
    p.add_argument("--per-color-source-free", action="store_true")

    p = command("check-hr", cmd_check_hr, "check full reducibility with stationary bridges")
    p.add_argument("file")
    p.add_argument("--vertex", required=True)
    p.add_argument("--colors", required=True, type=_colors)

    p = command("reduce", cmd_reduce, "apply the reduction move")
    p.add_argument("file")
    p.add_argument("--vertex", required=True)
    p.add_argument("--colors", required=True, type=_colors)
    p.add_argument("--bridge-color", required=True, type=int)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--emit-par", metavar="PATH")

    p = command("delay", cmd_delay, "apply the delay move to an edge")
    p.add_argument("file")
    p.add_argument("--edge", required=True)
    p.add_argument("-o", "--output", required=True)

    p = command("cr", cmd_cr, "apply complete-edge reduction")
    p.add_argument("file")
    p.add_argument("--vertex", required=True)
    p.add_argument("--fixed-edge")
    p.add_argument("-o", "--output", required=True)

    p = command("product", cmd_product, "cartesian product of two k-graphs")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("-o", "--output", required=True)

    p = command("iso", cmd_iso, "search for an isomorphism")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--allow-color-permutation", action="store_true")
    p.add_argument("-o", "--mapping", metavar="PATH")

    p = command("saturate", cmd_saturate, "hereditary and saturated closure of a vertex set")
    p.add_argument("file")
    p.add_argument("--set", required=True, type=_names)
    p.add_argument("--max-degree", type=int)

    p = command("certify", cmd_certify, "combinatorial Morita certificate for a reduction")
    p.add_argument("file")
    p.add_argument("--vertex", required=True)
    p.add_argument("--colors", required=True, type=_colors)
    p.add_argument("--bridge-color", required=True, type=int)
    p.add_argument("--max-degree", type=int)
    p.add_argument("-o", "--output", required=True)

    p = command("certify-all", cmd_certify_all, "certify every reducible vertex in several files")
    p.add_argument("files", nargs="+")
    p.add_argument("--jobs", type=int, default=None)
    p.add_argument("-o", "--output", required=True)

    p = command("export", cmd_export, "render as DOT (lossy) or JSON")
    p.add_argument("file")
    p.add_argument("--format", required=True, choices=["dot", "json"])
    p.add_argument("-o", "--output")

    p = command("gen", cmd_gen, "write a generated example")
    p.add_argument("name")
    p.add_argument("params", nargs="*")
    p.add_argument("-o", "--output", required=True)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    as_json = args.json
    try:
        payload, text = args.func(args)
        code, ok = OK, True
    except PropertyFalse as exc:
        payload, text, code, ok = exc.report, exc.text, FALSE, False
    except UsageError as exc:
        print(f"hrgraph {args.command}: {exc}", file=sys.stderr)
        return USAGE
    except KGraphError as exc:
        print(f"hrgraph {args.command}: {exc}", file=sys.stderr)
        return USAGE
    if as_json:
        sys.stdout.write(dumps_json(envelope(args.command, ok, payload)))
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
