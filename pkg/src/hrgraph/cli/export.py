"""JSON and DOT renderings of a :class:`KgDocument`, plus the report envelope."""
from __future__ import annotations

import json
from collections import Counter

from .kgformat import KgDocument

REPORT_SCHEMA = "hrgraph-report"
REPORT_VERSION = 1

# color c is drawn with PALETTE[(c - 1) % 8]
PALETTE = (
    "#000000",  # black
    "#1f5fbf",  # blue
    "#d62728",  # red
    "#2ca02c",  # green
    "#ff7f0e",  # orange
    "#9467bd",  # purple
    "#8c564b",  # brown
    "#17becf",  # teal
)


def dumps_json(value) -> str:
    return json.dumps(value, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def to_json(doc: KgDocument) -> str:
    return dumps_json(doc.to_dict())


def envelope(command: str, ok: bool, report: dict) -> dict:
    return {"schema": REPORT_SCHEMA, "version": REPORT_VERSION, "command": command, "ok": ok, "report": report}


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(doc: KgDocument) -> str:
    """Graphviz digraph of the skeleton. Squares are not drawn.

    Loops attach to the top of their vertex and are bold; each member of a
    parallel class gets an ``i/n`` suffix and its own curve.
    """
    doc = doc.canonical()
    parallel = Counter((e.src, e.rng, e.color) for e in doc.edges)
    seen = Counter()
    lines = [
        "// lossy export: factorization squares are omitted",
        "digraph kgraph {",
        "  node [shape=circle];",
    ]
    for c in range(1, doc.rank + 1):
        name = f" {doc.color_names[c]}" if c in doc.color_names else ""
        lines.append(f"  // color {c}{name}: {PALETTE[(c - 1) % len(PALETTE)]}")
    for v in doc.vertices:
        lines.append(f"  {_quote(v)};")
    for e in doc.edges:
        attrs = [f"id={_quote(e.id)}", f"color={_quote(PALETTE[(e.color - 1) % len(PALETTE)])}"]
        label = e.id
        key = (e.src, e.rng, e.color)
        if parallel[key] > 1:
            seen[key] += 1
            label += f" [{seen[key]}/{parallel[key]}]"
        attrs.insert(1, f"label={_quote(label)}")
        if e.src == e.rng:
            attrs += ['style="bold"', 'tailport="n"', 'headport="n"']
        lines.append(f"  {_quote(e.src)} -> {_quote(e.rng)} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
