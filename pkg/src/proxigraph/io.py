"""Text formats for point sets, graphs, cycles, audits and witness stores.

Point sets are line-oriented::

    pointset v1
    # comment
    3/7 0.25 [label]

Coordinates are integers, ratios or decimals, all read exactly. Graph,
cycle, audit, feasibility and manifest files are JSON objects whose
``format`` key names the kind and version (``"graph v1"`` and so on);
exact quantities are written as rational strings.
"""
from __future__ import annotations

import hashlib
import json
import os
import tempfile
from fractions import Fraction
from pathlib import Path

from . import __version__
from .cycles import HamCycle, distance_sequence
from .errors import ParseError
from .geometry import Point, PointSet, format_scalar, to_scalar
from .graphs import GeometricGraph

POINTSET_HEADER = "pointset v1"


def write_atomic(path, text: str):
    """Write via a temporary file in the same directory, then rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


# -- point sets -------------------------------------------------------------------

def parse_pointset(text: str) -> tuple[PointSet, list]:
    """Parse a point file; returns the point set and per-point labels (or None)."""
    lines = text.splitlines()
    header_seen = False
    pts, labels = [], []
    for lineno, raw in enumerate(lines, start=1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        if not header_seen:
            if body.strip() != POINTSET_HEADER:
                raise ParseError(f"expected header {POINTSET_HEADER!r}", lineno, 1)
            header_seen = True
            continue
        tokens = []
        col = 0
        for tok in body.split():
            col = body.index(tok, col)
            tokens.append((tok, col + 1))
            col += len(tok)
        if len(tokens) not in (2, 3):
            raise ParseError(f"expected 'x y [label]', got {len(tokens)} fields", lineno, tokens[0][1])
        coords = []
        for tok, c in tokens[:2]:
            try:
                coords.append(to_scalar(tok))
            except (ValueError, ZeroDivisionError) as exc:
                raise ParseError(f"bad coordinate {tok!r}", lineno, c) from exc
        pts.append(Point(*coords))
        labels.append(tokens[2][0] if len(tokens) == 3 else None)
    if not header_seen:
        raise ParseError(f"missing header {POINTSET_HEADER!r}", 1, 1)
    try:
        s = PointSet(pts)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    return s, labels


def emit_pointset(s: PointSet, labels=None, comment: str | None = None) -> str:
    out = [POINTSET_HEADER]
    if comment:
        out.extend(f"# {line}" for line in comment.splitlines())
    for idx, p in enumerate(s):
        row = f"{format_scalar(p.x)} {format_scalar(p.y)}"
        if labels and labels[idx]:
            row += f" {labels[idx]}"
        out.append(row)
    return "\n".join(out) + "\n"


def read_pointset(path) -> PointSet:
    return parse_pointset(Path(path).read_text(encoding="utf-8"))[0]


# -- JSON documents -------------------------------------------------------------

def _compact(v) -> str:
    return json.dumps(v, separators=(", ", ": "))


def _dump(doc) -> str:
    """One key per line; lists of lists or objects get one element per line."""
    rows = []
    for key, val in doc.items():
        if isinstance(val, list) and val and isinstance(val[0], (list, dict)):
            body = ",\n".join(f"    {_compact(x)}" for x in val)
            rows.append(f"  {json.dumps(key)}: [\n{body}\n  ]")
        else:
            rows.append(f"  {json.dumps(key)}: {_compact(val)}")
    return "{\n" + ",\n".join(rows) + "\n}\n"


def _load(text: str, kind: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from exc
    if not isinstance(doc, dict) or doc.get("format") != f"{kind} v1":
        raise ParseError(f"not a '{kind} v1' document")
    return doc


def emit_graph(g: GeometricGraph) -> str:
    return _dump({
        "format": "graph v1",
        "kind": g.kind,
        "k": g.k,
        "n": g.n,
        "edges": [list(e) for e in g.sorted_edges()],
    })


def parse_graph(text: str, s: PointSet) -> GeometricGraph:
    doc = _load(text, "graph")
    if doc.get("n") != s.n:
        raise ParseError(f"graph is over {doc.get('n')} points, point set has {s.n}")
    try:
        return GeometricGraph(s, frozenset(tuple(e) for e in doc["edges"]), doc["kind"], int(doc["k"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed graph document: {exc}") from exc


def emit_cycle(c: HamCycle, s: PointSet) -> str:
    ds = distance_sequence(c, s)
    return _dump({
        "format": "cycle v1",
        "n": c.n,
        "order": list(c.order),
        "ds": [format_scalar(v) for v in ds.values],
    })


def parse_cycle(text: str, s: PointSet | None = None) -> HamCycle:
    doc = _load(text, "cycle")
    try:
        c = HamCycle.from_order(doc["order"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed cycle document: {exc}") from exc
    if s is not None and c.n != s.n:
        raise ParseError(f"cycle has {c.n} vertices, point set has {s.n}")
    return c


def audit_document(audit, input_text: str | None = None) -> dict:
    edges = []
    for e in audit.edges:
        fams = {
            f: [{"i": list(ch.indices), "holds": ch.holds, "slack": format_scalar(ch.slack)} for ch in checks]
            for f, checks in e.inequalities.families.items()
        }
        edges.append({
            "edge": list(e.edge),
            "kappa": e.kappa,
            "in_k_gabriel": e.in_k_gabriel,
            "inequalities_hold": e.inequalities.all_hold,
            "packing_ok": e.packing_ok,
            "n_disks": e.witness.n_disks,
            "centers": [[round(float(a), 12), round(float(b), 12)] for a, b in e.witness.centers],
            "inequalities": fams,
            "passed": e.passed,
        })
    return {
        "format": "audit v1",
        "tool_version": __version__,
        "input_sha256": sha256_text(input_text) if input_text is not None else None,
        "mode": audit.mode,
        "k": audit.k,
        "tol": audit.tol,
        "cycle": list(audit.cycle.order),
        "max_kappa": audit.max_kappa,
        "passed": audit.passed,
        "edges": edges,
    }


def emit_audit(audit, input_text: str | None = None) -> str:
    return _dump(audit_document(audit, input_text))


def parse_audit(text: str) -> dict:
    return _load(text, "audit")


def emit_feasibility(system, result) -> str:
    res = system.residuals(result.assignment)
    return _dump({
        "format": "feasibility v1",
        "kappa": system.kappa,
        "start": result.start,
        "restarts_run": result.restarts_run,
        "max_residual": float(result.max_residual),
        "assignment": [float(v) for v in result.assignment],
        "residuals": [
            {"family": c.family, "i": list(c.indices), "value": float(r)}
            for c, r in zip(system.constraints, res)
        ],
    })


# -- witness store ----------------------------------------------------------------

MANIFEST = "manifest.json"


def load_manifest(directory) -> list:
    path = Path(directory) / MANIFEST
    if not path.exists():
        return []
    return _load(path.read_text(encoding="utf-8"), "manifest")["entries"]


def store_witness(directory, witness, claim: str) -> Path:
    """Persist a witness point set and merge its entry into the manifest.

    Entries are keyed and ordered by (seed, trial), so re-storing the same
    witness leaves the directory byte-identical.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    name = f"witness-{witness.generator}-n{witness.points.n}-s{witness.seed}-t{witness.trial}.pts"
    write_atomic(directory / name, emit_pointset(witness.points, comment=claim))
    entry = {
        "file": name,
        "claim": claim,
        "seed": witness.seed,
        "trial": witness.trial,
        "generator": witness.generator,
        "n": witness.points.n,
        "edge": list(witness.edge),
        "kappa": witness.kappa,
        "cycle": list(witness.cycle.order),
    }
    entries = {(e["seed"], e["trial"], e["file"]): e for e in load_manifest(directory)}
    entries[(entry["seed"], entry["trial"], entry["file"])] = entry
    merged = [entries[key] for key in sorted(entries)]
    write_atomic(directory / MANIFEST, _dump({"format": "manifest v1", "entries": merged}))
    return directory / name
