"""Deterministic SVG figures: points as dots, graph edges, a highlighted cycle and dashed diameter circles."""
from __future__ import annotations

import re
from xml.sax.saxutils import escape

import numpy as np

from .geometry import PointSet

WIDTH = 600
MARGIN = 0.05
DOT_R = 3.0


def _fmt(v: float) -> str:
    out = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if out == "-0" else out


def render_svg(s: PointSet, edges=(), cycle=None, circles=(), labels=None) -> str:
    """SVG 1.1 document for the given layers.

    ``edges`` and ``circles`` are index pairs; ``cycle`` is a HamCycle or None.
    The view is fitted to all points and circles with a 5% margin on each
    side and the y axis points up.
    """
    P = s.to_float()
    circ = []
    for i, j in circles:
        c = (P[i] + P[j]) / 2
        circ.append((c, float(np.hypot(*(P[i] - P[j]))) / 2))
    lo, hi = P.min(axis=0), P.max(axis=0)
    for c, r in circ:
        lo = np.minimum(lo, c - r)
        hi = np.maximum(hi, c + r)
    span = hi - lo
    side = float(max(span.max(), 1e-12))
    lo = lo - (side - span) / 2  # centre the shorter axis
    pad = MARGIN * side
    scale = WIDTH / (side + 2 * pad)

    def X(p):
        return (p[0] - lo[0] + pad) * scale

    def Y(p):
        return (lo[1] + side + pad - p[1]) * scale

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{WIDTH}" '
        f'viewBox="0 0 {WIDTH} {WIDTH}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    cyc = cycle.edge_set() if cycle is not None else frozenset()
    out.append('<g id="circles" fill="none" stroke="#777" stroke-width="1" stroke-dasharray="5,4">')
    for c, r in circ:
        out.append(f'<circle cx="{_fmt(X(c))}" cy="{_fmt(Y(c))}" r="{_fmt(r * scale)}"/>')
    out.append("</g>")
    out.append('<g id="edges" stroke="black" stroke-width="1">')
    for i, j in sorted(tuple(sorted(e)) for e in edges):
        if (i, j) in cyc:
            continue
        out.append(f'<line x1="{_fmt(X(P[i]))}" y1="{_fmt(Y(P[i]))}" x2="{_fmt(X(P[j]))}" y2="{_fmt(Y(P[j]))}"/>')
    out.append("</g>")
    out.append('<g id="cycle" stroke="#c0392b" stroke-width="2.5">')
    for i, j in sorted(cyc):
        out.append(f'<line x1="{_fmt(X(P[i]))}" y1="{_fmt(Y(P[i]))}" x2="{_fmt(X(P[j]))}" y2="{_fmt(Y(P[j]))}"/>')
    out.append("</g>")
    out.append('<g id="points" fill="black">')
    for idx, p in enumerate(P):
        out.append(f'<circle cx="{_fmt(X(p))}" cy="{_fmt(Y(p))}" r="{_fmt(DOT_R)}"/>')
    out.append("</g>")
    if labels and any(labels):
        out.append('<g id="labels" font-family="sans-serif" font-size="12">')
        for p, lab in zip(P, labels):
            if lab:
                out.append(f'<text x="{_fmt(X(p) + 5)}" y="{_fmt(Y(p) - 5)}">{escape(lab)}</text>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def parse_circles(text: str) -> list:
    """Parse ``"(0,1) (2,3)"`` or ``"0-1,2-3"`` into index pairs."""
    nums = [int(tok) for tok in re.findall(r"\d+", text)]
    if len(nums) % 2:
        raise ValueError(f"circle list needs index pairs, got {text!r}")
    return list(zip(nums[::2], nums[1::2]))
