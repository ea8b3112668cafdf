"""Exact planar primitives on rational coordinates.

Every combinatorial predicate here is decided with :class:`fractions.Fraction`
arithmetic on squared quantities, so no square root is ever taken. Float
coordinates only appear in :func:`normalize_edge` and :meth:`PointSet.to_float`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from ._accel import INT_SPAN_LIMIT
from .errors import DegeneratePairError, DuplicatePointError

Scalar = Fraction


def to_scalar(value) -> Fraction:
    """Convert ``value`` to an exact rational.

    Strings may be integers, ratios (``"3/7"``) or decimals (``"0.25"``,
    ``"1e-3"``); decimals are converted digit-exactly, never through binary
    floating point.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            num, _, den = text.partition("/")
            return Fraction(int(num), int(den))
        try:
            return Fraction(Decimal(text))
        except (InvalidOperation, ValueError) as exc:
            raise ValueError(f"not a rational number: {value!r}") from exc
    if isinstance(value, Decimal):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite coordinate: {value!r}")
        return Fraction(value)
    return Fraction(value)


def format_scalar(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class Point(NamedTuple):
    x: Fraction
    y: Fraction

    @classmethod
    def of(cls, x, y) -> "Point":
        return cls(to_scalar(x), to_scalar(y))

    def __sub__(self, other):
        return Point(self.x - other.x, self.y - other.y)

    def __add__(self, other):
        return Point(self.x + other.x, self.y + other.y)


def sq_dist(p: Point, q: Point) -> Fraction:
    dx = p[0] - q[0]
    dy = p[1] - q[1]
    return dx * dx + dy * dy


def dot(a, b):
    return a[0] * b[0] + a[1] * b[1]


def cross(a, b):
    return a[0] * b[1] - a[1] * b[0]


def orientation(a: Point, b: Point, c: Point) -> int:
    """Sign of the turn a -> b -> c: +1 left, -1 right, 0 collinear."""
    v = cross(b - a, c - a)
    return (v > 0) - (v < 0)


def _check_pair(a, b):
    if a[0] == b[0] and a[1] == b[1]:
        raise DegeneratePairError(f"degenerate pair: both points are {tuple(a)}")


def in_diameter_disk(a: Point, b: Point, q: Point) -> bool:
    """Closed-disk membership of ``q`` in the disk with diameter ``ab``.

    Thales: ``q`` lies in the closed disk iff the angle aqb is at least 90
    degrees, i.e. ``(a - q) . (b - q) <= 0``.
    """
    _check_pair(a, b)
    return (a[0] - q[0]) * (b[0] - q[0]) + (a[1] - q[1]) * (b[1] - q[1]) <= 0


def in_lune(a: Point, b: Point, q: Point) -> bool:
    """Open-lune membership: q strictly closer to both a and b than |ab|."""
    _check_pair(a, b)
    d = sq_dist(a, b)
    return sq_dist(a, q) < d and sq_dist(b, q) < d


@dataclass(frozen=True)
class EdgeTransform:
    """Similarity taking p_i to (-1, 0) and p_j to (1, 0)."""

    origin: tuple[float, float]  # midpoint of the edge, original frame
    scale: float  # 2 / d(p_i, p_j)
    angle: float  # rotation applied after translation, radians

    def apply(self, p) -> tuple[float, float]:
        x = float(p[0]) - self.origin[0]
        y = float(p[1]) - self.origin[1]
        c, s = math.cos(self.angle), math.sin(self.angle)
        return (self.scale * (c * x - s * y), self.scale * (s * x + c * y))


class PointSet(Sequence[Point]):
    """An ordered set of distinct rational points; identity is the index.

    Kernels work on :attr:`int_coords`, the points translated and scaled by
    the common denominator so that every coordinate is an integer. Squared
    distances in that frame are exact multiples (by ``scale**2``) of the
    true ones, so all comparisons agree with the rational ones.
    """

    def __init__(self, points: Iterable):
        pts = tuple(p if isinstance(p, Point) else Point.of(*p) for p in points)
        seen = {}
        for idx, p in enumerate(pts):
            if p in seen:
                raise DuplicatePointError(
                    f"points {seen[p]} and {idx} coincide at "
                    f"({format_scalar(p.x)}, {format_scalar(p.y)})"
                )
            seen[p] = idx
        self._points = pts

    def __len__(self):
        return len(self._points)

    def __getitem__(self, idx):
        return self._points[idx]

    def __iter__(self):
        return iter(self._points)

    def __eq__(self, other):
        if isinstance(other, PointSet):
            return self._points == other._points
        return NotImplemented

    def __hash__(self):
        return hash(self._points)

    def __repr__(self):
        body = ", ".join(f"({format_scalar(p.x)}, {format_scalar(p.y)})" for p in self._points[:6])
        more = ", ..." if len(self) > 6 else ""
        return f"PointSet([{body}{more}], n={len(self)})"

    @property
    def n(self) -> int:
        return len(self._points)

    @cached_property
    def scale(self) -> int:
        """Common denominator of all coordinates."""
        den = 1
        for p in self._points:
            den = math.lcm(den, p.x.denominator, p.y.denominator)
        return den

    @cached_property
    def int_coords(self) -> np.ndarray:
        """Integer coordinates, shape (n, 2); int64 when exact, else object."""
        L = self.scale
        if not self._points:
            return np.zeros((0, 2), dtype=np.int64)
        x0 = min(p.x for p in self._points)
        y0 = min(p.y for p in self._points)
        rows = [(int((p.x - x0) * L), int((p.y - y0) * L)) for p in self._points]
        span = max(max(r) for r in rows)
        dtype = np.int64 if span < INT_SPAN_LIMIT else object
        return np.array(rows, dtype=dtype)

    @cached_property
    def sq_matrix(self) -> np.ndarray:
        """Scaled squared distances ``scale**2 * d(p_i, p_j)**2``, exact."""
        P = self.int_coords
        diff = P[:, None, :] - P[None, :, :]
        return (diff * diff).sum(axis=2)

    def sq_dist(self, i: int, j: int) -> Fraction:
        return Fraction(int(self.sq_matrix[i, j]), self.scale**2)

    def to_float(self) -> np.ndarray:
        return np.array([(float(p.x), float(p.y)) for p in self._points], dtype=float)

    def transformed(self, scale=1, dx=0, dy=0) -> "PointSet":
        f, tx, ty = to_scalar(scale), to_scalar(dx), to_scalar(dy)
        return PointSet(Point(p.x * f + tx, p.y * f + ty) for p in self._points)


def normalize_edge_exact(s: Sequence[Point], i: int, j: int) -> list[tuple[Fraction, Fraction]]:
    """Exact image of all points under the similarity p_i -> (-1,0), p_j -> (1,0).

    The map is ``v -> (2 / |d|^2) * (v . d, d x v)`` with ``v`` measured from
    the edge midpoint and ``d = p_j - p_i``; it needs no square root.
    """
    a, b = s[i], s[j]
    _check_pair(a, b)
    mx, my = (a.x + b.x) / 2, (a.y + b.y) / 2
    dx, dy = b.x - a.x, b.y - a.y
    k = Fraction(2) / (dx * dx + dy * dy)
    out = []
    for p in s:
        vx, vy = p.x - mx, p.y - my
        out.append((k * (vx * dx + vy * dy), k * (dx * vy - dy * vx)))
    return out


def normalize_edge(s: Sequence[Point], i: int, j: int) -> tuple[np.ndarray, EdgeTransform]:
    """Float image of ``s`` in the frame where edge (i, j) is (-1,0)-(1,0)."""
    exact = normalize_edge_exact(s, i, j)
    a, b = s[i], s[j]
    dx, dy = float(b.x - a.x), float(b.y - a.y)
    tr = EdgeTransform(
        origin=(float((a.x + b.x) / 2), float((a.y + b.y) / 2)),
        scale=2.0 / math.sqrt(float(sq_dist(a, b))),
        angle=-math.atan2(dy, dx),
    )
    return np.array([(float(x), float(y)) for x, y in exact], dtype=float), tr
