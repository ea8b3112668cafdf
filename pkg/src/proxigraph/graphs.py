"""k-Gabriel, k-relative-neighbourhood and k-Delaunay graphs.

The constructions are the brute-force reference ones: every pair is tested
against every other point with an exact predicate.
"""
from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from . import kernels
from .errors import DegeneratePairError, TooFewPointsError
from .geometry import PointSet

KINDS = ("k-GG", "k-RNG", "k-DG", "custom")


def _edge(i, j):
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class GeometricGraph:
    point_set: PointSet
    edges: frozenset
    kind: str = "custom"
    k: int = 0

    def __post_init__(self):
        n = self.point_set.n
        canon = set()
        for i, j in self.edges:
            i, j = int(i), int(j)
            if i == j or not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"invalid edge ({i}, {j}) for {n} points")
            canon.add(_edge(i, j))
        object.__setattr__(self, "edges", frozenset(canon))
        if self.kind not in KINDS:
            raise ValueError(f"unknown graph kind {self.kind!r}")
        if self.k < 0:
            raise ValueError("k must be non-negative")

    @property
    def n(self) -> int:
        return self.point_set.n

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def adjacency(self) -> np.ndarray:
        adj = np.zeros((self.n, self.n), dtype=bool)
        for i, j in self.edges:
            adj[i, j] = adj[j, i] = True
        return adj

    def __contains__(self, edge) -> bool:
        return _edge(*edge) in self.edges

    def is_complete(self) -> bool:
        return len(self.edges) == self.n * (self.n - 1) // 2


def _require_points(s: PointSet, minimum=2):
    if s.n < minimum:
        raise TooFewPointsError(f"need at least {minimum} points, got {s.n}")


def _require_pair(s: PointSet, i: int, j: int):
    for idx in (i, j):
        if not 0 <= idx < s.n:
            raise IndexError(f"point index {idx} out of range for {s.n} points")
    if i == j:
        raise DegeneratePairError(f"degenerate pair ({i}, {i})")


def gabriel_witness_count(s: PointSet, i: int, j: int) -> int:
    """Number of points other than p_i, p_j in the closed disk with diameter p_i p_j."""
    _require_pair(s, i, j)
    P = s.int_coords
    a, b = P[i], P[j]
    count = 0
    for q in range(s.n):
        if q == i or q == j:
            continue
        if (a[0] - P[q, 0]) * (b[0] - P[q, 0]) + (a[1] - P[q, 1]) * (b[1] - P[q, 1]) <= 0:
            count += 1
    return count


def gabriel_count_matrix(s: PointSet) -> np.ndarray:
    return kernels.gabriel_counts(s.int_coords)


def lune_count_matrix(s: PointSet) -> np.ndarray:
    return kernels.lune_counts(s.sq_matrix)


def build_k_gabriel(s: PointSet, k: int) -> GeometricGraph:
    _require_points(s)
    if k < 0:
        raise ValueError("k must be non-negative")
    C = gabriel_count_matrix(s)
    ii, jj = np.nonzero(np.triu(C <= k, 1))
    return GeometricGraph(s, frozenset(zip(ii.tolist(), jj.tolist())), "k-GG", k)


def build_k_rng(s: PointSet, k: int) -> GeometricGraph:
    _require_points(s)
    if k < 0:
        raise ValueError("k must be non-negative")
    C = lune_count_matrix(s)
    ii, jj = np.nonzero(np.triu(C <= k, 1))
    return GeometricGraph(s, frozenset(zip(ii.tolist(), jj.tolist())), "k-RNG", k)


def disk_events(s: PointSet, i: int, j: int):
    """Enclosure intervals of every other point over the disks through p_i, p_j.

    Disk centres run along the perpendicular bisector, ``c(t) = m + t * n``
    with ``m`` the midpoint and ``n`` the left normal of ``p_j - p_i``.
    For a third point q the closed disk contains q iff
    ``(q - p_i) . (q - p_j) <= 2 t cross(p_j - p_i, q - p_i)``, which is linear
    in t. Returns ``(always, upper, lower)``: the number of points enclosed
    for every t, and the sorted thresholds of points enclosed for
    ``t >= tau`` and for ``t <= tau`` respectively.
    """
    _require_pair(s, i, j)
    P = s.int_coords
    ax, ay = int(P[i, 0]), int(P[i, 1])
    bx, by = int(P[j, 0]), int(P[j, 1])
    always = 0
    upper, lower = [], []
    for q in range(s.n):
        if q == i or q == j:
            continue
        qx, qy = int(P[q, 0]), int(P[q, 1])
        A = (qx - ax) * (qx - bx) + (qy - ay) * (qy - by)
        B = (bx - ax) * (qy - ay) - (by - ay) * (qx - ax)
        if B == 0:
            # on the line through p_i p_j: inside every disk iff on the segment
            if A <= 0:
                always += 1
        elif B > 0:
            upper.append(Fraction(A, 2 * B))
        else:
            lower.append(Fraction(A, 2 * B))
    upper.sort()
    lower.sort()
    return always, upper, lower


def min_enclosing_count(s: PointSet, i: int, j: int) -> int:
    """Fewest other points in any closed disk with p_i and p_j on its boundary.

    Sweeps t over the sorted thresholds. The count is piecewise constant and
    every threshold is closed on both sides, so the minimum is attained on
    an open interval between consecutive distinct thresholds or on one of
    the two unbounded ends (the half-plane limits).
    """
    always, upper, lower = disk_events(s, i, j)
    taus = sorted(set(upper) | set(lower))
    if not taus:
        return always
    # probe one t inside each open interval, including both unbounded ones
    probes = [taus[0] - 1]
    probes += [(a + b) / 2 for a, b in zip(taus, taus[1:])]
    probes.append(taus[-1] + 1)
    best = None
    for t in probes:
        count = always + bisect.bisect_right(upper, t) + (len(lower) - bisect.bisect_left(lower, t))
        if best is None or count < best:
            best = count
    return best


def delaunay_count_matrix(s: PointSet) -> np.ndarray:
    C = np.zeros((s.n, s.n), dtype=np.int64)
    for i in range(s.n):
        for j in range(i + 1, s.n):
            C[i, j] = C[j, i] = min_enclosing_count(s, i, j)
    return C


def build_k_delaunay(s: PointSet, k: int) -> GeometricGraph:
    _require_points(s)
    if k < 0:
        raise ValueError("k must be non-negative")
    C = delaunay_count_matrix(s)
    ii, jj = np.nonzero(np.triu(C <= k, 1))
    return GeometricGraph(s, frozenset(zip(ii.tolist(), jj.tolist())), "k-DG", k)


def crossing_edges(g: GeometricGraph):
    """A pair of edges whose segments meet away from a shared endpoint, or None."""
    edges = g.sorted_edges()
    if len(edges) < 2:
        return None
    e, f = kernels.first_crossing(g.point_set.int_coords, np.array(edges, dtype=np.int64))
    if e < 0:
        return None
    return edges[e], edges[f]


def is_plane(g: GeometricGraph) -> bool:
    return crossing_edges(g) is None


def from_edges(s: PointSet, edges: Iterable, kind="custom", k=0) -> GeometricGraph:
    return GeometricGraph(s, frozenset(tuple(e) for e in edges), kind, k)
