"""Hamiltonian cycles ordered by their distance sequences.

A cycle's distance sequence is the list of its squared edge lengths sorted
in decreasing order; squaring is monotone, so comparing these sequences
lexicographically orders cycles exactly as comparing true lengths would.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import kernels
from .errors import EdgeNotInCycleError, SizeCapError, TooFewPointsError
from .geometry import PointSet

EXACT_CAP = 11


@dataclass(frozen=True)
class HamCycle:
    """A cyclic vertex order in canonical form.

    Canonical: starts at the smallest index and continues towards the
    smaller of its two neighbours, so rotations and reflections of the same
    cycle compare equal.
    """

    order: tuple

    def __post_init__(self):
        order = tuple(int(v) for v in self.order)
        if sorted(order) != list(range(len(order))):
            raise ValueError("cycle must visit each index 0..n-1 exactly once")
        object.__setattr__(self, "order", _canonical(order))

    @classmethod
    def from_order(cls, order: Sequence[int]) -> "HamCycle":
        return cls(tuple(order))

    @property
    def n(self) -> int:
        return len(self.order)

    def edges(self) -> list[tuple[int, int]]:
        o = self.order
        return [(o[k], o[(k + 1) % len(o)]) for k in range(len(o))]

    def edge_set(self) -> frozenset:
        return frozenset((min(a, b), max(a, b)) for a, b in self.edges())

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edge_set()

    def neighbours(self, v: int) -> tuple[int, int]:
        k = self.order.index(v)
        return self.order[k - 1], self.order[(k + 1) % self.n]


def _canonical(order):
    n = len(order)
    if n < 3:
        return order
    k = order.index(min(order))
    rot = order[k:] + order[:k]
    if rot[1] > rot[-1]:
        rot = (rot[0],) + tuple(reversed(rot[1:]))
    return rot


@functools.total_ordering
@dataclass(frozen=True)
class DistanceSequence:
    values: tuple  # squared edge lengths, non-increasing

    def __lt__(self, other):
        return self.values < other.values

    def __len__(self):
        return len(self.values)

    def __getitem__(self, idx):
        return self.values[idx]

    @property
    def bottleneck(self) -> Fraction:
        return self.values[0]


def _check_cycle(c: HamCycle, s: PointSet):
    if c.n != s.n:
        raise ValueError(f"cycle has {c.n} vertices but the point set has {s.n}")


def distance_sequence(c: HamCycle, s: PointSet) -> DistanceSequence:
    _check_cycle(c, s)
    vals = sorted((s.sq_dist(a, b) for a, b in c.edges()), reverse=True)
    return DistanceSequence(tuple(vals))


def compare_cycles(a: HamCycle, b: HamCycle, s: PointSet) -> int:
    """1 if ``a`` is above ``b`` in the distance-sequence order, -1 if below, 0 if ds-equal."""
    da, db = distance_sequence(a, s), distance_sequence(b, s)
    return (da > db) - (da < db)


@dataclass(frozen=True)
class MinimalResult:
    cycle: HamCycle
    ds: DistanceSequence
    ties: int  # number of distinct cycles sharing the minimal sequence
    nodes: int  # search-tree nodes expanded


def _ds_from_scaled(values, s: PointSet) -> DistanceSequence:
    L2 = s.scale**2
    return DistanceSequence(tuple(Fraction(int(v), L2) for v in values))


def exact_minimal(s: PointSet, cap: int | None = EXACT_CAP, warm_start: bool = True) -> MinimalResult:
    """Exact ds-minimal cycle by branch and bound, with tie count.

    Among ds-equal minima the lexicographically smallest canonical order is
    returned. ``warm_start`` seeds the bound with a local-search cycle; it
    never changes the answer.
    """
    n = s.n
    if n < 3:
        raise TooFewPointsError(f"a Hamiltonian cycle needs at least 3 points, got {n}")
    if cap is not None and n > cap:
        raise SizeCapError(f"exact minimal cycle is limited to n <= {cap} points, got {n}")
    D = s.sq_matrix
    bound = None
    if warm_start and n >= 8:
        tour, _ = kernels.local_search(D, kernels.nearest_neighbor_tour(D, 0))
        bound = sorted((D[tour[k], tour[(k + 1) % n]] for k in range(n)), reverse=True)
    order, ds, ties, nodes = kernels.bb_minimal(D, bound)
    return MinimalResult(HamCycle.from_order(order.tolist()), _ds_from_scaled(ds, s), ties, nodes)


def brute_force_minimal(s: PointSet) -> HamCycle:
    """A ds-minimal Hamiltonian cycle, found exactly (3 <= n <= 11)."""
    return exact_minimal(s).cycle


@dataclass(frozen=True)
class LocalSearchResult:
    cycle: HamCycle
    start: HamCycle
    moves: tuple  # accepted (2-opt, relocation, 3-exchange) moves


def local_search(s: PointSet, seed: int = 0) -> LocalSearchResult:
    n = s.n
    if n < 4:
        raise TooFewPointsError(f"local search needs at least 4 points, got {n}")
    D = s.sq_matrix
    start = kernels.nearest_neighbor_tour(D, seed % n)
    start_cycle = HamCycle.from_order(start.tolist())
    # the descent starts from the canonical form of the greedy tour
    tour, counts = kernels.local_search(D, np.array(start_cycle.order, dtype=np.int64))
    return LocalSearchResult(HamCycle.from_order(tour.tolist()), start_cycle, tuple(int(c) for c in counts))


def local_search_minimal(s: PointSet, seed: int = 0) -> HamCycle:
    """A cycle with no strictly improving 2-opt, relocation or 3-edge exchange.

    Starts from the nearest-neighbour tour rooted at index ``seed % n``.
    """
    return local_search(s, seed).cycle


@dataclass(frozen=True)
class TraversalRecord:
    edge: tuple  # (x, y), directed
    U: tuple  # disk points in traversal order
    S_pts: tuple  # predecessor of each u_i
    T_pts: tuple  # successor of each u_i

    @property
    def kappa(self) -> int:
        return len(self.U)


def directed_walk(c: HamCycle, x: int, y: int) -> list[int]:
    """Vertices met walking the cycle from x along the edge to y, x excluded at the end."""
    o = list(c.order)
    k = o.index(x)
    if o[(k + 1) % c.n] == y:
        return o[k:] + o[:k]
    if o[k - 1] == y:
        rev = o[k::-1] + o[:k:-1]
        return rev
    raise EdgeNotInCycleError(f"edge ({x}, {y}) is not in the cycle")


def extract_traversal(c: HamCycle, s: PointSet, edge) -> TraversalRecord:
    x, y = edge
    _check_cycle(c, s)
    walk = directed_walk(c, x, y)
    P = s.int_coords
    n = len(walk)
    U, S, T = [], [], []
    for pos in range(2, n):
        v = walk[pos]
        if (P[x, 0] - P[v, 0]) * (P[y, 0] - P[v, 0]) + (P[x, 1] - P[v, 1]) * (P[y, 1] - P[v, 1]) <= 0:
            U.append(v)
            S.append(walk[pos - 1])
            T.append(walk[(pos + 1) % n])
    return TraversalRecord((x, y), tuple(U), tuple(S), tuple(T))


def is_hamiltonian(g, method: str = "auto"):
    """Decide Hamiltonicity of a geometric graph; returns (found, cycle or None)."""
    if g.n < 3:
        raise TooFewPointsError(f"a Hamiltonian cycle needs at least 3 vertices, got {g.n}")
    found, order = kernels.hamiltonian_cycle(g.adjacency(), method)
    return found, (HamCycle.from_order(order.tolist()) if found else None)
