"""The quadratic system an edge with k disk points must satisfy.

Variables are the coordinates of u_i, s_i, t_i (i = 1..k) in the frame
x = (-1, 0), y = (1, 0); 6k reals, ordered per index as
``u_x, u_y, s_x, s_y, t_x, t_y``. Every ``d(a, b) >= max{...}`` is expanded
into one squared-distance constraint per operand of the max, the constant
2 being ``d(x, y)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

import numpy as np
from scipy.optimize import minimize

from .errors import DimensionError

X, Y = 0, 1


@dataclass(frozen=True)
class Constraint:
    family: str
    indices: tuple  # 1-based
    lhs: tuple  # point pair whose squared distance must be large
    rhs: tuple | None  # point pair it must dominate; None for the unit-disk family


class FeasibilitySystem:
    def __init__(self, kappa: int):
        if kappa < 1:
            raise ValueError("kappa must be positive")
        self.kappa = kappa

    @property
    def n_vars(self) -> int:
        return 6 * self.kappa

    def u(self, i):
        return 2 + i

    def s(self, i):
        return 2 + self.kappa + i

    def t(self, i):
        return 2 + 2 * self.kappa + i

    @property
    def n_instances(self) -> int:
        """Inequality instances before the max operands are expanded."""
        k = self.kappa
        pairs = k * (k - 1) // 2
        return 4 * k + 3 * pairs

    @cached_property
    def constraints(self) -> tuple:
        k = self.kappa
        u, s, t = self.u, self.s, self.t
        out = []

        def add(fam, idx, lhs, operands):
            for rhs in list(operands) + [(X, Y)]:
                out.append(Constraint(fam, idx, lhs, rhs))

        for i in range(k):
            add("1", (i + 1,), (s(i), X), [(s(i), u(i))])
        for i, j in combinations(range(k), 2):
            add("2", (i + 1, j + 1), (s(i), s(j)), [(s(i), u(i)), (s(j), u(j))])
        for i in range(k):
            add("3", (i + 1,), (t(i), Y), [(t(i), u(i))])
        for i in range(k):
            add("4", (i + 1,), (s(i), t(i)), [(s(i), u(i)), (t(i), u(i))])
        for i, j in combinations(range(k), 2):
            add("5", (i + 1, j + 1), (t(i), t(j)), [(t(i), u(i)), (t(j), u(j))])
        for i, j in combinations(range(k), 2):
            add("6", (i + 1, j + 1), (s(i), t(j)), [(s(i), u(i)), (t(j), u(j))])
        for i in range(k):
            out.append(Constraint("7", (i + 1,), (u(i), u(i)), None))
        return tuple(out)

    @cached_property
    def _index(self):
        pair = [c for c in self.constraints if c.rhs is not None]
        disk = [c for c in self.constraints if c.rhs is None]
        A = np.array([[c.lhs[0], c.lhs[1], c.rhs[0], c.rhs[1]] for c in pair], dtype=np.int64)
        U = np.array([c.lhs[0] for c in disk], dtype=np.int64)
        order = [i for i, c in enumerate(self.constraints) if c.rhs is not None]
        order += [i for i, c in enumerate(self.constraints) if c.rhs is None]
        return A, U, np.array(order)

    def points(self, values) -> np.ndarray:
        """All 2 + 3k points, x and y first, from a flat assignment."""
        v = np.asarray(values)
        if v.shape != (self.n_vars,):
            raise DimensionError(f"assignment must have {self.n_vars} values, got shape {v.shape}")
        blocks = v.reshape(self.kappa, 3, 2)
        dtype = object if v.dtype == object else float
        one = 1 if dtype is object else 1.0
        xy = np.array([[-one, 0 * one], [one, 0 * one]], dtype=dtype)
        return np.concatenate([xy, blocks[:, 0], blocks[:, 1], blocks[:, 2]]).astype(dtype)

    def slacks(self, values) -> np.ndarray:
        """g(v) for every constraint g(v) >= 0, in ``constraints`` order."""
        P = self.points(values)
        A, U, order = self._index
        da = P[A[:, 0]] - P[A[:, 1]]
        dc = P[A[:, 2]] - P[A[:, 3]]
        g_pair = (da * da).sum(axis=1) - (dc * dc).sum(axis=1)
        pu = P[U]
        g_disk = 1 - (pu * pu).sum(axis=1)
        g = np.concatenate([g_pair, g_disk])
        out = np.empty_like(g)
        out[order] = g
        return out

    def residuals(self, values) -> np.ndarray:
        """Violation ``max(0, -g)`` of each constraint; all zero iff feasible."""
        g = self.slacks(values)
        return np.array([max(0 * x, -x) for x in g], dtype=g.dtype)

    def penalty(self, values, margin=0.0):
        """Sum of squared violations of ``g >= margin`` and its gradient."""
        P = self.points(np.asarray(values, dtype=float))
        A, U, _ = self._index
        da = P[A[:, 0]] - P[A[:, 1]]
        dc = P[A[:, 2]] - P[A[:, 3]]
        r = np.maximum(0.0, margin - ((da * da).sum(axis=1) - (dc * dc).sum(axis=1)))
        pu = P[U]
        rd = np.maximum(0.0, margin - (1.0 - (pu * pu).sum(axis=1)))
        f = float(r @ r + rd @ rd)
        G = np.zeros_like(P)
        # d(r^2) = -2 r dg
        w = (-2.0 * r)[:, None]
        np.add.at(G, A[:, 0], w * 2 * da)
        np.add.at(G, A[:, 1], -w * 2 * da)
        np.add.at(G, A[:, 2], -w * 2 * dc)
        np.add.at(G, A[:, 3], w * 2 * dc)
        np.add.at(G, U, (-2.0 * rd)[:, None] * (-2 * pu))
        k = self.kappa
        grad = np.stack([G[2:2 + k], G[2 + k:2 + 2 * k], G[2 + 2 * k:]], axis=1).reshape(-1)
        return f, grad

    def assignment(self, u, s, t) -> np.ndarray:
        """Flatten per-point coordinate lists into the variable order."""
        u, s, t = (np.asarray(a) for a in (u, s, t))
        blocks = np.stack([u, s, t], axis=1)
        if blocks.shape != (self.kappa, 3, 2):
            raise DimensionError(f"expected {self.kappa} points per role")
        return blocks.reshape(-1)
