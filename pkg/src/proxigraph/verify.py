"""Per-edge audit of why every edge of a minimal cycle is a 10-Gabriel edge.

For an edge xy of the cycle, U is the set of other points in the closed disk
with diameter xy, met in the order u_1..u_k when walking the cycle from x
through y and back to x; s_i and t_i are the neighbours before and after
u_i on that walk. Minimality forces six families of distance inequalities
between these points. The first two make the unit disks at x and at the
(radially clamped) s_i a packing inside the radius-4 circle around the edge
midpoint, and twelve unit disks do not fit there, so k <= 10.

Every inequality is checked in exact arithmetic. In the frame where
|xy| = 2 each one reads ``d(a, b) >= max{d(c, d), ..., 2}``; squared and
scaled back to raw coordinates the constant 2 becomes ``|xy|``, so the
check is ``sq(a, b) >= sq(c, d)`` for each operand and ``sq(a, b) >= sq(x, y)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import NamedTuple

import numpy as np

from . import graphs
from .cycles import HamCycle, exact_minimal, extract_traversal, local_search_minimal
from .errors import EdgeNotInCycleError
from .geometry import PointSet, normalize_edge_exact

FAMILIES = ("1", "2", "3", "4", "5", "6", "7")
FAMILY_NAMES = {
    "1": "s-x",
    "2": "s-s",
    "3": "t-y",
    "4": "s-t same index",
    "5": "t-t",
    "6": "s-t cross index",
    "7": "u in disk",
}
MAX_DISKS = 11  # twelve unit disks need an enclosing radius above 4.029
DEFAULT_TOL = 1e-9


class InequalityCheck(NamedTuple):
    indices: tuple  # 1-based positions i (and j) in the traversal
    holds: bool
    slack: Fraction  # lhs^2 - max(rhs^2), raw squared units


@dataclass(frozen=True)
class InequalityReport:
    edge: tuple
    kappa: int
    families: dict

    @property
    def all_hold(self) -> bool:
        return all(c.holds for checks in self.families.values() for c in checks)

    def holds(self, family: str) -> bool:
        return all(c.holds for c in self.families[family])

    def violations(self):
        return [(f, c) for f in FAMILIES for c in self.families[f] if not c.holds]


def kappa(s: PointSet, edge) -> int:
    return graphs.gabriel_witness_count(s, edge[0], edge[1])


def _require_edge(c: HamCycle, edge):
    if not c.has_edge(*edge):
        raise EdgeNotInCycleError(f"edge {tuple(edge)} is not in the cycle")


def check_inequalities(s: PointSet, c: HamCycle, edge) -> InequalityReport:
    _require_edge(c, edge)
    rec = extract_traversal(c, s, edge)
    D = s.sq_matrix
    L2 = s.scale**2
    x, y = rec.edge
    frame = int(D[x, y])
    U, S, T = rec.U, rec.S_pts, rec.T_pts
    k = len(U)

    def check(idx, a, b, operands):
        lhs = int(D[a, b])
        rhs = max([frame] + [int(D[p, q]) for p, q in operands])
        return InequalityCheck(idx, lhs >= rhs, Fraction(lhs - rhs, L2))

    fam = {f: [] for f in FAMILIES}
    for i in range(k):
        fam["1"].append(check((i + 1,), S[i], x, [(S[i], U[i])]))
        fam["3"].append(check((i + 1,), T[i], y, [(T[i], U[i])]))
        fam["4"].append(check((i + 1,), S[i], T[i], [(S[i], U[i]), (T[i], U[i])]))
        # (u - x).(u - y) = |u - m|^2 - |xy|^2 / 4
        P = s.int_coords
        u = U[i]
        dotv = int((P[x, 0] - P[u, 0]) * (P[y, 0] - P[u, 0]) + (P[x, 1] - P[u, 1]) * (P[y, 1] - P[u, 1]))
        fam["7"].append(InequalityCheck((i + 1,), dotv <= 0, Fraction(-dotv, L2)))
    for i, j in combinations(range(k), 2):
        fam["2"].append(check((i + 1, j + 1), S[i], S[j], [(S[i], U[i]), (S[j], U[j])]))
        fam["5"].append(check((i + 1, j + 1), T[i], T[j], [(T[i], U[i]), (T[j], U[j])]))
        fam["6"].append(check((i + 1, j + 1), S[i], T[j], [(S[i], U[i]), (T[j], U[j])]))
    return InequalityReport((x, y), k, {f: tuple(v) for f, v in fam.items()})


@dataclass(frozen=True)
class PackingWitness:
    edge: tuple
    frame: np.ndarray  # all points in the |xy| = 2 frame
    centers: np.ndarray  # (k + 1, 2); row 0 is x = (-1, 0)
    projected: tuple  # whether centre i (1-based) was clamped to radius 3

    @property
    def n_disks(self) -> int:
        return len(self.centers)


def build_packing_witness(s: PointSet, c: HamCycle, edge) -> PackingWitness:
    """Unit disks at x and at each s_i, pulled in to radius 3 when farther out."""
    _require_edge(c, edge)
    rec = extract_traversal(c, s, edge)
    exact = normalize_edge_exact(s, *rec.edge)
    frame = np.array([(float(a), float(b)) for a, b in exact])
    centers = [(-1.0, 0.0)]
    projected = []
    for v in rec.S_pts:
        ex, ey = exact[v]
        if ex * ex + ey * ey <= 9:
            centers.append((float(ex), float(ey)))
            projected.append(False)
        else:
            r = math.hypot(float(ex), float(ey))
            centers.append((3.0 * float(ex) / r, 3.0 * float(ey) / r))
            projected.append(True)
    return PackingWitness(rec.edge, frame, np.array(centers), tuple(projected))


def packing_margins(w: PackingWitness) -> tuple[float, float]:
    """(largest centre radius, smallest pairwise centre distance)."""
    C = w.centers
    rmax = float(np.max(np.hypot(C[:, 0], C[:, 1])))
    if len(C) < 2:
        return rmax, math.inf
    diff = C[:, None, :] - C[None, :, :]
    dist = np.hypot(diff[..., 0], diff[..., 1])
    iu = np.triu_indices(len(C), 1)
    return rmax, float(dist[iu].min())


def verify_packing(w: PackingWitness, tol: float = DEFAULT_TOL) -> bool:
    if tol <= 0:
        raise ValueError("tol must be positive")
    rmax, dmin = packing_margins(w)
    return rmax <= 3 + tol and dmin >= 2 - tol and w.n_disks <= MAX_DISKS


@dataclass(frozen=True)
class EdgeAudit:
    edge: tuple
    kappa: int
    in_k_gabriel: bool
    inequalities: InequalityReport
    witness: PackingWitness
    packing_ok: bool
    float_kappa: int  # normalized points within the float unit disk
    near_boundary: int  # of which this many are within 1e-9 of the circle

    @property
    def passed(self) -> bool:
        return self.in_k_gabriel and self.inequalities.all_hold and self.packing_ok


@dataclass(frozen=True)
class TheoremAudit:
    mode: str
    k: int
    tol: float
    cycle: HamCycle
    edges: tuple

    @property
    def max_kappa(self) -> int:
        return max((e.kappa for e in self.edges), default=0)

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.edges)

    def failures(self):
        return [e for e in self.edges if not e.passed]


def audit_edge(s: PointSet, c: HamCycle, edge, k: int = 10, tol: float = DEFAULT_TOL,
               graph=None) -> EdgeAudit:
    kap = kappa(s, edge)
    if graph is None:
        graph = graphs.build_k_gabriel(s, k)
    report = check_inequalities(s, c, edge)
    witness = build_packing_witness(s, c, edge)
    x, y = edge
    F = witness.frame
    r2 = F[:, 0] ** 2 + F[:, 1] ** 2
    mask = np.ones(len(F), dtype=bool)
    mask[[x, y]] = False
    float_kappa = int(np.sum(r2[mask] <= 1.0))
    near = int(np.sum(np.abs(r2[mask] - 1.0) <= 1e-9))
    return EdgeAudit(
        edge=tuple(edge),
        kappa=kap,
        in_k_gabriel=tuple(edge) in graph,
        inequalities=report,
        witness=witness,
        packing_ok=verify_packing(witness, tol),
        float_kappa=float_kappa,
        near_boundary=near,
    )


def audit_cycle(s: PointSet, c: HamCycle, mode: str = "given", k: int = 10,
                tol: float = DEFAULT_TOL) -> TheoremAudit:
    graph = graphs.build_k_gabriel(s, k)
    audits = tuple(audit_edge(s, c, e, k, tol, graph) for e in c.edges())
    return TheoremAudit(mode, k, tol, c, audits)


def verify_theorem(s: PointSet, mode: str = "exact", seed: int = 0, k: int = 10,
                   tol: float = DEFAULT_TOL) -> TheoremAudit:
    """Find a minimal (``exact``) or locally minimal (``local``) cycle and audit every edge.

    In local mode a failed inequality means the local search stopped at a
    cycle that still has an improving exchange, i.e. a solver bug.
    """
    if mode == "exact":
        cycle = exact_minimal(s).cycle
    elif mode == "local":
        cycle = local_search_minimal(s, seed)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return audit_cycle(s, cycle, mode, k, tol)
