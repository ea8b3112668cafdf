"""Lower-bound experiments: frozen constructions, random search and the feasibility searcher."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

import numpy as np
from scipy.optimize import minimize

from .cycles import HamCycle, exact_minimal, extract_traversal
from .errors import SizeCapError
from .feasibility import FeasibilitySystem
from .geometry import Point, PointSet, normalize_edge_exact
from .verify import kappa as edge_kappa, verify_theorem

GENERATORS = ("uniform", "gaussian", "clustered")
GRID = 2**20
SEARCH_MIN_N, SEARCH_MAX_N = 6, 11
UNIQUE_CAP = 16
KAPPA6_CYCLE = (0, 1, 2, 8, 3, 9, 4, 10, 5, 11, 6, 12, 7)


# -- feasibility search -----------------------------------------------------------

@dataclass(frozen=True)
class FeasibilityResult:
    assignment: np.ndarray
    max_residual: float
    start: str  # "structured" or "random-<i>"
    restarts_run: int


def structured_start(kappa: int) -> np.ndarray:
    """u_i along a shallow arc inside the unit disk, s_i/t_i fanned at radius 3 above it.

    Consecutive fan points are shared as t_i and s_(i+1) targets, so each u_i
    sits between its own predecessor and successor.
    """
    sys = FeasibilitySystem(kappa)
    ux = np.linspace(0.8, -0.8, kappa)
    u = np.stack([ux, 0.3 - 0.1 * ux**2], axis=1)
    ang = np.linspace(0.1 * np.pi, 0.9 * np.pi, kappa + 1)[::-1]
    fan = 3.0 * np.stack([np.cos(ang), np.sin(ang)], axis=1)
    return sys.assignment(u, fan[:-1], fan[1:])


def random_start(kappa: int, rng: np.random.Generator) -> np.ndarray:
    sys = FeasibilitySystem(kappa)
    r = np.sqrt(rng.uniform(0, 1, kappa))
    a = rng.uniform(0, 2 * np.pi, kappa)
    u = np.stack([r * np.cos(a), r * np.sin(a)], axis=1)
    rad = rng.uniform(2, 4, 2 * kappa)
    ang = rng.uniform(0, 2 * np.pi, 2 * kappa)
    st = np.stack([rad * np.cos(ang), rad * np.sin(ang)], axis=1)
    return sys.assignment(u, st[:kappa], st[kappa:])


def _descend(sys: FeasibilitySystem, v0: np.ndarray, margin: float) -> np.ndarray:
    res = minimize(sys.penalty, v0, args=(margin,), jac=True, method="L-BFGS-B",
                   options={"maxiter": 5000, "ftol": 0.0, "gtol": 1e-14})
    return res.x


def search_feasible(kappa: int, restarts: int = 64, seed: int = 0, margin: float = 1e-3) -> FeasibilityResult:
    """Best-effort search for a point satisfying every constraint of the system.

    Minimizes the squared violations of ``g >= margin`` (the small margin pushes
    iterates strictly inside so the unshifted residuals reach exactly zero),
    first from the structured start and then from ``restarts`` random starts.
    Stops at the first assignment with zero residual. A positive result is not
    a proof of infeasibility.
    """
    sys = FeasibilitySystem(kappa)
    rng = np.random.default_rng(seed)
    best = None
    starts = [("structured", lambda: structured_start(kappa))]
    starts += [(f"random-{i}", lambda: random_start(kappa, rng)) for i in range(restarts)]
    for run, (label, make) in enumerate(starts):
        v = _descend(sys, make(), margin)
        worst = float(sys.residuals(v).max())
        if best is None or worst < best.max_residual:
            best = FeasibilityResult(v, worst, label, run + 1)
        if worst == 0.0:
            break
    return FeasibilityResult(best.assignment, best.max_residual, best.start, run + 1)


def assignment_from_edge(s: PointSet, c: HamCycle, edge, exact: bool = False) -> np.ndarray:
    """The u/s/t coordinates an audited edge induces, in the |xy| = 2 frame."""
    rec = extract_traversal(c, s, edge)
    frame = normalize_edge_exact(s, *rec.edge)
    if not rec.kappa:
        return np.zeros(0, dtype=object if exact else float)
    pick = (lambda v: frame[v]) if exact else (lambda v: tuple(float(z) for z in frame[v]))
    blocks = [[pick(u), pick(a), pick(b)] for u, a, b in zip(rec.U, rec.S_pts, rec.T_pts)]
    return np.array(blocks, dtype=object if exact else float).reshape(-1)


# -- frozen constructions -----------------------------------------------------------

def _load_frozen(name: str) -> PointSet:
    from .io import parse_pointset

    text = resources.files("proxigraph").joinpath("data", name).read_text(encoding="utf-8")
    return parse_pointset(text)[0]


def build_non_hamiltonian_1gg() -> PointSet:
    """Five points whose 1-Gabriel graph has no Hamiltonian cycle."""
    return _load_frozen("nonham_1gg.pts")


def unique_kappa6_configuration() -> tuple[PointSet, HamCycle, tuple]:
    """13 points whose unique minimal cycle uses an edge with six points in its disk."""
    return _load_frozen("unique_kappa6.pts"), HamCycle.from_order(KAPPA6_CYCLE), (0, 1)


def verify_unique_high_kappa(s: PointSet, c: HamCycle, cap: int = UNIQUE_CAP) -> bool:
    """True iff ``c`` is the unique minimal cycle of ``s`` and has an edge with kappa >= 6."""
    if s.n > cap:
        raise SizeCapError(f"uniqueness check is limited to n <= {cap} points, got {s.n}")
    if c.n != s.n:
        return False
    res = exact_minimal(s, cap=cap)
    if res.ties != 1 or res.cycle != c:
        return False
    return max(edge_kappa(s, e) for e in c.edges()) >= 6


# -- random search ------------------------------------------------------------------

def _snap(xy: np.ndarray) -> list:
    return [Point(Fraction(int(round(x * GRID)), GRID), Fraction(int(round(y * GRID)), GRID)) for x, y in xy]


def generate(n: int, generator: str, rng: np.random.Generator) -> PointSet:
    """n distinct points on the 2^-20 grid."""
    if generator not in GENERATORS:
        raise ValueError(f"unknown generator {generator!r}; expected one of {GENERATORS}")
    if generator == "clustered":
        centers = rng.uniform(0, 1, (3, 2))
    pts, seen = [], set()
    while len(pts) < n:
        if generator == "uniform":
            xy = rng.uniform(0, 1, (1, 2))
        elif generator == "gaussian":
            xy = rng.normal(0, 1, (1, 2))
        else:
            xy = centers[rng.integers(3)] + rng.normal(0, 0.1, (1, 2))
        p = _snap(xy)[0]
        if p not in seen:
            seen.add(p)
            pts.append(p)
    return PointSet(pts)


@dataclass(frozen=True)
class Witness:
    points: PointSet
    cycle: HamCycle
    edge: tuple
    kappa: int
    seed: int
    generator: str
    trial: int


@dataclass(frozen=True)
class SearchReport:
    best: Witness
    kappas: tuple  # max edge kappa per trial
    failed_trials: tuple  # trials whose audit did not pass


def replay(w: Witness) -> int:
    """Re-audit the stored points from scratch; returns the largest edge kappa."""
    return verify_theorem(w.points, "exact").max_kappa


def worker_count() -> int:
    raw = os.environ.get("PROXIGRAPH_THREADS")
    if raw:
        return max(1, int(raw))
    return os.cpu_count() or 1


def _trial(n, generator, seed, trial):
    rng = np.random.default_rng([seed, trial])
    s = generate(n, generator, rng)
    audit = verify_theorem(s, "exact")
    top = max(audit.edges, key=lambda e: e.kappa)
    return Witness(s, audit.cycle, top.edge, top.kappa, seed, generator, trial), audit.passed


def random_search(trials: int, n: int, generator: str = "uniform", seed: int = 0,
                  threads: int | None = None) -> SearchReport:
    """Audit ``trials`` random sets; keep the edge with the largest kappa.

    Trial t draws from ``default_rng([seed, t])``, so results do not depend on
    the worker count or scheduling. Ties go to the earliest trial.
    """
    if not SEARCH_MIN_N <= n <= SEARCH_MAX_N:
        raise SizeCapError(f"random search needs {SEARCH_MIN_N} <= n <= {SEARCH_MAX_N}, got {n}")
    if trials < 1:
        raise ValueError("trials must be positive")
    if generator not in GENERATORS:
        raise ValueError(f"unknown generator {generator!r}; expected one of {GENERATORS}")
    workers = threads or worker_count()
    args = [(n, generator, seed, t) for t in range(trials)]
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(lambda a: _trial(*a), args))
    else:
        results = [_trial(*a) for a in args]
    best = None
    for w, _ in results:
        if best is None or w.kappa > best.kappa:
            best = w
    return SearchReport(
        best,
        tuple(w.kappa for w, _ in results),
        tuple(w.trial for w, ok in results if not ok),
    )
