"""Hot loops on integer frames.

All kernels take integer data (coordinates from ``PointSet.int_coords`` or
the scaled squared-distance matrix ``PointSet.sq_matrix``) and never round.
Each public function dispatches to the compiled loop when possible and to a
pure numpy / Python implementation otherwise; both paths must agree exactly.
"""
import sys

import numpy as np

from proxigraph import _accel

njit = _accel.jit_for(__name__)


def _pick(kernel, arr):
    """Compiled kernel for int64 data, uncompiled twin otherwise."""
    if _accel.use_jit(arr):
        return kernel
    twin = _accel.python_twin(sys.modules[__name__])
    return getattr(twin, kernel.__name__)


# -- proximity counts -------------------------------------------------------

@njit
def _gabriel_counts_loop(P):
    n = P.shape[0]
    out = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(i + 1, n):
            c = 0
            for q in range(n):
                if q == i or q == j:
                    continue
                d = (P[i, 0] - P[q, 0]) * (P[j, 0] - P[q, 0]) + (P[i, 1] - P[q, 1]) * (P[j, 1] - P[q, 1])
                if d <= 0:
                    c += 1
            out[i, j] = c
            out[j, i] = c
    return out


def _gabriel_counts_numpy(P):
    n = P.shape[0]
    out = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        a = P[i] - P  # (n_q, 2): p_i - q
        # dots[j, q] = (p_i - q) . (p_j - q)
        b = P[:, None, :] - P[None, :, :]
        dots = (a[None, :, :] * b).sum(axis=2)
        inside = dots <= 0
        inside[:, i] = False
        inside[np.arange(n), np.arange(n)] = False
        out[i] = inside.sum(axis=1)
    out[np.arange(n), np.arange(n)] = 0
    return out


def gabriel_counts(P):
    """Matrix of closed diameter-disk counts, other points only."""
    if _accel.use_jit(P):
        return _gabriel_counts_loop(P)
    return _gabriel_counts_numpy(P)


@njit
def _lune_counts_loop(D):
    n = D.shape[0]
    out = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(i + 1, n):
            r = D[i, j]
            c = 0
            for q in range(n):
                if D[i, q] < r and D[j, q] < r:
                    c += 1
            out[i, j] = c
            out[j, i] = c
    return out


def _lune_counts_numpy(D):
    n = D.shape[0]
    out = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        r = D[i][:, None]  # r[j] = D[i, j]
        inside = (D[i][None, :] < r) & (D < r)
        out[i] = inside.sum(axis=1)
    out[np.arange(n), np.arange(n)] = 0
    return out


def lune_counts(D):
    """Matrix of open-lune counts from a squared-distance matrix."""
    if _accel.use_jit(D):
        return _lune_counts_loop(D)
    return _lune_counts_numpy(D)


# -- planarity ------------------------------------------------------------------

@njit
def _orient(P, a, b, c):
    v = (P[b, 0] - P[a, 0]) * (P[c, 1] - P[a, 1]) - (P[b, 1] - P[a, 1]) * (P[c, 0] - P[a, 0])
    if v > 0:
        return 1
    if v < 0:
        return -1
    return 0


@njit
def _on_segment(P, a, b, c):
    # c collinear with ab; is it within the bounding box of ab?
    return (min(P[a, 0], P[b, 0]) <= P[c, 0] <= max(P[a, 0], P[b, 0])
            and min(P[a, 1], P[b, 1]) <= P[c, 1] <= max(P[a, 1], P[b, 1]))


@njit
def _segments_meet(P, a, b, c, d):
    o1 = _orient(P, a, b, c)
    o2 = _orient(P, a, b, d)
    o3 = _orient(P, c, d, a)
    o4 = _orient(P, c, d, b)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    if o1 == 0 and _on_segment(P, a, b, c):
        return True
    if o2 == 0 and _on_segment(P, a, b, d):
        return True
    if o3 == 0 and _on_segment(P, c, d, a):
        return True
    if o4 == 0 and _on_segment(P, c, d, b):
        return True
    return False


@njit
def _first_crossing_loop(P, E):
    m = E.shape[0]
    for e in range(m):
        a, b = E[e, 0], E[e, 1]
        for f in range(e + 1, m):
            c, d = E[f, 0], E[f, 1]
            if (a == c and b == d) or (a == d and b == c):
                return e, f
            if a == c or a == d or b == c or b == d:
                s = a if (a == c or a == d) else b
                p = b if s == a else a
                q = d if s == c else c
                # sharing an endpoint, they meet elsewhere only by overlapping
                if _orient(P, s, p, q) == 0:
                    if (P[p, 0] - P[s, 0]) * (P[q, 0] - P[s, 0]) + (P[p, 1] - P[s, 1]) * (P[q, 1] - P[s, 1]) > 0:
                        return e, f
                continue
            if _segments_meet(P, a, b, c, d):
                return e, f
    return -1, -1


def first_crossing(P, E):
    """Indices of the first pair of edges that meet outside shared endpoints.

    Returns ``(-1, -1)`` when the straight-line drawing is plane.
    """
    E = np.asarray(E, dtype=np.int64).reshape(-1, 2)
    e, f = _pick(_first_crossing_loop, P)(P, E)
    return int(e), int(f)


# -- lexicographic distance-sequence helpers ---------------------------------

@njit
def _insert_desc(arr, m, w):
    k = m
    while k > 0 and arr[k - 1] < w:
        arr[k] = arr[k - 1]
        k -= 1
    arr[k] = w


@njit
def _remove_desc(arr, m, w):
    k = 0
    while arr[k] != w:
        k += 1
    for t in range(k, m - 1):
        arr[t] = arr[t + 1]


@njit
def _cmp_prefix(part, m, best):
    for i in range(m):
        if part[i] > best[i]:
            return 1
        if part[i] < best[i]:
            return -1
    return 0


@njit
def _bb_minimal_loop(D, best_ds, have_bound):
    """Branch and bound over canonical cycles (start 0, path[1] < path[-1]).

    A partial path is cut when its sorted edge lengths already exceed the
    incumbent on a prefix: adding edges can only raise every order
    statistic, so no completion can tie or win. Ties are never cut, so the
    count of ds-minimal cycles is exact and the first minimum met in
    lexicographic path order is the one kept.
    """
    n = D.shape[0]
    path = np.zeros(n, dtype=np.int64)
    best_order = np.zeros(n, dtype=np.int64)
    cand = np.zeros(n + 1, dtype=np.int64)
    used = np.zeros(n, dtype=np.bool_)
    part = D[0, :].copy()
    found = False
    ties = 0
    nodes = 0
    used[0] = True
    depth = 1
    cand[1] = 1
    m = 0
    while depth >= 1:
        v = cand[depth]
        if v >= n:
            depth -= 1
            if depth >= 1:
                u = path[depth]
                _remove_desc(part, m, D[path[depth - 1], u])
                m -= 1
                used[u] = False
            continue
        cand[depth] = v + 1
        if used[v]:
            continue
        if depth == n - 1 and v < path[1]:
            continue
        nodes += 1
        w = D[path[depth - 1], v]
        _insert_desc(part, m, w)
        m += 1
        bounded = found or have_bound
        if bounded and _cmp_prefix(part, m, best_ds) > 0:
            _remove_desc(part, m, w)
            m -= 1
            continue
        if depth == n - 1:
            z = D[v, 0]
            _insert_desc(part, m, z)
            m += 1
            c = -1
            if bounded:
                c = _cmp_prefix(part, n, best_ds)
            if c < 0 or (c == 0 and not found):
                for t in range(n):
                    best_ds[t] = part[t]
                path[depth] = v
                for t in range(n):
                    best_order[t] = path[t]
                ties = 1
                found = True
            elif c == 0:
                ties += 1
            _remove_desc(part, m, z)
            m -= 1
            _remove_desc(part, m, w)
            m -= 1
            continue
        path[depth] = v
        used[v] = True
        depth += 1
        cand[depth] = 1
    return found, best_order, ties, nodes


def bb_minimal(D, bound=None):
    """Exact ds-minimal cycle of the complete graph with weights ``D``.

    ``bound`` is the sorted-decreasing edge sequence of any known cycle; it
    only speeds up the search. Returns ``(order, ds, ties, nodes)``.
    """
    n = D.shape[0]
    if bound is None:
        best = D[0, :].copy()
        have = False
    else:
        best = np.array(bound, dtype=D.dtype)
        have = True
    found, order, ties, nodes = _pick(_bb_minimal_loop, D)(D, best, have)
    if not found:  # pragma: no cover - a bound is always attained by its own cycle
        raise RuntimeError("bound below every cycle")
    return order, best, int(ties), int(nodes)


# -- local search ------------------------------------------------------------

@njit
def _sort3(a, b, c):
    if a < b:
        a, b = b, a
    if b < c:
        b, c = c, b
    if a < b:
        a, b = b, a
    return a, b, c


@njit
def _better2(r1, r2, a1, a2):
    # removed multiset strictly above added one in sorted-decreasing order
    if r1 < r2:
        r1, r2 = r2, r1
    if a1 < a2:
        a1, a2 = a2, a1
    if r1 != a1:
        return r1 > a1
    return r2 > a2


@njit
def _better3(r1, r2, r3, a1, a2, a3):
    r1, r2, r3 = _sort3(r1, r2, r3)
    a1, a2, a3 = _sort3(a1, a2, a3)
    if r1 != a1:
        return r1 > a1
    if r2 != a2:
        return r2 > a2
    return r3 > a3


@njit
def _try_2opt(D, t):
    n = t.shape[0]
    for i in range(n - 1):
        a = t[i]
        b = t[i + 1]
        for j in range(i + 2, n):
            if i == 0 and j == n - 1:
                continue
            c = t[j]
            d = t[(j + 1) % n]
            if _better2(D[a, b], D[c, d], D[a, c], D[b, d]):
                lo = i + 1
                hi = j
                while lo < hi:
                    tmp = t[lo]
                    t[lo] = t[hi]
                    t[hi] = tmp
                    lo += 1
                    hi -= 1
                return True
    return False


@njit
def _try_relocate(D, t):
    n = t.shape[0]
    for p in range(n):
        v = t[p]
        a = t[(p - 1) % n]
        b = t[(p + 1) % n]
        for q in range(n):
            c = t[q]
            d = t[(q + 1) % n]
            if c == v or d == v:
                continue
            if _better3(D[a, v], D[v, b], D[c, d], D[a, b], D[c, v], D[v, d]):
                rest = np.empty(n - 1, dtype=t.dtype)
                k = 0
                for r in range(n):
                    if r != p:
                        rest[k] = t[r]
                        k += 1
                k = 0
                for r in range(n - 1):
                    t[k] = rest[r]
                    k += 1
                    if rest[r] == c:
                        t[k] = v
                        k += 1
                return True
    return False


@njit
def _emit(out, k, t, lo, hi, rev):
    if rev:
        for r in range(hi, lo - 1, -1):
            out[k] = t[r]
            k += 1
    else:
        for r in range(lo, hi + 1):
            out[k] = t[r]
            k += 1
    return k


@njit
def _try_3opt(D, t):
    n = t.shape[0]
    for i in range(n - 2):
        a = t[i]
        b = t[i + 1]
        for j in range(i + 1, n - 1):
            c = t[j]
            d = t[j + 1]
            for k in range(j + 1, n):
                e = t[k]
                f = t[(k + 1) % n]
                r1 = D[a, b]
                r2 = D[c, d]
                r3 = D[e, f]
                # A = f..a, B = b..c, C = d..e; try A X Y for all 7 non-identity X, Y
                kind = 0
                if _better3(r1, r2, r3, D[a, c], D[b, d], D[e, f]):
                    kind = 1  # A B' C
                elif _better3(r1, r2, r3, D[a, b], D[c, e], D[d, f]):
                    kind = 2  # A B C'
                elif _better3(r1, r2, r3, D[a, c], D[b, e], D[d, f]):
                    kind = 3  # A B' C'
                elif _better3(r1, r2, r3, D[a, d], D[e, b], D[c, f]):
                    kind = 4  # A C B
                elif _better3(r1, r2, r3, D[a, d], D[e, c], D[b, f]):
                    kind = 5  # A C B'
                elif _better3(r1, r2, r3, D[a, e], D[d, b], D[c, f]):
                    kind = 6  # A C' B
                elif _better3(r1, r2, r3, D[a, e], D[d, c], D[b, f]):
                    kind = 7  # A C' B'
                if kind == 0:
                    continue
                out = np.empty(n, dtype=t.dtype)
                q = 0
                for r in range(k + 1, n):
                    out[q] = t[r]
                    q += 1
                for r in range(0, i + 1):
                    out[q] = t[r]
                    q += 1
                if kind == 1:
                    q = _emit(out, q, t, i + 1, j, True)
                    q = _emit(out, q, t, j + 1, k, False)
                elif kind == 2:
                    q = _emit(out, q, t, i + 1, j, False)
                    q = _emit(out, q, t, j + 1, k, True)
                elif kind == 3:
                    q = _emit(out, q, t, i + 1, j, True)
                    q = _emit(out, q, t, j + 1, k, True)
                elif kind == 4:
                    q = _emit(out, q, t, j + 1, k, False)
                    q = _emit(out, q, t, i + 1, j, False)
                elif kind == 5:
                    q = _emit(out, q, t, j + 1, k, False)
                    q = _emit(out, q, t, i + 1, j, True)
                elif kind == 6:
                    q = _emit(out, q, t, j + 1, k, True)
                    q = _emit(out, q, t, i + 1, j, False)
                else:
                    q = _emit(out, q, t, j + 1, k, True)
                    q = _emit(out, q, t, i + 1, j, True)
                for r in range(n):
                    t[r] = out[r]
                return True
    return False


@njit
def _local_search_loop(D, tour, counts):
    t = tour.copy()
    while True:
        if _try_2opt(D, t):
            counts[0] += 1
            continue
        if _try_relocate(D, t):
            counts[1] += 1
            continue
        if _try_3opt(D, t):
            counts[2] += 1
            continue
        return t


def local_search(D, tour):
    """First-improvement descent over 2-opt, relocation and 3-edge exchanges.

    Returns the final tour and the number of accepted moves of each kind.
    """
    counts = np.zeros(3, dtype=np.int64)
    t = np.asarray(tour, dtype=np.int64)
    out = _pick(_local_search_loop, D)(D, t, counts)
    return out, counts


@njit
def _nearest_neighbor_loop(D, start):
    n = D.shape[0]
    used = np.zeros(n, dtype=np.bool_)
    t = np.empty(n, dtype=np.int64)
    t[0] = start
    used[start] = True
    for k in range(1, n):
        cur = t[k - 1]
        best = -1
        for v in range(n):
            if used[v]:
                continue
            if best < 0 or D[cur, v] < D[cur, best]:
                best = v
        t[k] = best
        used[best] = True
    return t


def nearest_neighbor_tour(D, start=0):
    return _pick(_nearest_neighbor_loop, D)(D, start)


# -- Hamiltonicity --------------------------------------------------------------

@njit
def _ham_dp_loop(adj):
    n = adj.shape[0]
    full = 1 << n
    dp = np.zeros(full, dtype=np.int64)
    dp[1] = 1
    for mask in range(1, full, 2):
        ends = dp[mask]
        if ends == 0:
            continue
        for v in range(n):
            if (ends >> v) & 1:
                for w in range(n):
                    if adj[v, w] and not ((mask >> w) & 1):
                        dp[mask | (1 << w)] |= 1 << w
    order = np.zeros(n, dtype=np.int64)
    last = -1
    ends = dp[full - 1]
    for v in range(1, n):
        if (ends >> v) & 1 and adj[v, 0]:
            last = v
            break
    if last < 0:
        return False, order
    mask = full - 1
    cur = last
    for pos in range(n - 1, 0, -1):
        order[pos] = cur
        prev_mask = mask ^ (1 << cur)
        prev_ends = dp[prev_mask]
        nxt = -1
        for u in range(n):
            if (prev_ends >> u) & 1 and adj[u, cur]:
                nxt = u
                break
        mask = prev_mask
        cur = nxt
    order[0] = 0
    return True, order


@njit
def _ham_backtrack_loop(adj):
    n = adj.shape[0]
    order = np.zeros(n, dtype=np.int64)
    used = np.zeros(n, dtype=np.bool_)
    cand = np.zeros(n + 1, dtype=np.int64)
    for v in range(n):
        deg = 0
        for w in range(n):
            if adj[v, w]:
                deg += 1
        if deg < 2:
            return False, order
    used[0] = True
    depth = 1
    cand[1] = 0
    while depth >= 1:
        v = cand[depth]
        if v >= n:
            depth -= 1
            if depth >= 1:
                used[order[depth]] = False
            continue
        cand[depth] = v + 1
        if used[v] or not adj[order[depth - 1], v]:
            continue
        if depth == n - 1:
            if adj[v, 0]:
                order[depth] = v
                return True, order
            continue
        used[v] = True
        # every unvisited vertex still needs two usable neighbours
        ok = True
        for w in range(n):
            if used[w]:
                continue
            avail = 0
            for z in range(n):
                if adj[w, z] and (not used[z] or z == v or z == 0):
                    avail += 1
            if avail < 2:
                ok = False
                break
        if not ok:
            used[v] = False
            continue
        order[depth] = v
        depth += 1
        cand[depth] = 0
    return False, order


def hamiltonian_cycle(adj, method="auto"):
    """Find a Hamiltonian cycle of the graph with boolean adjacency ``adj``.

    ``method`` is ``"dp"`` (bitmask dynamic program, n <= 24),
    ``"backtrack"`` or ``"auto"`` (dp up to 20 vertices).
    """
    adj = np.ascontiguousarray(adj, dtype=np.bool_)
    n = adj.shape[0]
    if method == "auto":
        method = "dp" if n <= 20 else "backtrack"
    if method == "dp":
        if n > 24:
            raise ValueError("bitmask dynamic program limited to 24 vertices")
        kernel = _ham_dp_loop
    elif method == "backtrack":
        kernel = _ham_backtrack_loop
    else:
        raise ValueError(f"unknown method {method!r}")
    found, order = _pick(kernel, adj)(adj)
    return bool(found), (order if found else None)
