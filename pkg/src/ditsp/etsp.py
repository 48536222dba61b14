"""Euclidean TSP tour ordering (nearest neighbor + 2-opt) and edge diagnostics."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from ditsp.rng import substream

# above this size, 2-opt candidate moves come from k-nearest-neighbor lists
# instead of the full O(n^2) neighborhood
_FULL_2OPT_LIMIT = 1200
_KNN = 8


@dataclass
class PointSet:
    """Point collection in R^d, d in {2, 3}."""

    points: np.ndarray

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=float)
        if self.points.ndim != 2 or self.points.shape[1] not in (2, 3):
            raise ValueError("points must be an (n, d) array with d in {2, 3}")
        if len(self.points) < 1:
            raise ValueError("point set must be nonempty")

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def d(self) -> int:
        return self.points.shape[1]


@dataclass
class TourOrder:
    """Closed tour: permutation of point indices plus per-edge lengths."""

    order: np.ndarray
    edge_lengths: np.ndarray = field(default=None)

    @property
    def length(self) -> float:
        return float(self.edge_lengths.sum())


def _edge_lengths(points: np.ndarray, order: np.ndarray) -> np.ndarray:
    nxt = np.roll(order, -1)
    return np.linalg.norm(points[order] - points[nxt], axis=1)


def _nearest_neighbor_order(points: np.ndarray, start: int) -> np.ndarray:
    n = len(points)
    if n <= 2:
        return np.arange(n)
    tree = cKDTree(points)
    visited = np.zeros(n, dtype=bool)
    order = np.empty(n, dtype=np.int64)
    order[0] = start
    visited[start] = True
    current = start
    k = min(n, 16)
    for step in range(1, n):
        found = -1
        kk = k
        while found < 0:
            _, idx = tree.query(points[current], k=kk)
            for j in np.atleast_1d(idx):
                if j < n and not visited[j]:
                    found = j
                    break
            if found < 0:
                if kk >= n:
                    found = int(np.flatnonzero(~visited)[0])
                    break
                kk = min(n, kk * 4)
        order[step] = found
        visited[found] = True
        current = found
    return order


def _two_opt(points: np.ndarray, order: np.ndarray, max_moves: int) -> np.ndarray:
    """First-improvement 2-opt with don't-look bits; reverses the shorter arc.

    Candidate cities are scanned in increasing distance from the anchor city
    and the scan stops once the candidate edge is no shorter than the removed
    one; checking both tour directions per anchor makes this exhaustive, so a
    fixed point (with full candidate lists) is a true 2-opt local optimum.
    """
    n = len(order)
    if n < 4:
        return order
    tour = order.copy()
    pos = np.empty(n, dtype=np.int64)
    pos[tour] = np.arange(n)

    dist_all = None
    if n <= _FULL_2OPT_LIMIT:
        dist_all = np.linalg.norm(points[:, None, :] - points[None, :, :], axis=2)
        cand = [np.argsort(dist_all[i])[1:] for i in range(n)]
    else:
        tree = cKDTree(points)
        _, nbrs = tree.query(points, k=min(n, _KNN + 1))
        cand = [row[1:] for row in nbrs]

    def dist(u, v):
        if dist_all is not None:
            return dist_all[u, v]
        return float(np.linalg.norm(points[u] - points[v]))

    dont_look = np.zeros(n, dtype=bool)
    moves = 0
    queue = list(range(n))
    while queue and moves < max_moves:
        a = queue.pop()
        if dont_look[a]:
            continue
        improved = False
        for side in (0, 1):
            ia = pos[a]
            ib = (ia + 1) % n if side == 0 else (ia - 1) % n
            b = tour[ib]
            d_ab = dist(a, b)
            for c in cand[a]:
                if c == b or c == a:
                    continue
                d_ac = dist(a, c)
                if d_ac >= d_ab:
                    break
                ic = pos[c]
                idd = (ic + 1) % n if side == 0 else (ic - 1) % n
                d = tour[idd]
                if d == a:
                    continue
                delta = d_ac + dist(b, d) - d_ab - dist(c, d)
                if delta < -1e-12:
                    if side == 0:
                        i, j = (ia + 1) % n, ic
                    else:
                        i, j = ia, idd
                    _reverse_arc(tour, pos, i, j)
                    moves += 1
                    improved = True
                    for t in (int(a), int(b), int(c), int(d)):
                        if dont_look[t]:
                            dont_look[t] = False
                        queue.append(t)
                    break
            if improved:
                break
        if improved:
            queue.append(a)
        else:
            dont_look[a] = True
            if not queue:
                pending = np.flatnonzero(~dont_look)
                queue = [int(t) for t in pending]
    return tour


def _reverse_arc(tour: np.ndarray, pos: np.ndarray, i: int, j: int):
    """Reverse tour positions i..j (cyclic), choosing the shorter arc."""
    n = len(tour)
    inner = (j - i) % n + 1
    if inner > n - inner:
        # reverse the complementary arc instead; the cycle is equivalent
        i, j = (j + 1) % n, (i - 1) % n
        inner = (j - i) % n + 1
    idx = (np.arange(inner) + i) % n
    tour[idx] = tour[idx[::-1]]
    pos[tour[idx]] = idx


def etsp_tour(pset: PointSet, seed: int = 0) -> TourOrder:
    """Heuristic closed tour: nearest-neighbor construction plus 2-opt cleanup.

    Deterministic given ``seed`` (which selects the construction start point).
    The 2-opt pass runs first-improvement until a local optimum or until
    ``50 * n`` moves.
    """
    points = pset.points
    n = pset.n
    rng = substream(seed, 0)
    start = int(rng.integers(n))
    order = _nearest_neighbor_order(points, start)
    order = _two_opt(points, order, max_moves=50 * n)
    return TourOrder(order=order, edge_lengths=_edge_lengths(points, order))


def long_edge_count(tour: TourOrder, eta: float) -> int:
    """Number of tour edges strictly longer than ``eta``."""
    if eta <= 0:
        raise ValueError("eta must be positive")
    return int(np.count_nonzero(tour.edge_lengths > eta))


def worst_case_grid(n: int, d: int, W: float, H: float, D: float | None = None) -> PointSet:
    """Regular grid point set whose pairwise spacing scales like n**(-1/d).

    Uses ``k = ceil(n**(1/d))`` cells per side with points at cell centers
    (pitch = side/k), clipped to the first ``n`` points.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    sides = [W, H] if d == 2 else [W, H, D]
    if any(s is None or s <= 0 for s in sides):
        raise ValueError("workspace dimensions must be positive")
    k = int(math_ceil_root(n, d))
    axes = [(np.arange(k) + 0.5) * (s / k) for s in sides]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.column_stack([m.ravel() for m in mesh])[:n]
    return PointSet(points=pts)


def math_ceil_root(n: int, d: int) -> int:
    k = int(round(n ** (1.0 / d)))
    while k**d < n:
        k += 1
    while (k - 1) ** d >= n:
        k -= 1
    return k


def held_karp_length(points: np.ndarray) -> float:
    """Exact optimal closed-tour length by dynamic programming (n <= 12)."""
    n = len(points)
    if n == 1:
        return 0.0
    if n > 12:
        raise ValueError("exact solver limited to n <= 12")
    dist = np.linalg.norm(points[:, None, :] - points[None, :, :], axis=2)
    full = 1 << (n - 1)
    dp = np.full((full, n - 1), np.inf)
    for j in range(n - 1):
        dp[1 << j, j] = dist[n - 1, j]
    for mask in range(full):
        for j in range(n - 1):
            cur = dp[mask, j]
            if not np.isfinite(cur):
                continue
            for k in range(n - 1):
                if mask & (1 << k):
                    continue
                nm = mask | (1 << k)
                cand = cur + dist[j, k]
                if cand < dp[nm, k]:
                    dp[nm, k] = cand
    best = np.inf
    for j in range(n - 1):
        best = min(best, dp[full - 1, j] + dist[j, n - 1])
    return float(best)
