"""Tour strategies: stop-go-stop, recursive bead tiling (2D), recursive
cylinder covering (3D).

The recursive planners produce *accounted* tours: lengths are sums of the
primitive closed forms (row pass, heading-reversal u-turn, tour closing)
rather than synthesized curves.  Sweeps cover every (meta-)row intersecting
the workspace, which keeps the per-phase lengths deterministic and preserves
the even/odd phase-length relations used by the analysis.  Within any cell,
targets are always served oldest first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ditsp.etsp import PointSet, etsp_tour
from ditsp.geometry import (
    SUBPHASE_EXPONENTS,
    BeadGrid,
    BeadSpec,
    CylinderGrid,
    CylinderSpec,
    ell_for_n,
    ell_for_n_3d,
)
from ditsp.vehicle import VehicleParams, stop_go_time, u_turn_length


@dataclass(frozen=True)
class Segment:
    """One tour primitive with its length and traversal time."""

    kind: str  # pass | u_turn | cell_arc | stop_go_leg | closing
    length: float
    duration: float


@dataclass
class Tour:
    """Ordered primitive segments plus the order in which targets are served."""

    segments: list = field(default_factory=list)
    visit_order: np.ndarray = None

    @property
    def total_length(self) -> float:
        return float(sum(s.length for s in self.segments))

    @property
    def total_time(self) -> float:
        return float(sum(s.duration for s in self.segments))


@dataclass
class PhaseReport:
    """Per-phase accounting for the recursive planners."""

    phase: int
    meta_size: int
    cells_traversed: int
    served: int
    leftover_after: int
    length: float
    subphase: int | None = None


def stop_go_stop(pset: PointSet, params: VehicleParams, seed: int = 0) -> Tour:
    """Visit the heuristic ETSP order, coming to rest at every target."""
    tour = etsp_tour(pset, seed=seed)
    if pset.n == 1:
        return Tour(segments=[], visit_order=tour.order)
    segments = [
        Segment(kind="stop_go_leg", length=float(d), duration=stop_go_time(float(d), params))
        for d in tour.edge_lengths
    ]
    return Tour(segments=segments, visit_order=tour.order)


def greedy_cleanup(points: np.ndarray, start: np.ndarray, params: VehicleParams):
    """Nearest-neighbor stop-go sweep over leftover targets.

    Returns ``(segments, order)`` where order indexes into ``points``.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    m = len(points) if points.size else 0
    if m == 0:
        return [], np.array([], dtype=np.int64)
    remaining = np.ones(m, dtype=bool)
    pos = np.asarray(start, dtype=float)
    segments = []
    order = np.empty(m, dtype=np.int64)
    for k in range(m):
        idx = np.flatnonzero(remaining)
        d = np.linalg.norm(points[idx] - pos, axis=1)
        j = idx[int(np.argmin(d))]
        delta = float(np.linalg.norm(points[j] - pos))
        segments.append(Segment(kind="stop_go_leg", length=delta,
                                duration=stop_go_time(delta, params)))
        order[k] = j
        remaining[j] = False
        pos = points[j]
    return segments, order


def _serve_oldest_per_group(unserved_idx: np.ndarray, keys: np.ndarray) -> np.ndarray:
    """Indices (into the original point set) of the oldest target per group.

    ``keys`` is an (m, k) integer array of group coordinates aligned with
    ``unserved_idx``; age equals the point index (generation order).
    """
    if len(unserved_idx) == 0:
        return unserved_idx
    _, first = np.unique(keys, axis=0, return_index=True)
    # np.unique sorts lexically and keeps the first occurrence in sorted
    # order of the flattened input; to get the oldest per group, pre-sort by
    # (key, age)
    order = np.lexsort((unserved_idx,) + tuple(keys[:, i] for i in range(keys.shape[1] - 1, -1, -1)))
    sorted_keys = keys[order]
    new_group = np.ones(len(order), dtype=bool)
    new_group[1:] = np.any(sorted_keys[1:] != sorted_keys[:-1], axis=1)
    return unserved_idx[order[new_group]]


def _sweep_visit_order(served: np.ndarray, meta_row: np.ndarray, meta_col: np.ndarray,
                       row_top: int) -> np.ndarray:
    """Order served targets top-to-down, serpentine within rows."""
    rank = row_top - meta_row  # 0 for the top row
    signed_col = np.where(rank % 2 == 0, meta_col, -meta_col)
    order = np.lexsort((served, signed_col, rank))
    return served[order]


def rec_bta(pset: PointSet, params: VehicleParams, seed: int = 0,
            W: float = 1.0, H: float = 1.0):
    """Recursive bead-tiling tour over a rectangle; returns (Tour, phase reports).

    The vehicle cruises at the speed cap during the recursive sweeps (turn
    radius ``r_vel**2/r_ctr``) and uses stop-go legs for the final greedy
    cleanup.  Runs ``ceil(log2 n) + 1`` recursive phases.
    """
    if pset.d != 2:
        raise ValueError("rec_bta requires 2D points")
    n = pset.n
    s = params.r_vel
    rho = s**2 / params.r_ctr
    ell, _ = ell_for_n(W, H, rho, n)
    spec = BeadSpec.create(rho, ell)
    grid = BeadGrid(W, H, spec)
    rows, cols = grid.cell_index(pset.points)

    n_phases = int(math.ceil(math.log2(n))) + 1 if n > 1 else 1
    unserved = np.ones(n, dtype=bool)
    segments = []
    reports = []
    visit_chunks = []
    uturn = u_turn_length(rho)

    for phase in range(1, n_phases + 1):
        vr = (phase - 1) // 2
        vc = phase // 2
        idx = np.flatnonzero(unserved)
        mr = rows[idx] >> vr
        mc = cols[idx] >> vc
        served = _serve_oldest_per_group(idx, np.column_stack([mr, mc]))
        unserved[served] = False
        visit_chunks.append(_sweep_visit_order(
            served, rows[served] >> vr, cols[served] >> vc, grid.row_max >> vr))

        meta_width = (1 << vc) * ell
        pitch = (1 << vr) * spec.w / 2.0
        n_meta_rows = grid.meta_row_count(phase)
        pass_len = W + 2.0 * meta_width
        ut_len = uturn + pitch
        close_len = W + H + 2.0 * math.pi * rho + 2.0 * meta_width
        seg_pass = Segment("pass", pass_len, pass_len / s)
        seg_ut = Segment("u_turn", ut_len, ut_len / s)
        segments.extend([seg_pass, seg_ut] * n_meta_rows)
        segments.append(Segment("closing", close_len, close_len / s))
        lo, hi = grid.col_range(0)
        n_meta_cols = (hi >> vc) - (lo >> vc) + 1
        length = n_meta_rows * (pass_len + ut_len) + close_len
        reports.append(PhaseReport(
            phase=phase, meta_size=1 << (phase - 1),
            cells_traversed=n_meta_rows * n_meta_cols,
            served=len(served), leftover_after=int(unserved.sum()), length=length))

    leftover_idx = np.flatnonzero(unserved)
    clean_segs, clean_order = greedy_cleanup(
        pset.points[leftover_idx], np.zeros(2), params)
    segments.extend(clean_segs)
    visit_chunks.append(leftover_idx[clean_order])
    visit_order = np.concatenate(visit_chunks) if visit_chunks else np.array([], dtype=np.int64)
    return Tour(segments=segments, visit_order=visit_order), reports


def rec_cca(pset: PointSet, params: VehicleParams, seed: int = 0,
            W: float = 1.0, H: float = 1.0, D: float = 1.0):
    """Recursive cylinder-covering tour over a box; returns (Tour, phase reports).

    Each phase runs five sub-phases over meta-cylinders of 1, 2, 4, 8 and 16
    cells; between phases the cell is enlarged to twice its length (about 32
    times its volume).  Runs ``ceil((log2 n + 7) / 5)`` phases, then a greedy
    stop-go cleanup.
    """
    if pset.d != 3:
        raise ValueError("rec_cca requires 3D points")
    n = pset.n
    s = params.r_vel
    rho = s**2 / params.r_ctr
    ell0, _ = ell_for_n_3d(W, H, D, rho, n)
    n_phases = max(1, int(math.ceil((math.log2(n) + 7.0) / 5.0))) if n > 1 else 1
    unserved = np.ones(n, dtype=bool)
    segments = []
    reports = []
    visit_chunks = []
    uturn = u_turn_length(rho)
    global_sub = 0

    for phase in range(1, n_phases + 1):
        ell_p = min(2.0 ** (phase - 1) * ell0, 4.0 * rho)
        spec = CylinderSpec.create(rho, ell_p)
        grid = CylinderGrid(W, H, D, spec)
        idx_phase = np.flatnonzero(unserved)
        lay, row, col = grid.cell_index(pset.points[idx_phase])
        w = spec.w

        for sub in range(1, 6):
            a, b, c = SUBPHASE_EXPONENTS[sub - 1]
            still = unserved[idx_phase]
            idx = idx_phase[still]
            keys = np.column_stack([lay[still] >> c, row[still] >> b, col[still] >> a])
            served = _serve_oldest_per_group(idx, keys)
            unserved[served] = False
            # layer-major, then rows top-to-down within layer
            sel = np.isin(idx, served, assume_unique=True)
            visit_chunks.append(_sweep_visit_order(
                served, row[still][sel] >> b, col[still][sel] >> a, grid.row_max >> b))

            # only meta-rows that still hold unserved targets are swept;
            # empty cylinders need no pass
            if len(keys):
                occ_pairs = np.unique(keys[:, :2], axis=0)
            else:
                occ_pairs = np.empty((0, 2), dtype=np.int64)
            n_occ_rows = len(occ_pairs)
            n_occ_layers = len(np.unique(occ_pairs[:, 0])) if n_occ_rows else 0

            ell_m = (1 << a) * ell_p
            row_len = 2.0 * (W + 2.0 * ell_m) + uturn + ell_m / 2.0
            ut_row = uturn + (1 << b) * w / 2.0
            ut_layer = uturn + (1 << c) * w / 4.0
            close_len = W + H + D + 2.0 * math.pi * rho + 2.0 * ell_m
            length = (n_occ_rows * (row_len + ut_row)
                      + n_occ_layers * ut_layer + close_len)
            seg_row = Segment("pass", row_len, row_len / s)
            seg_ut = Segment("u_turn", ut_row, ut_row / s)
            seg_lt = Segment("u_turn", ut_layer, ut_layer / s)
            segments.extend([seg_row, seg_ut] * n_occ_rows)
            segments.extend([seg_lt] * n_occ_layers)
            segments.append(Segment("closing", close_len, close_len / s))
            global_sub += 1
            n_meta_cols = (grid.n_cols - 1 >> a) + 1
            reports.append(PhaseReport(
                phase=phase, meta_size=1 << (a + b + c),
                cells_traversed=n_occ_rows * n_meta_cols,
                served=len(served), leftover_after=int(unserved.sum()),
                length=length, subphase=sub))

    leftover_idx = np.flatnonzero(unserved)
    clean_segs, clean_order = greedy_cleanup(
        pset.points[leftover_idx], np.zeros(3), params)
    segments.extend(clean_segs)
    visit_chunks.append(leftover_idx[clean_order])
    visit_order = np.concatenate(visit_chunks) if visit_chunks else np.array([], dtype=np.int64)
    return Tour(segments=segments, visit_order=visit_order), reports
