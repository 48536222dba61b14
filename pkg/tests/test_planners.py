"""Tour planners: conservation, phase accounting, and timing identities."""

import math

import numpy as np
import pytest

from ditsp.etsp import PointSet
from ditsp.geometry import BeadGrid, BeadSpec, ell_for_n
from ditsp.planners import (Segment, Tour, greedy_cleanup, rec_bta, rec_cca,
                            stop_go_stop)
from ditsp.rng import substream
from ditsp.vehicle import VehicleParams, stop_go_time


PARAMS = VehicleParams(r_vel=0.1, r_ctr=1.0)


def test_stop_go_stop_square_corners():
    # 4 corners of the unit square at r_vel = r_ctr = 1: each unit leg takes
    # 2 s (bang-bang), so the closed tour takes exactly 8
    pts = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
    tour = stop_go_stop(PointSet(points=pts), VehicleParams(1.0, 1.0))
    assert tour.total_time == pytest.approx(8.0, rel=1e-12)
    assert tour.total_length == pytest.approx(4.0, rel=1e-12)


def test_stop_go_stop_durations_match_edges():
    rng = substream(13, 0)
    ps = PointSet(points=rng.uniform(size=(40, 2)))
    tour = stop_go_stop(ps, PARAMS, seed=2)
    for seg in tour.segments:
        assert seg.kind == "stop_go_leg"
        assert seg.duration == pytest.approx(
            stop_go_time(seg.length, PARAMS), rel=1e-12)


def test_greedy_cleanup_visits_all_nearest_first():
    pts = np.array([[1.0, 0.0], [0.2, 0.0], [3.0, 0.0]])
    segs, order = greedy_cleanup(pts, np.zeros(2), PARAMS)
    assert order.tolist() == [1, 0, 2]
    assert len(segs) == 3
    assert segs[0].length == pytest.approx(0.2)
    empty_segs, empty_order = greedy_cleanup(np.empty((0, 2)), np.zeros(2), PARAMS)
    assert empty_segs == [] and len(empty_order) == 0


def _uniform_pset(n, seed, d=2):
    rng = substream(13, seed, d)
    return PointSet(points=rng.uniform(size=(n, d)))


def test_rec_bta_serves_everything_once():
    ps = _uniform_pset(2000, 1)
    tour, reports = rec_bta(ps, PARAMS)
    assert sorted(tour.visit_order.tolist()) == list(range(2000))
    assert sum(r.served for r in reports) + reports[-1].leftover_after == 2000
    assert reports[-1].leftover_after >= 0


def test_rec_bta_phase_count_and_meta_sizes():
    n = 1024
    ps = _uniform_pset(n, 2)
    _, reports = rec_bta(ps, PARAMS)
    assert len(reports) == int(math.ceil(math.log2(n))) + 1
    assert [r.meta_size for r in reports] == [2**i for i in range(len(reports))]


def test_rec_bta_leftover_nonincreasing():
    ps = _uniform_pset(5000, 3)
    _, reports = rec_bta(ps, PARAMS)
    lefts = [r.leftover_after for r in reports]
    assert all(b <= a for a, b in zip(lefts, lefts[1:]))


def test_rec_bta_serves_at_most_one_per_meta_cell_per_phase():
    n = 3000
    ps = _uniform_pset(n, 4)
    rho = PARAMS.turn_radius
    ell, _ = ell_for_n(1.0, 1.0, rho, n)
    grid = BeadGrid(1.0, 1.0, BeadSpec.create(rho, ell))
    rows, cols = grid.cell_index(ps.points)
    tour, reports = rec_bta(ps, PARAMS)
    served = np.ones(n, dtype=bool)
    pos = 0
    for r in reports:
        batch = tour.visit_order[pos:pos + r.served]
        pos += r.served
        mr, mc = grid.meta_index(r.phase, rows[batch], cols[batch])
        keys = set(zip(mr.tolist(), mc.tolist()))
        assert len(keys) == r.served  # one served target per meta-cell


def test_rec_bta_oldest_first_within_cell():
    # two points in the same cell: the lower index must be served earlier
    rho = PARAMS.turn_radius
    ell, _ = ell_for_n(1.0, 1.0, rho, 2)
    pts = np.array([[0.5, 0.5], [0.5 + ell * 1e-3, 0.5]])
    tour, _ = rec_bta(PointSet(points=pts), PARAMS)
    assert tour.visit_order.tolist().index(0) < tour.visit_order.tolist().index(1)


def test_rec_bta_length_accounting_consistent():
    ps = _uniform_pset(1000, 5)
    tour, reports = rec_bta(ps, PARAMS)
    phase_len = sum(r.length for r in reports)
    cleanup_len = sum(s.length for s in tour.segments if s.kind == "stop_go_leg")
    assert tour.total_length == pytest.approx(phase_len + cleanup_len, rel=1e-9)
    sweep_time = phase_len / PARAMS.r_vel
    cleanup_time = sum(s.duration for s in tour.segments
                       if s.kind == "stop_go_leg")
    assert tour.total_time == pytest.approx(sweep_time + cleanup_time, rel=1e-9)


def test_rec_bta_even_phase_le_twice_next_odd():
    # the even-phase sweep is at most twice the following odd-phase sweep
    ps = _uniform_pset(10**4, 6)
    _, reports = rec_bta(ps, PARAMS)
    lengths = [r.length for r in reports]
    for j in range(1, len(lengths) - 1, 2):  # phases 2, 4, ... (0-based odd)
        assert lengths[j] <= 2.0 * lengths[j + 1] * (1 + 1e-12)


def test_rec_bta_rejects_3d():
    with pytest.raises(ValueError):
        rec_bta(_uniform_pset(10, 7, d=3), PARAMS)


PARAMS3 = VehicleParams(r_vel=0.5, r_ctr=1.0)


def test_rec_cca_serves_everything_once():
    ps = _uniform_pset(2000, 8, d=3)
    tour, reports = rec_cca(ps, PARAMS3)
    assert sorted(tour.visit_order.tolist()) == list(range(2000))
    assert sum(r.served for r in reports) + reports[-1].leftover_after == 2000


def test_rec_cca_phase_structure():
    n = 2000
    ps = _uniform_pset(n, 9, d=3)
    _, reports = rec_cca(ps, PARAMS3)
    expect_phases = int(math.ceil((math.log2(n) + 7.0) / 5.0))
    assert len(reports) == 5 * expect_phases
    assert [r.subphase for r in reports] == [1, 2, 3, 4, 5] * expect_phases
    assert [r.meta_size for r in reports[:5]] == [1, 2, 4, 8, 16]


def test_rec_cca_length_accounting_consistent():
    ps = _uniform_pset(500, 10, d=3)
    tour, reports = rec_cca(ps, PARAMS3)
    phase_len = sum(r.length for r in reports)
    cleanup_len = sum(s.length for s in tour.segments if s.kind == "stop_go_leg")
    assert tour.total_length == pytest.approx(phase_len + cleanup_len, rel=1e-9)


def test_rec_cca_rejects_2d():
    with pytest.raises(ValueError):
        rec_cca(_uniform_pset(10, 11, d=2), PARAMS3)


def test_tour_totals_are_segment_sums():
    segs = [Segment("pass", 2.0, 4.0), Segment("u_turn", 1.0, 2.0)]
    t = Tour(segments=segs, visit_order=np.array([0]))
    assert t.total_length == 3.0
    assert t.total_time == 6.0
