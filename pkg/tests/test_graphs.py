from fractions import Fraction
from math import ceil

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from proxigraph import graphs
from proxigraph.errors import TooFewPointsError
from proxigraph.geometry import PointSet, in_lune
from oracles import disk_count_naive, kdg_min_count, random_points
from strategies import coord, point_sets, small_rational

MID = PointSet([(-1, 0), (1, 0), (0, 0)])
TWO = PointSet([(0, 0), (3, 1)])


def test_gabriel_witness_count_examples():
    assert graphs.gabriel_witness_count(MID, 0, 1) == 1
    assert graphs.gabriel_witness_count(PointSet([(-1, 0), (1, 0), (5, 5)]), 0, 1) == 0


def test_gabriel_count_matches_brute_force():
    rng = np.random.default_rng(11)
    for _ in range(20):
        s = random_points(rng, 8)
        C = graphs.gabriel_count_matrix(s)
        for i in range(8):
            for j in range(i + 1, 8):
                assert graphs.gabriel_witness_count(s, i, j) == C[i, j] == disk_count_naive(s, i, j)


def test_builders_small_examples():
    for build in (graphs.build_k_gabriel, graphs.build_k_rng, graphs.build_k_delaunay):
        assert build(TWO, 0).sorted_edges() == [(0, 1)]
        with pytest.raises(TooFewPointsError):
            build(PointSet([(0, 0)]), 0)
        with pytest.raises(ValueError):
            build(TWO, -1)
    assert graphs.build_k_gabriel(MID, 0).sorted_edges() == [(0, 2), (1, 2)]
    assert graphs.build_k_gabriel(MID, 1).is_complete()
    tri = PointSet([(0, 0), (2, 0), (1, "1.7320509")])  # apex just above sqrt(3)
    assert graphs.build_k_rng(tri, 0).is_complete()


def test_midpoint_blocks_every_delaunay_disk():
    # a point on the open segment lies in every disk through both endpoints
    assert graphs.min_enclosing_count(MID, 0, 1) == 1 == kdg_min_count(MID, 0, 1)
    assert (0, 1) not in graphs.build_k_delaunay(MID, 0)
    assert (0, 1) in graphs.build_k_delaunay(MID, 1)
    assert graphs.min_enclosing_count(TWO, 0, 1) == 0


def test_half_plane_limit_counts():
    # the only empty disk through (0,0),(1,0) is the far-below limit: a disk whose
    # centre runs to minus infinity tends to the lower half-plane, which is empty
    s = PointSet([(0, 0), (1, 0), ("0.5", 1), ("0.5", 10), (5, 3)])
    assert graphs.min_enclosing_count(s, 0, 1) == 0 == kdg_min_count(s, 0, 1)
    always, upper, lower = graphs.disk_events(s, 0, 1)
    assert always == 0 and len(upper) == 3 and lower == []


def test_disk_events_thresholds():
    s = PointSet([(-1, 0), (1, 0), (0, 1), (0, -2), (0, 0), (3, 0)])
    always, upper, lower = graphs.disk_events(s, 0, 1)
    # (0,1): A=-1+1=0, B=2 -> t >= 0;  (0,-2): A=3, B=-4 -> t <= -3/8
    assert always == 1  # the midpoint; (3,0) is collinear but off the segment
    assert upper == [Fraction(0)]
    assert lower == [Fraction(-3, 8)]


def test_lune_builder_matches_brute_force():
    rng = np.random.default_rng(5)
    for _ in range(10):
        s = random_points(rng, 10)
        for k in (0, 1, 2):
            expected = {
                (i, j) for i in range(10) for j in range(i + 1, 10)
                if sum(in_lune(s[i], s[j], s[q]) for q in range(10) if q not in (i, j)) <= k
            }
            assert graphs.build_k_rng(s, k).edges == expected


def test_kdg_sweep_matches_event_oracle():
    rng = np.random.default_rng(9)
    for _ in range(15):
        s = random_points(rng, 8, grid=20)
        for i in range(8):
            for j in range(i + 1, 8):
                assert graphs.min_enclosing_count(s, i, j) == kdg_min_count(s, i, j)
        C = graphs.delaunay_count_matrix(s)
        for k in (0, 1):
            g = graphs.build_k_delaunay(s, k)
            assert all(((i, j) in g) == (C[i, j] <= k) for i in range(8) for j in range(i + 1, 8))


def test_is_plane_examples():
    sq = PointSet([(0, 0), (1, 0), (1, 1), (0, 1)])
    assert graphs.is_plane(graphs.from_edges(sq, []))
    assert graphs.is_plane(graphs.from_edges(sq, [(0, 1), (1, 2), (2, 3), (3, 0)]))
    assert not graphs.is_plane(graphs.from_edges(sq, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 3)]))
    rng = np.random.default_rng(2)
    assert graphs.is_plane(graphs.build_k_gabriel(random_points(rng, 20), 0))


def test_collinear_overlap_is_a_crossing():
    s = PointSet([(0, 0), (2, 0), (1, 0), (3, 0)])
    assert not graphs.is_plane(graphs.from_edges(s, [(0, 1), (2, 3)]))
    # touching only at a shared endpoint is allowed
    assert graphs.is_plane(graphs.from_edges(s, [(0, 2), (2, 1)]))
    # a shared endpoint plus overlap is not
    assert not graphs.is_plane(graphs.from_edges(s, [(0, 1), (0, 2)]))


def test_endpoint_on_interior_is_a_crossing():
    s = PointSet([(0, 0), (2, 0), (1, 0), (1, 5)])
    assert not graphs.is_plane(graphs.from_edges(s, [(0, 1), (2, 3)]))


def test_graph_validation():
    with pytest.raises(ValueError):
        graphs.from_edges(TWO, [(0, 0)])
    with pytest.raises(ValueError):
        graphs.from_edges(TWO, [(0, 2)])
    with pytest.raises(ValueError):
        graphs.GeometricGraph(TWO, frozenset(), "bogus")
    g = graphs.from_edges(TWO, [(1, 0)])
    assert (0, 1) in g and (1, 0) in g


@given(point_sets(3, 8), st.integers(0, 3))
def test_nesting_chain(s, k):
    rng_ = graphs.build_k_rng(s, k).edges
    gg = graphs.build_k_gabriel(s, k).edges
    dg = graphs.build_k_delaunay(s, k).edges
    assert rng_ <= gg <= dg
    assert gg <= graphs.build_k_gabriel(s, k + 1).edges
    assert rng_ <= graphs.build_k_rng(s, k + 1).edges
    assert dg <= graphs.build_k_delaunay(s, k + 1).edges


@given(point_sets(3, 9))
def test_complete_at_half_n(s):
    assert graphs.build_k_delaunay(s, ceil(s.n / 2)).is_complete()


@given(point_sets(2, 8))
def test_witness_count_symmetric(s):
    C = graphs.gabriel_count_matrix(s)
    assert (C == C.T).all()


@given(point_sets(3, 7), small_rational, coord, coord)
def test_similarity_invariance(s, f, dx, dy):
    t = s.transformed(f, dx, dy)
    for build in (graphs.build_k_gabriel, graphs.build_k_rng, graphs.build_k_delaunay):
        assert build(s, 1).edges == build(t, 1).edges


@given(point_sets(3, 9))
def test_zero_graphs_plane(s):
    assert graphs.is_plane(graphs.build_k_gabriel(s, 0))
    assert graphs.is_plane(graphs.build_k_rng(s, 0))
