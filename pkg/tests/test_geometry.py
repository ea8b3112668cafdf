from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from proxigraph.errors import DegeneratePairError, DuplicatePointError
from proxigraph.geometry import (
    Point,
    PointSet,
    format_scalar,
    in_diameter_disk,
    in_lune,
    normalize_edge,
    normalize_edge_exact,
    orientation,
    sq_dist,
    to_scalar,
)
from strategies import coord, point, point_sets, small_rational

X, Y = Point.of(-1, 0), Point.of(1, 0)


def test_sq_dist_examples():
    assert sq_dist(X, Y) == 4
    assert sq_dist(X, X) == 0
    assert sq_dist(Point.of(0, 0), Point.of(3, 4)) == 25


def test_in_diameter_disk_examples():
    assert in_diameter_disk(X, Y, Point.of(0, 0))
    assert in_diameter_disk(X, Y, Point.of(0, 1))  # on the circle
    assert not in_diameter_disk(X, Y, Point.of(2, 0))


def test_in_lune_examples():
    assert in_lune(X, Y, Point.of(0, 0))
    assert not in_lune(X, Y, Y)
    # 1 + 2.89 = 3.89 < 4 from both ends
    assert in_lune(X, Y, Point.of(0, "1.7"))
    assert not in_lune(X, Y, Point.of(0, "1.8"))


def test_degenerate_pair_rejected():
    with pytest.raises(DegeneratePairError):
        in_diameter_disk(X, X, Y)
    with pytest.raises(DegeneratePairError):
        in_lune(Y, Y, X)
    with pytest.raises(DegeneratePairError):
        normalize_edge([X, X], 0, 1)


def test_decimal_strings_are_exact():
    assert to_scalar("0.25") == Fraction(1, 4)
    assert to_scalar("0.1") == Fraction(1, 10)
    assert to_scalar("3/7") == Fraction(3, 7)
    assert to_scalar("-1e-3") == Fraction(-1, 1000)
    assert format_scalar(Fraction(-6, 4)) == "-3/2"
    with pytest.raises(ValueError):
        to_scalar("abc")


def test_duplicates_rejected():
    with pytest.raises(DuplicatePointError):
        PointSet([(0, 0), (1, 1), ("0.0", "0/5")])


@pytest.mark.parametrize(
    "pts, expected",
    [
        ([(0, 0), (2, 0)], [(-1, 0), (1, 0)]),
        ([(0, 0), (0, 2)], [(-1, 0), (1, 0)]),
        ([(0, 0), (4, 0), (2, 1)], [(-1, 0), (1, 0), (0, 0.5)]),
    ],
)
def test_normalize_edge_examples(pts, expected):
    s = PointSet(pts)
    img, tr = normalize_edge(s, 0, 1)
    assert np.allclose(img, expected, atol=1e-12)
    assert normalize_edge_exact(s, 0, 1) == [tuple(map(Fraction, e)) for e in expected]
    assert tr.scale == pytest.approx(2 / np.hypot(*np.subtract(pts[1], pts[0])))
    assert np.allclose([tr.apply(p) for p in s], expected, atol=1e-12)


def test_int_frame_preserves_squared_distances():
    s = PointSet([("1/3", "2/7"), ("-5/2", 1), (0, "0.125")])
    L2 = s.scale**2
    for i in range(3):
        for j in range(3):
            assert Fraction(int(s.sq_matrix[i, j]), L2) == sq_dist(s[i], s[j])


def test_huge_coordinates_fall_back_to_python_ints():
    s = PointSet([(0, 0), (10**12, 1), ("1/3", 5)])
    assert s.int_coords.dtype == object
    assert s.sq_dist(0, 1) == 10**24 + 1


@given(point, point, point)
def test_thales_matches_float_disk(a, b, q):
    assume(a != b)
    m = ((float(a.x) + float(b.x)) / 2, (float(a.y) + float(b.y)) / 2)
    r2 = float(sq_dist(a, b)) / 4
    d2 = (float(q.x) - m[0]) ** 2 + (float(q.y) - m[1]) ** 2
    assume(abs(d2 - r2) > 1e-6 * r2)
    assert in_diameter_disk(a, b, q) == (d2 <= r2)


@given(point, point, point)
def test_disk_inside_lune(a, b, q):
    assume(len({a, b, q}) == 3)
    if in_diameter_disk(a, b, q):
        assert in_lune(a, b, q)


@given(point, point, point, small_rational, coord, coord)
def test_disk_membership_similarity_invariant(a, b, q, f, dx, dy):
    assume(a != b)
    move = lambda p: Point(p.x * f + dx, p.y * f + dy)  # noqa: E731
    assert in_diameter_disk(a, b, q) == in_diameter_disk(move(a), move(b), move(q))


@given(point, point)
def test_sq_dist_symmetric_positive(p, q):
    assert sq_dist(p, q) == sq_dist(q, p)
    assert (sq_dist(p, q) == 0) == (p == q)


@given(point_sets(2, 6), st.data())
def test_normalize_is_a_similarity(s, data):
    i, j = data.draw(st.lists(st.integers(0, s.n - 1), min_size=2, max_size=2, unique=True))
    exact = normalize_edge_exact(s, i, j)
    assert exact[i] == (-1, 0) and exact[j] == (1, 0)
    k = Fraction(4) / sq_dist(s[i], s[j])
    for a in range(s.n):
        for b in range(s.n):
            assert sq_dist(exact[a], exact[b]) == k * sq_dist(s[a], s[b])
    # orientation is kept: no reflection
    if s.n >= 3:
        c = next(v for v in range(s.n) if v not in (i, j))
        assert orientation(Point(*exact[i]), Point(*exact[j]), Point(*exact[c])) == orientation(s[i], s[j], s[c])
