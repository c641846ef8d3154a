"""Exact kernel tests: predicates, hulls, winding numbers, angle gaps."""

from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from treelines.geometry import (
    DegenerateContact,
    GapClass,
    Line,
    ParallelLines,
    Point,
    Ray,
    Segment,
    SegmentRelation,
    angle_gap,
    compare_angle_gap,
    convex_hull,
    dualize_line,
    dualize_point,
    line_intersection,
    orientation,
    point,
    scalar,
    segments_intersect,
    winding_number,
)

rationals = st.fractions(min_value=-50, max_value=50,
                         max_denominator=97)
points = st.builds(Point, rationals, rationals)


def test_scalar_rejects_floats():
    with pytest.raises(TypeError):
        scalar(0.5)
    assert scalar("7/3") == Fraction(7, 3)
    assert scalar(4) == Fraction(4)


def test_orientation_examples():
    assert orientation(point(0, 0), point(1, 0), point(0, 1)) == 1
    assert orientation(point(0, 0), point(1, 1), point(2, 2)) == 0
    assert orientation(point(0, 0), point(0, 1), point(1, 1)) == -1


@given(points, points, points)
def test_orientation_antisymmetry(p, q, r):
    assert orientation(p, q, r) == -orientation(p, r, q)


@given(points, points, points, rationals, rationals)
def test_orientation_translation_invariant(p, q, r, dx, dy):
    assert orientation(p.translated(dx, dy), q.translated(dx, dy),
                       r.translated(dx, dy)) == orientation(p, q, r)


def test_line_intersection_examples():
    assert line_intersection(Line(scalar(1), scalar(0)),
                             Line(scalar(-1), scalar(0))) == point(0, 0)
    assert line_intersection(Line(scalar(2), scalar(3)),
                             Line(scalar(1), scalar(1))) == point(2, 1)
    p = line_intersection(Line(Fraction(1, 3), scalar(0)),
                          Line(Fraction(5, 2), scalar(1)))
    assert p == Point(Fraction(6, 13), Fraction(2, 13))


def test_line_intersection_parallel():
    with pytest.raises(ParallelLines):
        line_intersection(Line(scalar(1), scalar(0)),
                          Line(scalar(1), scalar(5)))


def test_duality_examples():
    assert dualize_line(Line(scalar(2), scalar(3))) == point(2, 3)
    assert dualize_line(Line(scalar(0), scalar(0))) == point(0, 0)


@given(rationals, rationals)
def test_duality_round_trip(a, b):
    l = Line(a, b, id=7)
    assert dualize_point(dualize_line(l), id=7) == l
    p = Point(a, b)
    assert dualize_line(dualize_point(p)) == p


def test_segments_intersect_examples():
    x1 = Segment(point(0, 0), point(2, 2))
    x2 = Segment(point(0, 2), point(2, 0))
    assert segments_intersect(x1, x2) == SegmentRelation.PROPER_CROSS
    t1 = Segment(point(0, 0), point(1, 0))
    t2 = Segment(point(1, 0), point(2, 1))
    assert segments_intersect(t1, t2) == \
        SegmentRelation.TOUCH_ENDPOINT_ENDPOINT
    o1 = Segment(point(0, 0), point(2, 0))
    o2 = Segment(point(1, 0), point(3, 0))
    assert segments_intersect(o1, o2) == SegmentRelation.OVERLAP
    assert segments_intersect(
        Segment(point(0, 0), point(1, 0)),
        Segment(point(0, 1), point(1, 1))) == SegmentRelation.DISJOINT
    assert segments_intersect(
        Segment(point(0, 0), point(2, 0)),
        Segment(point(1, 0), point(1, 5))) == \
        SegmentRelation.TOUCH_ENDPOINT_INTERIOR


def _brute_segment_relation(s1: Segment, s2: Segment) -> SegmentRelation:
    """Parametric oracle: solve p1 + t(q1-p1) = p2 + u(q2-p2) exactly."""
    d1 = (s1.q.x - s1.p.x, s1.q.y - s1.p.y)
    d2 = (s2.q.x - s2.p.x, s2.q.y - s2.p.y)
    det = d1[0] * d2[1] - d1[1] * d2[0]
    rx, ry = s2.p.x - s1.p.x, s2.p.y - s1.p.y
    if det != 0:
        t = (rx * d2[1] - ry * d2[0]) / det
        u = (rx * d1[1] - ry * d1[0]) / det
        if not (0 <= t <= 1 and 0 <= u <= 1):
            return SegmentRelation.DISJOINT
        t_end = t in (0, 1)
        u_end = u in (0, 1)
        if t_end and u_end:
            return SegmentRelation.TOUCH_ENDPOINT_ENDPOINT
        if t_end or u_end:
            return SegmentRelation.TOUCH_ENDPOINT_INTERIOR
        return SegmentRelation.PROPER_CROSS
    # parallel; check collinearity then overlap the 1-d intervals
    if rx * d1[1] - ry * d1[0] != 0:
        return SegmentRelation.DISJOINT
    def coord(p):
        return p.x if d1[0] != 0 else p.y
    a = sorted([coord(s1.p), coord(s1.q)])
    b = sorted([coord(s2.p), coord(s2.q)])
    lo, hi = max(a[0], b[0]), min(a[1], b[1])
    if lo > hi:
        return SegmentRelation.DISJOINT
    if lo < hi:
        return SegmentRelation.OVERLAP
    ends1 = {s1.p, s1.q}
    ends2 = {s2.p, s2.q}
    contact = (ends1 | ends2).intersection(ends1).intersection(ends2)
    if contact:
        return SegmentRelation.TOUCH_ENDPOINT_ENDPOINT
    return SegmentRelation.TOUCH_ENDPOINT_INTERIOR


def test_segments_against_brute_force(rng):
    for _ in range(10_000):
        c = [Fraction(int(v), 8) for v in rng.integers(-12, 12, size=8)]
        try:
            s1 = Segment(Point(c[0], c[1]), Point(c[2], c[3]))
            s2 = Segment(Point(c[4], c[5]), Point(c[6], c[7]))
        except ValueError:
            continue
        got = segments_intersect(s1, s2)
        want = _brute_segment_relation(s1, s2)
        assert got == want, (s1, s2)
        assert segments_intersect(s2, s1) == got


def test_convex_hull_examples():
    tri = [point(0, 0), point(1, 0), point(0, 1)]
    assert set(convex_hull(tri)) == set(tri)
    got = convex_hull([point(0, 0), point(2, 0), point(1, 0), point(1, 1)])
    assert got == [point(0, 0), point(2, 0), point(1, 1)]


def _brute_hull(pts):
    """All-pairs halfplane oracle: a point is a hull vertex iff some
    directed pair keeps everything strictly on one side or on the edge."""
    uniq = sorted(set(pts), key=lambda p: (p.x, p.y))
    if len(uniq) <= 2:
        return set(uniq)
    verts = set()
    for p in uniq:
        for q in uniq:
            if p == q:
                continue
            if all(orientation(p, q, r) >= 0 for r in uniq):
                verts.add(p)
                verts.add(q)
    # drop collinear interior points of hull edges
    out = set()
    for v in verts:
        others = [w for w in verts if w != v]
        if not any(orientation(a, v, b) == 0 and
                   min(a.x, b.x) <= v.x <= max(a.x, b.x) and
                   min(a.y, b.y) <= v.y <= max(a.y, b.y)
                   for a in others for b in others if a != b):
            out.add(v)
    return out


def test_convex_hull_against_brute_force(rng):
    for _ in range(60):
        pts = [Point(Fraction(int(x), 4), Fraction(int(y), 4))
               for x, y in rng.integers(-20, 20, size=(50, 2))]
        hull = convex_hull(pts)
        assert set(hull) == _brute_hull(pts)
        for k in range(len(hull)):
            a = hull[k]
            b = hull[(k + 1) % len(hull)]
            c = hull[(k + 2) % len(hull)]
            assert orientation(a, b, c) == 1   # strictly convex and CCW


def test_winding_square_loop():
    loop = [point(1, -1), point(1, 1), point(-1, 1), point(-1, -1),
            point(1, -1)]
    down = Ray(point(0, 0), scalar(0), scalar(-1))
    assert winding_number(loop, down) == -1


def test_winding_right_halfplane_zero():
    poly = [point(1, 1), point(2, 0), point(1, -1)]
    left = Ray(point(0, 0), scalar(-1), scalar(0))
    assert winding_number(poly, left) == 0


def test_winding_k_loops():
    loop = [point(1, -1), point(1, 1), point(-1, 1), point(-1, -1)]
    for k in range(1, 6):
        poly = loop * k + [loop[0]]
        down = Ray(point(0, 0), scalar(0), scalar(-1))
        assert winding_number(poly, down) == -k
        rev = list(reversed(poly))
        assert winding_number(rev, down) == k


def test_winding_degenerate_contacts():
    down = Ray(point(0, 0), scalar(0), scalar(-1))
    with pytest.raises(DegenerateContact):
        winding_number([point(-1, -1), point(0, -2), point(1, -1)], down)
    with pytest.raises(DegenerateContact):
        winding_number([point(0, -1), point(0, -3), point(1, 1)], down)
    with pytest.raises(DegenerateContact):
        winding_number([point(-1, 0), point(1, 0)], down)


def test_winding_ray_invariance_star_shaped(rng):
    """Any two valid rays from the same origin see the same winding number
    of a closed loop."""
    for _ in range(25):
        m = int(rng.integers(4, 9))
        radii = [Fraction(int(r), 3) for r in rng.integers(3, 30, size=m)]
        base = [(Fraction(int(a), 100), r)
                for a, r in zip(sorted(rng.choice(628, size=m,
                                                  replace=False)), radii)]
        import math
        loop = []
        for a, r in base:
            x = Fraction(round(math.cos(float(a)) * 10**6), 10**6) * r
            y = Fraction(round(math.sin(float(a)) * 10**6), 10**6) * r
            loop.append(Point(x, y))
        loop.append(loop[0])
        values = []
        for _ in range(6):
            d = (Fraction(int(rng.integers(-40, 40)), 7),
                 Fraction(int(rng.integers(-40, 40)), 11))
            if d == (0, 0):
                continue
            try:
                values.append(winding_number(
                    loop, Ray(point(0, 0), d[0], d[1])))
            except DegenerateContact:
                continue
        assert len(set(values)) <= 1


def test_angle_gap_examples():
    g = angle_gap(Line(scalar(0), scalar(0)), Line(scalar(1), scalar(0)))
    assert g.cls == GapClass.ACUTE and g.tangent == 1
    g = angle_gap(Line(scalar(-2), scalar(0)),
                  Line(Fraction(1, 2), scalar(0)))
    assert g.cls == GapClass.RIGHT
    pair1 = (Line(scalar(0), scalar(0)), Line(scalar(1), scalar(0)))
    pair2 = (Line(scalar(1), scalar(0)), Line(scalar(3), scalar(0)))
    assert compare_angle_gap(pair1, pair2) == 1


def test_compare_angle_gap_against_arctan(rng):
    mpmath.mp.dps = 100
    for _ in range(10_000):
        s = [Fraction(int(v), 64) for v in rng.integers(-300, 300, size=4)]
        if s[0] == s[1] or s[2] == s[3]:
            continue
        got = compare_angle_gap(
            (Line(s[0], Fraction(0)), Line(s[1], Fraction(0))),
            (Line(s[2], Fraction(0)), Line(s[3], Fraction(0))))
        def gap(a, b):
            lo, hi = sorted((a, b))
            return mpmath.atan(mpmath.mpf(hi.numerator) / hi.denominator) \
                - mpmath.atan(mpmath.mpf(lo.numerator) / lo.denominator)
        diff = gap(s[0], s[1]) - gap(s[2], s[3])
        if abs(diff) > mpmath.mpf("1e-60"):
            assert got == (1 if diff > 0 else -1)
        else:
            assert got == 0
