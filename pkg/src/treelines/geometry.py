"""Exact rational plane geometry: points, lines, segments, and the predicates
everything else is built on.

All coordinates and slopes are ``fractions.Fraction`` values, so every
predicate here is decided exactly; nothing rounds.  Angles are never stored
numerically: angle-gap comparisons reduce to rational sign tests via the
tangent subtraction formula.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple, Union

Scalar = Fraction

ScalarLike = Union[Fraction, int, str]


def scalar(value: ScalarLike) -> Fraction:
    """Coerce an int / 'p/q' string / Fraction into an exact Scalar."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not allowed in the exact kernel; "
                        "use Fraction or a 'p/q' string")
    return Fraction(value)


class ParallelLines(ValueError):
    """Raised when intersecting two lines of equal slope."""


class DegenerateContact(ValueError):
    """Raised by winding_number when the polyline touches the ray
    non-transversally (vertex on the ray, collinear sub-segment, or a
    crossing exactly through the ray origin)."""


@dataclass(frozen=True)
class Point:
    x: Fraction
    y: Fraction

    def translated(self, dx: Fraction, dy: Fraction) -> "Point":
        return Point(self.x + dx, self.y + dy)

    def __iter__(self):
        yield self.x
        yield self.y


def point(x: ScalarLike, y: ScalarLike) -> Point:
    return Point(scalar(x), scalar(y))


@dataclass(frozen=True)
class Line:
    """A non-vertical line stored as y = slope*x - dual_offset.

    ``dual_offset`` is the *negated* y-intercept: with this convention the
    point-line duality is literally coordinate copying,
    (slope, dual_offset) <-> the dual point.
    """

    slope: Fraction
    dual_offset: Fraction
    id: int = 0

    def y_at(self, x: Fraction) -> Fraction:
        return self.slope * x - self.dual_offset

    def contains(self, p: Point) -> bool:
        return p.y == self.y_at(p.x)

    def point_at(self, x: Fraction) -> Point:
        return Point(x, self.y_at(x))

    def with_id(self, new_id: int) -> "Line":
        return Line(self.slope, self.dual_offset, new_id)


def line(slope: ScalarLike, dual_offset: ScalarLike, id: int = 0) -> Line:
    return Line(scalar(slope), scalar(dual_offset), id)


@dataclass(frozen=True)
class Segment:
    p: Point
    q: Point

    def __post_init__(self):
        if self.p == self.q:
            raise ValueError("degenerate segment: endpoints coincide")

    def reversed(self) -> "Segment":
        return Segment(self.q, self.p)


@dataclass(frozen=True)
class Ray:
    origin: Point
    dx: Fraction
    dy: Fraction

    def __post_init__(self):
        if self.dx == 0 and self.dy == 0:
            raise ValueError("ray needs a nonzero direction")


def _sign(v: Fraction) -> int:
    if v > 0:
        return 1
    if v < 0:
        return -1
    return 0


def cross(ox: Fraction, oy: Fraction, ax: Fraction, ay: Fraction) -> Fraction:
    return ox * ay - oy * ax


def orientation(p: Point, q: Point, r: Point) -> int:
    """Sign of (q-p) x (r-p): +1 left turn, 0 collinear, -1 right turn."""
    return _sign(cross(q.x - p.x, q.y - p.y, r.x - p.x, r.y - p.y))


def line_intersection(l1: Line, l2: Line) -> Point:
    """The unique common point of two non-parallel lines, exactly."""
    if l1.slope == l2.slope:
        raise ParallelLines(f"lines {l1.id} and {l2.id} have equal slope")
    x = (l1.dual_offset - l2.dual_offset) / (l1.slope - l2.slope)
    return Point(x, l1.y_at(x))


def dualize_line(l: Line) -> Point:
    """y = a*x - b  ->  (a, b)."""
    return Point(l.slope, l.dual_offset)


def dualize_point(p: Point, id: int = 0) -> Line:
    """(a, b)  ->  y = a*x - b.  Inverse of dualize_line."""
    return Line(p.x, p.y, id)


class SegmentRelation(enum.Enum):
    DISJOINT = "disjoint"
    PROPER_CROSS = "proper_cross"
    TOUCH_ENDPOINT_ENDPOINT = "touch_endpoint_endpoint"
    TOUCH_ENDPOINT_INTERIOR = "touch_endpoint_interior"
    OVERLAP = "overlap"


def _on_segment_collinear(s: Segment, p: Point) -> bool:
    # assumes p collinear with s
    return (min(s.p.x, s.q.x) <= p.x <= max(s.p.x, s.q.x)
            and min(s.p.y, s.q.y) <= p.y <= max(s.p.y, s.q.y))


def segments_intersect(s1: Segment, s2: Segment) -> SegmentRelation:
    """Exact classification of the intersection of two closed segments."""
    o1 = orientation(s1.p, s1.q, s2.p)
    o2 = orientation(s1.p, s1.q, s2.q)
    o3 = orientation(s2.p, s2.q, s1.p)
    o4 = orientation(s2.p, s2.q, s1.q)

    if o1 == 0 and o2 == 0:
        # all four points collinear: 1-d interval arithmetic
        touching = [p for p in (s2.p, s2.q) if _on_segment_collinear(s1, p)]
        touching += [p for p in (s1.p, s1.q) if _on_segment_collinear(s2, p)]
        if not touching:
            return SegmentRelation.DISJOINT
        distinct = set(touching)
        if len(distinct) == 1:
            p = distinct.pop()
            if p in (s1.p, s1.q) and p in (s2.p, s2.q):
                return SegmentRelation.TOUCH_ENDPOINT_ENDPOINT
            return SegmentRelation.TOUCH_ENDPOINT_INTERIOR
        return SegmentRelation.OVERLAP

    if o1 != o2 and o3 != o4 and 0 not in (o1, o2, o3, o4):
        return SegmentRelation.PROPER_CROSS

    contact: Optional[Point] = None
    if o1 == 0 and _on_segment_collinear(s1, s2.p):
        contact = s2.p
    elif o2 == 0 and _on_segment_collinear(s1, s2.q):
        contact = s2.q
    elif o3 == 0 and _on_segment_collinear(s2, s1.p):
        contact = s1.p
    elif o4 == 0 and _on_segment_collinear(s2, s1.q):
        contact = s1.q
    if contact is None:
        return SegmentRelation.DISJOINT
    if contact in (s1.p, s1.q) and contact in (s2.p, s2.q):
        return SegmentRelation.TOUCH_ENDPOINT_ENDPOINT
    return SegmentRelation.TOUCH_ENDPOINT_INTERIOR


def convex_hull(points: Sequence[Point]) -> List[Point]:
    """Convex hull in counter-clockwise order, collinear interior points
    removed.  Degenerate inputs yield 1 or 2 points."""
    if not points:
        raise ValueError("convex_hull of empty set")
    pts = sorted(set(points), key=lambda p: (p.x, p.y))
    if len(pts) <= 2:
        return pts

    def half(seq: Iterable[Point]) -> List[Point]:
        out: List[Point] = []
        for p in seq:
            while len(out) >= 2 and orientation(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:  # everything collinear
        return [pts[0], pts[-1]]
    return hull


def _ray_side_value(r: Ray, p: Point) -> Fraction:
    # >0: p lies to the left of the ray direction, <0: to the right
    return r.dx * (p.y - r.origin.y) - r.dy * (p.x - r.origin.x)


def _along_ray(r: Ray, p: Point) -> Fraction:
    return r.dx * (p.x - r.origin.x) + r.dy * (p.y - r.origin.y)


def winding_number(polyline: Sequence[Point], r: Ray) -> int:
    """Signed transversal crossings of the oriented polyline with the ray:
    arrivals from the left (looking along the ray) count +1, arrivals from
    the right count -1."""
    if len(polyline) < 2:
        raise ValueError("polyline needs at least 2 points")
    for v in polyline:
        if _ray_side_value(r, v) == 0 and _along_ray(r, v) >= 0:
            raise DegenerateContact(f"polyline vertex {v} lies on the ray")
    total = 0
    for p, q in zip(polyline, polyline[1:]):
        sp = _ray_side_value(r, p)
        sq = _ray_side_value(r, q)
        if sp == 0 and sq == 0:
            # collinear with the supporting line but off the ray (vertices on
            # the ray were rejected above); the sub-segment could still reach
            # the ray only through the origin, which both along-values exclude
            if max(_along_ray(r, p), _along_ray(r, q)) >= 0:
                raise DegenerateContact("collinear sub-segment meets the ray")
            continue
        if sp == 0 or sq == 0:
            # one vertex on the supporting line behind the origin: the
            # segment only touches the line off the ray
            continue
        if (sp > 0) == (sq > 0):
            continue
        # transversal crossing of the supporting line; locate it on the ray
        t = sp / (sp - sq)
        ix = p.x + t * (q.x - p.x)
        iy = p.y + t * (q.y - p.y)
        along = r.dx * (ix - r.origin.x) + r.dy * (iy - r.origin.y)
        if along < 0:
            continue
        if along == 0:
            raise DegenerateContact("polyline crosses exactly through the "
                                    "ray origin")
        total += 1 if sp > 0 else -1
    return total


class GapClass(enum.Enum):
    ACUTE = 0    # gap < pi/2
    RIGHT = 1    # gap = pi/2
    OBTUSE = 2   # gap > pi/2


@dataclass(frozen=True)
class GapMeasure:
    """Exact stand-in for the angle gap a(l_hi) - a(l_lo) in (0, pi).

    The class comes from the sign of 1 + s_lo*s_hi; ``tangent`` is
    tan(gap) = (s_hi - s_lo)/(1 + s_lo*s_hi), defined for the non-right
    classes.  tan is strictly increasing on (0, pi/2) and on (pi/2, pi),
    so gaps compare by (class, tangent) without ever evaluating arctan.
    """

    cls: GapClass
    tangent: Optional[Fraction]

    def _key(self) -> Tuple[int, Fraction]:
        return (self.cls.value, self.tangent if self.tangent is not None
                else Fraction(0))

    def __lt__(self, other: "GapMeasure") -> bool:
        return self._key() < other._key()

    def __le__(self, other: "GapMeasure") -> bool:
        return self._key() <= other._key()


def angle_gap(l1: Line, l2: Line) -> GapMeasure:
    """The gap between the angles of two non-parallel lines, in (0, pi)."""
    s_lo, s_hi = sorted((l1.slope, l2.slope))
    if s_lo == s_hi:
        raise ParallelLines("angle gap of parallel lines")
    d = 1 + s_lo * s_hi
    if d == 0:
        return GapMeasure(GapClass.RIGHT, None)
    t = (s_hi - s_lo) / d
    return GapMeasure(GapClass.ACUTE if d > 0 else GapClass.OBTUSE, t)


def compare_angle_gap(pair1: Tuple[Line, Line], pair2: Tuple[Line, Line]) -> int:
    """-1 / 0 / +1 as the first angle gap is smaller / equal / larger."""
    g1 = angle_gap(*pair1)
    g2 = angle_gap(*pair2)
    k1, k2 = g1._key(), g2._key()
    return (k1 > k2) - (k1 < k2)
