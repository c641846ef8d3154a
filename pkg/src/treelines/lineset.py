"""Validated line collections: general position, slope order, cap/cup
structure, color classes and the grid-like region partition of a slope-sorted
arrangement.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .geometry import (
    GapMeasure,
    Line,
    Point,
    Segment,
    convex_hull,
    cross,
    line_intersection,
    orientation,
)


class LineSetError(ValueError):
    pass


class DuplicateLine(LineSetError):
    def __init__(self, i: int, j: int):
        super().__init__(f"lines at input positions {i} and {j} coincide")
        self.pair = (i, j)


class ParallelPair(LineSetError):
    def __init__(self, i: int, j: int):
        super().__init__(f"lines at input positions {i} and {j} are parallel")
        self.pair = (i, j)


class ConcurrentTriple(LineSetError):
    def __init__(self, i: int, j: int, k: int):
        super().__init__(f"lines {i}, {j}, {k} meet in a single point")
        self.triple = (i, j, k)


class TooFew(LineSetError):
    pass


class OnIntersection(LineSetError):
    pass


class EmptyRegion(LineSetError):
    pass


class CapCup(enum.Enum):
    CAP = "cap"
    CUP = "cup"
    NEITHER = "neither"


class LineSet:
    """A general-position set of lines, slope-sorted with ids 1..n.

    Construct through :func:`verify_general_position`; instances are
    immutable and cache pairwise intersections.
    """

    def __init__(self, lines: Sequence[Line], _validated: bool = False):
        if not _validated:
            raise TypeError("build LineSets via verify_general_position()")
        self._lines: Tuple[Line, ...] = tuple(lines)
        self._cache: Dict[Tuple[int, int], Point] = {}

    def __len__(self) -> int:
        return len(self._lines)

    def __iter__(self):
        return iter(self._lines)

    @property
    def lines(self) -> Tuple[Line, ...]:
        return self._lines

    def line(self, line_id: int) -> Line:
        if not 1 <= line_id <= len(self._lines):
            raise LineSetError(f"no line with id {line_id}")
        return self._lines[line_id - 1]

    def intersection(self, i: int, j: int) -> Point:
        key = (min(i, j), max(i, j))
        pt = self._cache.get(key)
        if pt is None:
            pt = line_intersection(self.line(key[0]), self.line(key[1]))
            self._cache[key] = pt
        return pt

    def intersection_points(self) -> List[Point]:
        n = len(self)
        return [self.intersection(i, j)
                for i in range(1, n + 1) for j in range(i + 1, n + 1)]

    def subset(self, ids: Sequence[int]) -> "LineSet":
        """A new LineSet of the selected lines, renumbered in slope order."""
        picked = sorted((self.line(i) for i in ids), key=lambda l: l.slope)
        return LineSet([l.with_id(k + 1) for k, l in enumerate(picked)],
                       _validated=True)


def verify_general_position(lines: Sequence[Line]) -> LineSet:
    """Sort by slope and verify no duplicates, no parallels, no three
    concurrent.  Errors name the violating input positions (0-based)."""
    for i in range(len(lines)):
        for j in range(i + 1, len(lines)):
            if lines[i].slope == lines[j].slope:
                if lines[i].dual_offset == lines[j].dual_offset:
                    raise DuplicateLine(i, j)
                raise ParallelPair(i, j)
    seen: Dict[Point, Tuple[int, int]] = {}
    for i in range(len(lines)):
        for j in range(i + 1, len(lines)):
            p = line_intersection(lines[i], lines[j])
            if p in seen:
                ids = sorted(set(seen[p]) | {i, j})
                raise ConcurrentTriple(*ids[:3])
            seen[p] = (i, j)
    ordered = sorted(lines, key=lambda l: l.slope)
    return LineSet([l.with_id(k + 1) for k, l in enumerate(ordered)],
                   _validated=True)


def intersection_order(ls: LineSet, i: int) -> List[Tuple[int, Point]]:
    """The n-1 intersection points on line i sorted by x ascending, each
    with the id of the partner line."""
    entries = [(j, ls.intersection(i, j))
               for j in range(1, len(ls) + 1) if j != i]
    entries.sort(key=lambda e: e[1].x)
    return entries


def classify_cap_cup(ls: LineSet) -> CapCup:
    """Cap iff along every line the intersections with the others, taken in
    id order, run right to left; cup for left to right."""
    n = len(ls)
    if n < 3:
        raise TooFew("cap/cup needs at least 3 lines")
    is_cap = True
    is_cup = True
    for i in range(1, n + 1):
        xs = [ls.intersection(i, j).x for j in range(1, n + 1) if j != i]
        if any(a <= b for a, b in zip(xs, xs[1:])):
            is_cap = False
        if any(a >= b for a, b in zip(xs, xs[1:])):
            is_cup = False
        if not (is_cap or is_cup):
            return CapCup.NEITHER
    if is_cap:
        return CapCup.CAP
    return CapCup.CUP if is_cup else CapCup.NEITHER


def _longest_turn_chain(points: Sequence[Point], turn: int) -> List[int]:
    """Longest subsequence of the x-sorted points whose consecutive triples
    all turn in the given direction (+1 convex/cup, -1 concave/cap).
    Returns indices into ``points``.  O(n^3), smallest-index tie-breaking."""
    n = len(points)
    best_len: Dict[Tuple[int, int], int] = {}
    parent: Dict[Tuple[int, int], Optional[int]] = {}
    for j in range(n):
        for i in range(j):
            best_len[(i, j)] = 2
            parent[(i, j)] = None
    for j in range(n):
        for i in range(j):
            for k in range(j + 1, n):
                if orientation(points[i], points[j], points[k]) == turn:
                    if best_len[(i, j)] + 1 > best_len[(j, k)]:
                        best_len[(j, k)] = best_len[(i, j)] + 1
                        parent[(j, k)] = i
    if n < 2:
        return list(range(n))
    best_pair = min(best_len, key=lambda p: (-best_len[p], p))
    chain = [best_pair[1], best_pair[0]]
    while parent[(chain[-1], chain[-2])] is not None:
        chain.append(parent[(chain[-1], chain[-2])])
    chain.reverse()
    return chain


def longest_cap_cup(ls: LineSet) -> Tuple[CapCup, LineSet]:
    """Largest subset forming a cap or cup, found by the longest
    concave/convex chain dynamic program over the dual point set."""
    n = len(ls)
    if n < 3:
        raise TooFew("need at least 3 lines")
    # dual points are (slope, dual_offset), already x-sorted by slope order;
    # a concave dual chain gives a line cap, a convex one a line cup
    duals = [Point(l.slope, l.dual_offset) for l in ls]
    cap_chain = _longest_turn_chain(duals, -1)
    cup_chain = _longest_turn_chain(duals, +1)
    if len(cap_chain) >= len(cup_chain):
        kind, chain = CapCup.CAP, cap_chain
    else:
        kind, chain = CapCup.CUP, cup_chain
    sub = ls.subset([i + 1 for i in chain])
    assert classify_cap_cup(sub) == kind
    return kind, sub


@dataclass(frozen=True)
class ColorClasses:
    """Partition of the slope-sorted ids 1..n into c consecutive blocks."""

    c: int
    n: int

    def __post_init__(self):
        if self.c < 1 or self.n % self.c != 0:
            raise LineSetError(f"c={self.c} must divide n={self.n}")

    @property
    def block(self) -> int:
        return self.n // self.c

    def class_of(self, line_id: int) -> int:
        if not 1 <= line_id <= self.n:
            raise LineSetError(f"no line with id {line_id}")
        return (line_id - 1) // self.block + 1

    def ids_of_class(self, c_prime: int) -> range:
        if not 1 <= c_prime <= self.c:
            raise LineSetError(f"no class {c_prime}")
        return range((c_prime - 1) * self.block + 1, c_prime * self.block + 1)


@dataclass(frozen=True, order=True)
class RegionIndex:
    a: int
    b: int

    def __post_init__(self):
        if not 1 <= self.a <= self.b:
            raise LineSetError(f"bad region index ({self.a},{self.b})")


def all_region_indices(cc: ColorClasses) -> List[RegionIndex]:
    return [RegionIndex(a, b)
            for a in range(1, cc.c + 1) for b in range(a, cc.c + 1)]


def segment_index_of(ls: LineSet, cc: ColorClasses, i: int, x: Fraction) -> int:
    """Which of the c slope-block segments of line i contains the point at
    parameter x.  Errors out if x hits an intersection point."""
    xs = [pt.x for _, pt in intersection_order(ls, i)]
    if x in xs:
        raise OnIntersection(f"x={x} is an intersection point on line {i}")
    below = sum(1 for v in xs if v < x)
    return below // cc.block + 1


def region_of(ls: LineSet, cc: ColorClasses, i: int, x: Fraction) -> RegionIndex:
    """The unique region R_{a,b} whose open segment contains (x, l_i(x))."""
    if cc.n != len(ls):
        raise LineSetError("color classes sized for a different line set")
    seg = segment_index_of(ls, cc, i, x)
    ci = cc.class_of(i)
    return RegionIndex(min(ci, seg), max(ci, seg))


@dataclass(frozen=True)
class HullSide:
    """One side of a region hull: a finite edge or an infinite ray.

    ``start``/``end`` are the finite endpoints when present; for a ray side
    exactly one of them is None and ``direction`` points to infinity.
    """

    start: Optional[Point]
    end: Optional[Point]
    direction: Optional[Tuple[Fraction, Fraction]] = None

    def halfplane_value(self, p: Point) -> Fraction:
        """>0 strictly inside, 0 on the side's supporting line."""
        if self.start is not None and self.end is not None:
            return cross(self.end.x - self.start.x, self.end.y - self.start.y,
                         p.x - self.start.x, p.y - self.start.y)
        anchor = self.start if self.start is not None else self.end
        dx, dy = self.direction
        if self.start is None:
            # boundary runs from infinity toward ``end``: direction -d
            dx, dy = -dx, -dy
            anchor = self.end
        return cross(dx, dy, p.x - anchor.x, p.y - anchor.y)


class UnboundedHullError(LineSetError):
    pass


@dataclass(frozen=True)
class RegionHull:
    """Closure of the convex hull of a region: a convex polyhedron, possibly
    unbounded, with its sides labeled 1..m counter-clockwise starting just
    after the lexicographically smallest vertex (label 0 means "no side")."""

    index: RegionIndex
    vertices: Tuple[Point, ...]
    sides: Tuple[HullSide, ...]
    bounded: bool

    @property
    def side_count(self) -> int:
        return len(self.sides)

    def contains(self, p: Point) -> bool:
        return all(s.halfplane_value(p) >= 0 for s in self.sides)

    def side_label_at(self, p: Point) -> int:
        """1-based label of the side whose supporting line passes through a
        boundary point; 0 if p is not on any side."""
        if not self.contains(p):
            return 0
        for k, s in enumerate(self.sides):
            if s.halfplane_value(p) == 0 and _point_on_side(s, p):
                return k + 1
        return 0

    def clip_parameter_interval(
        self, seg: Segment
    ) -> Optional[Tuple[Fraction, Fraction]]:
        """Parameter interval [t0, t1] of seg (p at t=0, q at t=1) inside the
        closed hull, or None if the intersection is empty or a single point."""
        t_lo, t_hi = Fraction(0), Fraction(1)
        for s in self.sides:
            vp = s.halfplane_value(seg.p)
            vq = s.halfplane_value(seg.q)
            if vp == vq:
                if vp < 0:
                    return None
                continue
            t = vp / (vp - vq)
            if vp < vq:       # entering the halfplane at t
                t_lo = max(t_lo, t)
            else:             # leaving at t
                t_hi = min(t_hi, t)
            if t_lo >= t_hi:
                return None
        return (t_lo, t_hi)


def _point_on_side(s: HullSide, p: Point) -> bool:
    # assumes p on the supporting line
    if s.start is not None and s.end is not None:
        return (min(s.start.x, s.end.x) <= p.x <= max(s.start.x, s.end.x)
                and min(s.start.y, s.end.y) <= p.y <= max(s.start.y, s.end.y))
    anchor = s.start if s.start is not None else s.end
    dx, dy = s.direction
    return dx * (p.x - anchor.x) + dy * (p.y - anchor.y) >= 0


def _region_members(ls: LineSet, cc: ColorClasses,
                    r: RegionIndex) -> List[Tuple[int, int]]:
    """(line id, segment index) pairs whose open segments make up R_{a,b}."""
    if r.b > cc.c:
        raise EmptyRegion(f"region {r} out of range for c={cc.c}")
    members = [(i, r.a) for i in cc.ids_of_class(r.b)]
    if r.a != r.b:
        members += [(i, r.b) for i in cc.ids_of_class(r.a)]
    return members


def _segment_geometry(ls: LineSet, i: int, seg_idx: int, block: int):
    """Finite endpoints and infinite directions of segment seg_idx of line i."""
    pts = [pt for _, pt in intersection_order(ls, i)]
    n = len(ls)
    lo = (seg_idx - 1) * block     # 0 means the -infinity sentinel
    hi = seg_idx * block           # n means the +infinity sentinel
    slope = ls.line(i).slope
    finite: List[Point] = []
    rays: List[Tuple[Point, Tuple[Fraction, Fraction]]] = []
    if lo == 0:
        rays.append((pts[hi - 1], (Fraction(-1), -slope)))
    else:
        finite.append(pts[lo - 1])
    if hi >= n:
        anchor = finite[0] if lo != 0 else pts[0]
        rays.append((anchor, (Fraction(1), slope)))
    else:
        finite.append(pts[hi - 1])
    return finite, rays


def _extreme_directions(dirs: List[Tuple[Fraction, Fraction]]):
    """The two extreme rays of the convex cone of the given directions.
    Requires the cone to fit in an open halfplane."""
    uniq = list(dict.fromkeys(dirs))
    d_right = d_left = None
    for d in uniq:
        if all(cross(d[0], d[1], e[0], e[1]) >= 0 for e in uniq):
            d_right = d
        if all(cross(d[0], d[1], e[0], e[1]) <= 0 for e in uniq):
            d_left = d
    if d_right is None or d_left is None:
        raise UnboundedHullError("direction cone spans a halfplane or more")
    if len(uniq) > 1 and cross(d_right[0], d_right[1],
                               d_left[0], d_left[1]) < 0:
        raise UnboundedHullError("direction cone spans more than pi")
    return d_right, d_left


def region_hull(ls: LineSet, cc: ColorClasses, r: RegionIndex) -> RegionHull:
    """Closure of the convex hull of R_{a,b}: a polytope plus the recession
    cone of the unbounded member segments."""
    if cc.c < 2:
        raise LineSetError("region hulls need at least 2 color classes")
    finite: List[Point] = []
    rays: List[Tuple[Point, Tuple[Fraction, Fraction]]] = []
    for i, seg_idx in _region_members(ls, cc, r):
        f, ry = _segment_geometry(ls, i, seg_idx, cc.block)
        finite += f
        rays += [(a, d) for a, d in ry]
        finite += [a for a, _ in ry]  # ray apexes are hull generators too

    if not rays:
        hull = convex_hull(finite)
        if len(hull) < 3:
            raise LineSetError(f"degenerate (flat) region {r}")
        sides = tuple(HullSide(hull[k], hull[(k + 1) % len(hull)])
                      for k in range(len(hull)))
        return _canonicalize(RegionHull(r, tuple(hull), sides, True))

    d_right, d_left = _extreme_directions([d for _, d in rays])
    poly = convex_hull(finite)

    def support_vertex(normal, tie_dir):
        best = max(poly, key=lambda v: (normal[0] * v.x + normal[1] * v.y))
        val = normal[0] * best.x + normal[1] * best.y
        tied = [v for v in poly
                if normal[0] * v.x + normal[1] * v.y == val]
        return min(tied, key=lambda v: tie_dir[0] * v.x + tie_dir[1] * v.y)

    # CCW boundary: in from infinity along -d_left, the chain, out along
    # +d_right.  Outward normals of the two infinite sides:
    n_start = (-d_left[1], d_left[0])
    n_end = (d_right[1], -d_right[0])
    v_start = support_vertex(n_start, d_left)
    v_end = support_vertex(n_end, d_right)

    if len(poly) < 3:
        chain = [v_start] if v_start == v_end else [v_start, v_end]
    else:
        start = poly.index(v_start)
        chain = [poly[start]]
        k = start
        while poly[k] != v_end:
            k = (k + 1) % len(poly)
            chain.append(poly[k])
    sides: List[HullSide] = [HullSide(None, chain[0], d_left)]
    sides += [HullSide(u, v) for u, v in zip(chain, chain[1:])]
    sides.append(HullSide(chain[-1], None, d_right))
    hull = RegionHull(r, tuple(chain), tuple(sides), False)
    probe = Point(chain[0].x + d_right[0] + d_left[0],
                  chain[0].y + d_right[1] + d_left[1])
    if not hull.contains(probe):
        raise UnboundedHullError(f"inconsistent unbounded hull for {r}")
    return _canonicalize(hull)


def _canonicalize(h: RegionHull) -> RegionHull:
    """Rotate the side labeling to start just after the lexicographically
    smallest vertex (only meaningful for the cyclic bounded case)."""
    if not h.bounded or not h.vertices:
        return h
    smallest = min(range(len(h.vertices)),
                   key=lambda k: (h.vertices[k].x, h.vertices[k].y))
    verts = h.vertices[smallest:] + h.vertices[:smallest]
    sides = h.sides[smallest:] + h.sides[:smallest]
    return RegionHull(h.index, verts, sides, h.bounded)
