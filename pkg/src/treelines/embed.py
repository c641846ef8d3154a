"""Tree embeddings on line arrangements: rooted trees, vertex-to-line
assignments, the exact crossing-free checker, a semi-decision solver,
universality scans, and the path descriptor machinery (combinatorial types,
color types, entry points and doors).
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from .geometry import (
    DegenerateContact,
    Point,
    Segment,
    SegmentRelation,
    convex_hull,
    segments_intersect,
)
from .lineset import (
    ColorClasses,
    LineSet,
    LineSetError,
    RegionHull,
    RegionIndex,
    all_region_indices,
    region_hull,
    region_of,
)


class EmbedError(ValueError):
    pass


class SizeMismatch(EmbedError):
    pass


class TooLarge(EmbedError):
    pass


class NotAPath(EmbedError):
    pass


class NonUniform(EmbedError):
    pass


class DivisibilityError(EmbedError):
    pass


@dataclass(frozen=True)
class Tree:
    """A rooted tree on vertices 0..n-1 with edges directed away from the
    root."""

    n: int
    root: int
    edges: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        if not 0 <= self.root < self.n:
            raise EmbedError("root outside vertex range")
        if len(self.edges) != self.n - 1:
            raise EmbedError(f"a tree on {self.n} vertices needs "
                             f"{self.n - 1} edges")
        parent: Dict[int, int] = {}
        for u, v in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise EmbedError(f"edge ({u},{v}) outside vertex range")
            if v in parent or v == self.root:
                raise EmbedError(f"vertex {v} has two parents or is the root")
            parent[v] = u
        # n-1 edges with unique child endpoints: connectivity is equivalent
        # to every vertex reaching the root
        for v in range(self.n):
            seen = set()
            while v != self.root:
                if v in seen or v not in parent:
                    raise EmbedError("edges do not form a tree")
                seen.add(v)
                v = parent[v]

    def parent_of(self) -> Dict[int, int]:
        return {v: u for u, v in self.edges}

    def children_of(self) -> Dict[int, List[int]]:
        out: Dict[int, List[int]] = {v: [] for v in range(self.n)}
        for u, v in self.edges:
            out[u].append(v)
        return out

    def bfs_order(self) -> List[int]:
        children = self.children_of()
        order = [self.root]
        k = 0
        while k < len(order):
            order.extend(sorted(children[order[k]]))
            k += 1
        return order


def path_tree(n: int) -> Tree:
    return Tree(n, 0, tuple((i, i + 1) for i in range(n - 1)))


def star_tree(n: int) -> Tree:
    return Tree(n, 0, tuple((0, i) for i in range(1, n)))


@dataclass(frozen=True)
class Assignment:
    """Bijection from tree vertices to line ids."""

    iota: Tuple[int, ...]    # iota[v] = line id of vertex v

    def line_of(self, v: int) -> int:
        return self.iota[v]

    def check_bijection(self, n: int) -> None:
        if sorted(self.iota) != list(range(1, n + 1)):
            raise SizeMismatch("assignment is not a bijection onto the "
                               "line ids")


@dataclass(frozen=True)
class Embedding:
    """Vertex x-parameters; the point of v is (x, iota(v) evaluated at x)."""

    pos: Tuple[Fraction, ...]

    def point_of(self, ls: LineSet, asg: Assignment, v: int) -> Point:
        return ls.line(asg.line_of(v)).point_at(self.pos[v])


class ViolationKind(enum.Enum):
    PROPER_CROSS = "proper_cross"
    OVERLAP = "overlap"
    TOUCH = "touch"
    VERTEX_ON_EDGE = "vertex_on_edge"
    COINCIDENT_VERTICES = "coincident_vertices"


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    witness: Tuple[int, ...]    # vertex or edge-index ids involved


@dataclass(frozen=True)
class CheckReport:
    crossing_free: bool
    violations: Tuple[Violation, ...]
    warnings: Tuple[str, ...]


def check_embedding(ls: LineSet, t: Tree, asg: Assignment,
                    emb: Embedding) -> CheckReport:
    """Exact crossing-free verdict.

    The relative interior of every edge must avoid every other edge and
    every vertex point; contact between tree-adjacent edges is permitted
    only at their shared endpoint.  Vertices sitting on arrangement
    intersection points, or edges passing through one, are flagged as
    warnings (they break the standing perturbation assumptions without
    making the drawing invalid)."""
    asg.check_bijection(t.n)
    if len(emb.pos) != t.n:
        raise SizeMismatch("embedding size differs from the tree")
    pts = [emb.point_of(ls, asg, v) for v in range(t.n)]
    violations: List[Violation] = []
    warnings: List[str] = []

    seen: Dict[Point, int] = {}
    for v, p in enumerate(pts):
        if p in seen:
            violations.append(Violation(ViolationKind.COINCIDENT_VERTICES,
                                        (seen[p], v)))
        else:
            seen[p] = v

    segs = [Segment(pts[u], pts[v]) for u, v in t.edges
            if pts[u] != pts[v]]
    edge_list = [e for e in t.edges if pts[e[0]] != pts[e[1]]]

    for a in range(len(segs)):
        for b in range(a + 1, len(segs)):
            shared = set(edge_list[a]) & set(edge_list[b])
            rel = segments_intersect(segs[a], segs[b])
            if rel == SegmentRelation.DISJOINT:
                continue
            if rel == SegmentRelation.PROPER_CROSS:
                violations.append(Violation(ViolationKind.PROPER_CROSS,
                                            (a, b)))
            elif rel == SegmentRelation.OVERLAP:
                violations.append(Violation(ViolationKind.OVERLAP, (a, b)))
            elif rel == SegmentRelation.TOUCH_ENDPOINT_ENDPOINT:
                if not shared:
                    violations.append(Violation(ViolationKind.TOUCH, (a, b)))
            else:
                violations.append(Violation(ViolationKind.TOUCH, (a, b)))

    for v, p in enumerate(pts):
        for k, (u, w) in enumerate(edge_list):
            if v in (u, w):
                continue
            s = segs[k]
            if orientation_zero_on(s, p):
                violations.append(Violation(ViolationKind.VERTEX_ON_EDGE,
                                            (v, k)))

    inter = set(ls.intersection_points())
    for v, p in enumerate(pts):
        if p in inter:
            warnings.append(f"vertex {v} sits on an arrangement "
                            f"intersection point")
    for k, s in enumerate(segs):
        for q in inter:
            if q not in (s.p, s.q) and orientation_zero_on(s, q):
                warnings.append(f"edge {edge_list[k]} passes through an "
                                f"arrangement intersection point")
                break

    return CheckReport(not violations, tuple(violations), tuple(warnings))


def orientation_zero_on(s: Segment, p: Point) -> bool:
    """Whether p lies on the closed segment s."""
    d = (s.q.x - s.p.x) * (p.y - s.p.y) - (s.q.y - s.p.y) * (p.x - s.p.x)
    if d != 0:
        return False
    return (min(s.p.x, s.q.x) <= p.x <= max(s.p.x, s.q.x)
            and min(s.p.y, s.q.y) <= p.y <= max(s.p.y, s.q.y))


def candidate_positions(ls: LineSet, line_id: int,
                        refine: int) -> List[Fraction]:
    """Discretized x-positions on a line: ``refine`` equally spaced rational
    points strictly inside each finite interval between consecutive
    intersection abscissas, plus one sentinel beyond each extreme.  Never
    returns a breakpoint."""
    if refine < 1:
        raise EmbedError("refine must be >= 1")
    from .lineset import intersection_order
    xs = [pt.x for _, pt in intersection_order(ls, line_id)]
    out: List[Fraction] = [xs[0] - 1]
    for x0, x1 in zip(xs, xs[1:]):
        step = (x1 - x0) / (refine + 1)
        out.extend(x0 + k * step for k in range(1, refine + 1))
    out.append(xs[-1] + 1)
    return out


@dataclass(frozen=True)
class SolveResult:
    found: bool
    embedding: Optional[Embedding]
    nodes: int
    restarts: int


class _Placer:
    """Incremental embedding state with exact conflict checks."""

    def __init__(self, ls: LineSet, t: Tree, asg: Assignment):
        self.ls = ls
        self.t = t
        self.asg = asg
        self.parent = t.parent_of()
        self.points: Dict[int, Point] = {}
        self.segs: List[Tuple[int, Segment]] = []   # (child vertex, segment)

    def can_place(self, v: int, x: Fraction) -> Optional[Point]:
        p = self.ls.line(self.asg.line_of(v)).point_at(x)
        if p in self.points.values():
            return None
        new_seg = None
        if v in self.parent and self.parent[v] in self.points:
            pp = self.points[self.parent[v]]
            if pp == p:
                return None
            new_seg = Segment(pp, p)
        # the new vertex must avoid existing edges entirely
        for _, s in self.segs:
            if orientation_zero_on(s, p):
                return None
        if new_seg is not None:
            # existing vertices must avoid the new edge's relative interior
            for w, q in self.points.items():
                if w == self.parent[v]:
                    continue
                if orientation_zero_on(new_seg, q):
                    return None
            for child, s in self.segs:
                shared = {child, self.parent.get(child)} & \
                         {v, self.parent[v]}
                rel = segments_intersect(new_seg, s)
                if rel == SegmentRelation.DISJOINT:
                    continue
                if rel == SegmentRelation.TOUCH_ENDPOINT_ENDPOINT and shared:
                    continue
                return None
        return p

    def place(self, v: int, x: Fraction, p: Point) -> None:
        self.points[v] = p
        if v in self.parent and self.parent[v] in self.points:
            self.segs.append((v, Segment(self.points[self.parent[v]], p)))

    def unplace(self, v: int) -> None:
        del self.points[v]
        if self.segs and self.segs[-1][0] == v:
            self.segs.pop()


def solve(ls: LineSet, t: Tree, asg: Assignment, refine: int,
          budget: int, seed: int) -> SolveResult:
    """Search for a crossing-free embedding respecting the assignment.

    Backtracking over vertices in root-first BFS order through the
    discretized candidate positions, then up to ``budget`` randomized
    continuous restarts.  Found embeddings are re-verified exactly;
    NotFound only reports budget exhaustion, never non-embeddability."""
    if len(ls) != t.n:
        raise SizeMismatch(f"{len(ls)} lines for a tree on {t.n} vertices")
    asg.check_bijection(t.n)
    cand = {v: candidate_positions(ls, asg.line_of(v), refine)
            for v in range(t.n)}
    order = sorted(t.bfs_order(), key=lambda v: (_depth(t, v),
                                                 len(cand[v]), v))
    placer = _Placer(ls, t, asg)
    nodes = 0

    def backtrack(k: int) -> Optional[Dict[int, Fraction]]:
        nonlocal nodes
        if k == len(order):
            return {}
        v = order[k]
        for x in cand[v]:
            nodes += 1
            p = placer.can_place(v, x)
            if p is None:
                continue
            placer.place(v, x, p)
            rest = backtrack(k + 1)
            if rest is not None:
                rest[v] = x
                return rest
            placer.unplace(v)
        return None

    sol = backtrack(0)
    restarts = 0
    if sol is None:
        rng = np.random.default_rng(seed)
        breakpoints = {v: sorted(pt.x for _, pt in
                                 _iorder(ls, asg.line_of(v)))
                       for v in range(t.n)}
        while sol is None and restarts < budget:
            restarts += 1
            sol = _random_attempt(placer, order, breakpoints, rng)

    if sol is None:
        return SolveResult(False, None, nodes, restarts)
    emb = Embedding(tuple(sol[v] for v in range(t.n)))
    report = check_embedding(ls, t, asg, emb)
    assert report.crossing_free, "solver produced an invalid embedding"
    return SolveResult(True, emb, nodes, restarts)


def _iorder(ls: LineSet, line_id: int):
    from .lineset import intersection_order
    return intersection_order(ls, line_id)


def _depth(t: Tree, v: int) -> int:
    parent = t.parent_of()
    d = 0
    while v != t.root:
        v = parent[v]
        d += 1
    return d


_DENOM = 9973      # prime denominator keeps random rationals off breakpoints


def _random_attempt(placer: _Placer, order: Sequence[int],
                    breakpoints: Dict[int, List[Fraction]], rng
                    ) -> Optional[Dict[int, Fraction]]:
    """One greedy randomized pass: sample each vertex position in order,
    with a few retries per vertex before giving up on the pass."""
    placed: List[int] = []
    sol: Dict[int, Fraction] = {}
    for v in order:
        bps = breakpoints[v]
        lo, hi = bps[0] - 2, bps[-1] + 2
        ok = False
        for _ in range(20):
            num = int(rng.integers(0, _DENOM * 1000))
            x = lo + (hi - lo) * Fraction(num, _DENOM * 1000)
            if x in bps:
                continue
            p = placer.can_place(v, x)
            if p is not None:
                placer.place(v, x, p)
                placed.append(v)
                sol[v] = x
                ok = True
                break
        if not ok:
            for w in reversed(placed):
                placer.unplace(w)
            return None
    for w in reversed(placed):
        placer.unplace(w)
    return sol


@dataclass(frozen=True)
class ScanReport:
    total: int
    found: Tuple[Tuple[int, ...], ...]
    candidates: Tuple[Tuple[int, ...], ...]    # NotFound iotas, NOT proofs

    @property
    def all_found(self) -> bool:
        return not self.candidates


def scan_universality(ls: LineSet, t: Tree, refine: int, budget: int,
                      seed: int = 0, force: bool = False) -> ScanReport:
    """Run solve over every bijection of vertices to lines.

    NotFound entries are candidate witnesses only; the solver cannot prove
    non-support."""
    if len(ls) != t.n:
        raise SizeMismatch(f"{len(ls)} lines for a tree on {t.n} vertices")
    if t.n > 7 and not force:
        raise TooLarge(f"{t.n}! bijections; pass force to run anyway")
    found: List[Tuple[int, ...]] = []
    candidates: List[Tuple[int, ...]] = []
    for perm in itertools.permutations(range(1, t.n + 1)):
        asg = Assignment(perm)
        res = solve(ls, t, asg, refine, budget, seed)
        (found if res.found else candidates).append(perm)
    return ScanReport(len(found) + len(candidates),
                      tuple(found), tuple(candidates))


# ---------------------------------------------------------------------------
# path descriptors (combinatorial types, color types, doors)


@dataclass(frozen=True)
class CombTuple:
    a: int
    b: int
    enter: int    # hull side label crossed on entry, 0 when starting inside
    exit: int     # hull side label crossed on exit, 0 when ending inside


def comb_type(ls: LineSet, cc: ColorClasses, seg: Segment,
              hulls: Optional[Dict[RegionIndex, RegionHull]] = None
              ) -> List[CombTuple]:
    """The sequence of region hulls a segment traverses from p to q, with
    entry/exit side labels; traversals are ordered along the segment (by
    the midpoint of each clipped parameter interval)."""
    for q in ls.intersection_points():
        if orientation_zero_on(seg, q):
            raise DegenerateContact("segment touches an arrangement "
                                    "intersection point")
    if hulls is None:
        hulls = {r: region_hull(ls, cc, r) for r in all_region_indices(cc)}
    visits = []
    for r, h in hulls.items():
        iv = h.clip_parameter_interval(seg)
        if iv is None:
            continue
        t_lo, t_hi = iv
        enter = 0 if t_lo == 0 else h.side_label_at(_param_point(seg, t_lo))
        leave = 0 if t_hi == 1 else h.side_label_at(_param_point(seg, t_hi))
        visits.append(((t_lo + t_hi) / 2, t_lo,
                       CombTuple(r.a, r.b, enter, leave)))
    visits.sort(key=lambda v: (v[0], v[1], (v[2].a, v[2].b)))
    return [v[2] for v in visits]


def _param_point(seg: Segment, t: Fraction) -> Point:
    return Point(seg.p.x + t * (seg.q.x - seg.p.x),
                 seg.p.y + t * (seg.q.y - seg.p.y))


def color_type(t: Tree, asg: Assignment, cc: ColorClasses,
               path: Sequence[int]) -> Tuple[int, ...]:
    """Class ids of the lines assigned along a root-ward directed path."""
    edges = set(t.edges)
    for u, v in zip(path, path[1:]):
        if (u, v) not in edges:
            raise NotAPath(f"({u},{v}) is not a directed tree edge")
    return tuple(cc.class_of(asg.line_of(v)) for v in path)


@dataclass(frozen=True)
class PathDescriptor:
    visited_regions: Tuple[RegionIndex, ...]
    entry_points: Tuple[Tuple[Point, ...], ...]   # one sequence per path
    doors: Tuple[Tuple[Point, ...], ...]          # convex hulls per entry


def path_descriptor(ls: LineSet, cc: ColorClasses, asg: Assignment,
                    emb: Embedding, t: Tree,
                    paths: Sequence[Sequence[int]]) -> PathDescriptor:
    """Descriptor of a uniform family of embedded directed paths sharing a
    start vertex: the common visited-region sequence (revisits counted),
    each path's region entry points (0th = the start vertex point), and the
    doors (convex hulls of the i-th entry points across the family)."""
    if not paths:
        raise EmbedError("need at least one path")
    starts = {p[0] for p in paths}
    if len(starts) != 1:
        raise EmbedError("paths must share their start vertex")
    hulls = {r: region_hull(ls, cc, r) for r in all_region_indices(cc)}

    region_seqs: List[List[RegionIndex]] = []
    entry_seqs: List[List[Point]] = []
    for path in paths:
        regions, entries = _walk_path(ls, cc, asg, emb, t, path, hulls)
        region_seqs.append(regions)
        entry_seqs.append(entries)
    for seq in region_seqs[1:]:
        if seq != region_seqs[0]:
            raise NonUniform("paths visit different region sequences")
    doors = tuple(tuple(convex_hull([entries[i] for entries in entry_seqs]))
                  for i in range(len(entry_seqs[0])))
    return PathDescriptor(tuple(region_seqs[0]),
                          tuple(tuple(e) for e in entry_seqs), doors)


def _walk_path(ls: LineSet, cc: ColorClasses, asg: Assignment,
               emb: Embedding, t: Tree, path: Sequence[int],
               hulls: Dict[RegionIndex, RegionHull]
               ) -> Tuple[List[RegionIndex], List[Point]]:
    color_type(t, asg, cc, path)    # path validity; result unused
    start_pt = emb.point_of(ls, asg, path[0])
    start_region = region_of(ls, cc, asg.line_of(path[0]),
                             emb.pos[path[0]])
    regions = [start_region]
    entries = [start_pt]
    for u, v in zip(path, path[1:]):
        seg = Segment(emb.point_of(ls, asg, u), emb.point_of(ls, asg, v))
        for ct in comb_type(ls, cc, seg, hulls):
            r = RegionIndex(ct.a, ct.b)
            if ct.enter == 0 and r == regions[-1]:
                continue       # still inside the region we were already in
            regions.append(r)
            h = hulls[r]
            iv = h.clip_parameter_interval(seg)
            entries.append(_param_point(seg, iv[0]))
    return regions, entries


# ---------------------------------------------------------------------------
# the theorem's tree and assignment shape


def build_theorem_tree(d: int, delta: int) -> Tree:
    """The complete delta-ary rooted tree of depth d with its last leaf
    removed; vertex ids follow breadth-first order from the root."""
    if d < 1 or delta < 1:
        raise EmbedError("need depth >= 1 and arity >= 1")
    full = (delta ** (d + 1) - 1) // (delta - 1) if delta > 1 else d + 1
    n = full - 1
    edges = []
    for v in range(1, n):
        edges.append(((v - 1) // delta, v))
    return Tree(n, 0, tuple(edges))


def build_iota(t: Tree, ls: LineSet, cc: ColorClasses, seed: int
               ) -> Assignment:
    """A seeded assignment in the theorem's shape: the root takes line 1,
    and every internal vertex sends exactly delta/c children into each
    color class (one class-1 child short at the deficient vertex, which
    accounts for the root's own line)."""
    if t.n != len(ls) or cc.n != t.n:
        raise SizeMismatch("tree, line set and color classes disagree")
    children = t.children_of()
    delta = max(len(ch) for ch in children.values())
    if delta % cc.c != 0:
        raise DivisibilityError(f"c={cc.c} does not divide delta={delta}")
    per_class = delta // cc.c
    rng = np.random.default_rng(seed)
    pool: Dict[int, List[int]] = {
        k: [i for i in cc.ids_of_class(k)] for k in range(1, cc.c + 1)}
    pool[cc.class_of(1)].remove(1)
    iota: Dict[int, int] = {t.root: 1}
    for v in t.bfs_order():
        ch = sorted(children[v])
        if not ch:
            continue
        quota = {k: per_class for k in range(1, cc.c + 1)}
        if len(ch) == delta - 1:
            quota[1] -= 1       # the deficient vertex lost a class-1 child
        elif len(ch) != delta:
            raise SizeMismatch("tree is not a complete delta-ary tree "
                               "missing one leaf")
        ch = list(ch)
        rng.shuffle(ch)
        k = 1
        for w in ch:
            while quota[k] == 0:
                k += 1
            quota[k] -= 1
            picks = pool[k]
            w_line = picks.pop(int(rng.integers(0, len(picks))))
            iota[w] = w_line
    return Assignment(tuple(iota[v] for v in range(t.n)))
