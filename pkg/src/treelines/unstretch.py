"""The unstretchability pipeline: six-line frames, the three-edge
configuration rules, the sine chain of forced lengths, and a randomized
feasibility oracle that hunts for counterexample configurations.

Configuration checks are exact (rational); only the sine chain uses
high-precision floating arithmetic, with an explicit guard band on its one
final comparison.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, List, Optional, Sequence, Tuple

import mpmath
import numpy as np

from .geometry import (
    GapClass,
    Line,
    Point,
    Segment,
    angle_gap,
    compare_angle_gap,
    convex_hull,
    line_intersection,
    orientation,
    segments_intersect,
    SegmentRelation,
)
from .lineset import CapCup, LineSet, LineSetError, classify_cap_cup
from .ramsey import Variant

DPS = 60                      # working precision (decimal digits)
GUARD_BAND = Fraction(1, 10**9)  # relative guard on the final comparison


class FrameError(ValueError):
    pass


class SpanTooWide(FrameError):
    pass


class NotDoubling(FrameError):
    def __init__(self, j: int):
        super().__init__(f"doubling inequality fails at position {j}")
        self.j = j


class NotCapOrCup(FrameError):
    pass


class HypothesisFail(ValueError):
    """Neither sine ordering holds; the lemma's conclusion is not certified."""


@dataclass(frozen=True)
class SixLineFrame:
    """Six slope-ordered lines forming a cap or cup, with angle span below a
    right angle and doubling gap growth (one of the two inequality
    families)."""

    lines: Tuple[Line, ...]     # ids 1..6 in slope order
    variant: Variant
    cap_cup: CapCup

    def line(self, k: int) -> Line:
        return self.lines[k - 1]

    def apex(self, j: int) -> Point:
        """Intersection of the two lines edge j joins (l_{2j-1}, l_{2j})."""
        return line_intersection(self.line(2 * j - 1), self.line(2 * j))

    def intersection_points(self) -> List[Point]:
        return [line_intersection(self.lines[i], self.lines[j])
                for i in range(6) for j in range(i + 1, 6)]


def validate_frame(ls: LineSet, ids: Sequence[int]) -> SixLineFrame:
    """Check the frame hypotheses exactly and return the validated frame."""
    if len(ids) != 6:
        raise FrameError("a frame needs exactly 6 line ids")
    lines = [ls.line(i) for i in ids]
    if any(a.slope >= b.slope for a, b in zip(lines, lines[1:])):
        raise FrameError("ids must be strictly increasing in slope")
    span = angle_gap(lines[0], lines[5])
    if span.cls != GapClass.ACUTE:
        raise SpanTooWide("extreme angle gap is not acute")

    variant = None
    for cand in (Variant.LOWER, Variant.UPPER):
        bad = _first_doubling_failure(lines, cand)
        if bad is None:
            variant = cand
            break
        if cand == Variant.UPPER:
            raise NotDoubling(bad)
    sub = ls.subset(ids)
    kind = classify_cap_cup(sub)
    if kind == CapCup.NEITHER:
        raise NotCapOrCup("the six lines form neither a cap nor a cup")
    return SixLineFrame(tuple(sub.lines), variant, kind)


def _first_doubling_failure(lines: Sequence[Line],
                            variant: Variant) -> Optional[int]:
    for j in range(2, 6):   # inner positions 2..5 of the 6-chain
        if variant == Variant.LOWER:
            later = (lines[j - 1], lines[j])
            earlier = (lines[0], lines[j - 1])
        else:
            later = (lines[j - 2], lines[j - 1])
            earlier = (lines[j - 1], lines[5])
        if compare_angle_gap(later, earlier) < 0:
            return j
    return None


@dataclass(frozen=True)
class TripleEdgeConfig:
    """Three candidate edges; edge j runs from its endpoint on l_{2j-1} to
    its endpoint on l_{2j}."""

    edges: Tuple[Segment, Segment, Segment]

    def endpoint_on_even(self, j: int) -> Point:
        return self.edges[j - 1].q

    def endpoint_on_odd(self, j: int) -> Point:
        return self.edges[j - 1].p


def config_from_params(frame: SixLineFrame,
                       params: Sequence[Fraction]) -> TripleEdgeConfig:
    """Build a configuration from the six endpoint x-parameters
    (u1, t1, u2, t2, u3, t3): u_j on l_{2j-1}, t_j on l_{2j}."""
    edges = []
    for j in (1, 2, 3):
        u, t = params[2 * (j - 1)], params[2 * (j - 1) + 1]
        edges.append(Segment(frame.line(2 * j - 1).point_at(u),
                             frame.line(2 * j).point_at(t)))
    return TripleEdgeConfig(tuple(edges))


@dataclass(frozen=True)
class ConfigVerdict:
    ok: bool
    # (property, edge index); property is "incidence", "i", "ii", "iii"
    # or "iii-missing" when the reference crossing does not exist
    failures: Tuple[Tuple[str, int], ...] = ()

    @property
    def first(self) -> Optional[Tuple[str, int]]:
        return self.failures[0] if self.failures else None


_NEXT_EDGE = {1: 2, 2: 3, 3: 1}   # j -> j+1 with modulo class 0 written as 3


def _hull_halfplanes(frame: SixLineFrame):
    hull = convex_hull(frame.intersection_points())
    return [(hull[k], hull[(k + 1) % len(hull)]) for k in range(len(hull))]


def _segment_meets_convex(seg: Segment, edges) -> bool:
    """Whether a closed segment meets a closed convex polygon (given as CCW
    edge list), via exact halfplane interval clipping."""
    t_lo, t_hi = Fraction(0), Fraction(1)
    for u, v in edges:
        vp = _cross3(u, v, seg.p)
        vq = _cross3(u, v, seg.q)
        if vp < 0 and vq < 0:
            return False
        if vp == vq:
            continue
        t = vp / (vp - vq)
        if vp < vq:
            t_lo = max(t_lo, t)
        else:
            t_hi = min(t_hi, t)
        if t_lo > t_hi:
            return False
    return True


def _cross3(u: Point, v: Point, p: Point) -> Fraction:
    return (v.x - u.x) * (p.y - u.y) - (v.y - u.y) * (p.x - u.x)


def validate_config(frame: SixLineFrame, cfg: TripleEdgeConfig,
                    skip: FrozenSet[str] = frozenset()) -> ConfigVerdict:
    """Exact check of the three-edge configuration rules.

    (i)   the vertical line through the apex of edge j's line pair meets the
          closed edge strictly below the apex for j in {1, 3} and strictly
          above for j = 2;
    (ii)  each edge avoids the convex hull of the 15 pairwise intersection
          points of the six lines;
    (iii) the endpoint of edge j on l_{2j} lies between the apex and the
          point where l_{2j} crosses the next edge.

    ``skip`` names properties to leave unchecked (diagnostic use only).
    """
    failures: List[Tuple[str, int]] = []
    for j in (1, 2, 3):
        e = cfg.edges[j - 1]
        if not frame.line(2 * j - 1).contains(e.p) or \
                not frame.line(2 * j).contains(e.q):
            failures.append(("incidence", j))
    if failures:
        return ConfigVerdict(False, tuple(failures))

    if "i" not in skip:
        for j in (1, 2, 3):
            e = cfg.edges[j - 1]
            apex = frame.apex(j)
            lo_x, hi_x = sorted((e.p.x, e.q.x))
            if not (lo_x <= apex.x <= hi_x) or lo_x == hi_x:
                failures.append(("i", j))
                continue
            # y of the edge at the apex abscissa
            t = (apex.x - e.p.x) / (e.q.x - e.p.x)
            y = e.p.y + t * (e.q.y - e.p.y)
            below = y < apex.y
            if (j in (1, 3)) != below or y == apex.y:
                failures.append(("i", j))

    if "ii" not in skip:
        hull_edges = _hull_halfplanes(frame)
        for j in (1, 2, 3):
            if _segment_meets_convex(cfg.edges[j - 1], hull_edges):
                failures.append(("ii", j))

    if "iii" not in skip:
        for j in (1, 2, 3):
            ln = frame.line(2 * j)
            nxt = cfg.edges[_NEXT_EDGE[j] - 1]
            vp = nxt.p.y - ln.y_at(nxt.p.x)
            vq = nxt.q.y - ln.y_at(nxt.q.x)
            if vp == 0 or vq == 0 or (vp > 0) == (vq > 0):
                failures.append(("iii-missing", j))
                continue
            t = vp / (vp - vq)
            cross_x = nxt.p.x + t * (nxt.q.x - nxt.p.x)
            apex_x = frame.apex(j).x
            a_x = cfg.endpoint_on_even(j).x
            lo, hi = sorted((apex_x, cross_x))
            if not (lo <= a_x <= hi):
                failures.append(("iii", j))

    return ConfigVerdict(not failures, tuple(failures))


def config_edges_disjoint(cfg: TripleEdgeConfig) -> bool:
    for a in range(3):
        for b in range(a + 1, 3):
            if segments_intersect(cfg.edges[a], cfg.edges[b]) is not \
                    SegmentRelation.DISJOINT:
                return False
    return True


@dataclass(frozen=True)
class ChainValues:
    """The angle and length data of the forced-length chain.

    alpha[0] is pi minus the sum of the others; a[2] (the free length) and
    r[0..2] drive the chain; a, b are the dependent lengths."""

    alpha: Tuple[mpmath.mpf, ...]      # alpha_1 .. alpha_6
    a: Tuple[mpmath.mpf, mpmath.mpf, mpmath.mpf]
    b: Tuple[mpmath.mpf, mpmath.mpf, mpmath.mpf]
    r: Tuple[mpmath.mpf, mpmath.mpf, mpmath.mpf]


def chain_from_parameters(alpha_tail: Sequence, a3, r) -> ChainValues:
    """Synthesize ChainValues from alpha_2..alpha_6, the free length a3 and
    the three r lengths, propagating the forced equations."""
    with mpmath.workdps(DPS):
        tail = [mpmath.mpf(str(x)) for x in alpha_tail]
        if len(tail) != 5:
            raise ValueError("need alpha_2..alpha_6")
        a1 = mpmath.pi - mpmath.fsum(tail)
        alpha = (a1, *tail)
        a3 = mpmath.mpf(str(a3))
        r = tuple(mpmath.mpf(str(x)) for x in r)
        s = [mpmath.sin(x) for x in alpha]
        b3 = s[5] / s[4] * a3
        a2 = b3 - r[1]
        b2 = s[3] / s[2] * a2
        a1_len = b2 - r[0]
        b1 = s[1] / s[0] * a1_len
        return ChainValues(alpha, (a1_len, a2, a3), (b1, b2, b3), r)


def derive_chain(frame: SixLineFrame, cfg: TripleEdgeConfig) -> ChainValues:
    """Angles and lengths of the rotated-edge construction, computed to
    high precision from the exact rational coordinates."""
    with mpmath.workdps(DPS):
        def to_mp(x: Fraction):
            return mpmath.mpf(x.numerator) / mpmath.mpf(x.denominator)

        angles = [mpmath.atan(to_mp(l.slope)) for l in frame.lines]
        tail = [angles[k] - angles[k - 1] for k in range(1, 6)]
        alpha = (mpmath.pi - mpmath.fsum(tail), *tail)

        # B_j: intersection of l_{2j} and l_{2(j+1 mod 3)}
        bpts = [line_intersection(frame.line(2), frame.line(4)),
                line_intersection(frame.line(4), frame.line(6)),
                line_intersection(frame.line(6), frame.line(2))]
        apts = [cfg.endpoint_on_even(j) for j in (1, 2, 3)]

        def dist(p: Point, q: Point):
            return mpmath.hypot(to_mp(p.x - q.x), to_mp(p.y - q.y))

        a = tuple(dist(apts[j], bpts[j]) for j in range(3))
        b = tuple(dist(bpts[j], apts[j - 1]) for j in range(3))
        r = tuple(dist(bpts[j], bpts[(j + 1) % 3]) for j in range(3))
        return ChainValues(alpha, a, b, r)


class Lemma24Result(enum.Enum):
    CONSISTENT = "consistent"
    CONTRADICTION = "contradiction"
    INDETERMINATE = "indeterminate"


def sine_hypothesis_holds(cv: ChainValues) -> bool:
    with mpmath.workdps(DPS):
        s = [mpmath.sin(x) for x in cv.alpha]
        down = all(s[k] >= s[k + 1] for k in range(1, 5)) and s[0] >= s[1]
        up = all(s[k] <= s[k + 1] for k in range(1, 5)) and s[0] >= s[5]
        return down or up


def lemma24_check(cv: ChainValues) -> Lemma24Result:
    """Propagate the forced length chain and test whether the strict gap
    condition b1 - r3 > a3 could hold.  CONTRADICTION means it cannot, which
    the lemma guarantees whenever the sine ordering hypothesis holds."""
    if not sine_hypothesis_holds(cv):
        raise HypothesisFail("no monotone sine ordering with alpha_1 maximal")
    with mpmath.workdps(DPS):
        s = [mpmath.sin(x) for x in cv.alpha]
        a3 = cv.a[2]
        b3 = s[5] / s[4] * a3
        a2 = b3 - cv.r[1]
        b2 = s[3] / s[2] * a2
        a1 = b2 - cv.r[0]
        b1 = s[1] / s[0] * a1
        lhs = b1 - cv.r[2]
        scale = max(abs(lhs), abs(a3), mpmath.mpf(1))
        margin = (lhs - a3) / scale
        guard = mpmath.mpf(GUARD_BAND.numerator) / GUARD_BAND.denominator
        if abs(margin) <= guard:
            return Lemma24Result.INDETERMINATE
        return (Lemma24Result.CONSISTENT if margin > 0
                else Lemma24Result.CONTRADICTION)


# ---------------------------------------------------------------------------
# randomized feasibility search

_PREV = {2: 1, 3: 2, 1: 3}    # edge j carries the betweenness rule of _PREV[j]

# one sampled t-triple is screened at up to 7 candidate u values per edge
_CONFIGS_PER_TRIPLE = 21


def feasibility_search(frame: SixLineFrame, samples: int, seed: int,
                       skip_properties: FrozenSet[str] = frozenset()
                       ) -> Optional[TripleEdgeConfig]:
    """Hunt for a configuration satisfying the three-edge rules.

    The three even-line endpoints (t_1, t_2, t_3) are sampled stratified
    around each apex; given them, the remaining freedom of each edge is its
    odd-line abscissa u_j, and rules (i) and (iii) cut the feasible u_j out
    by sign conditions that change only at a handful of rational
    breakpoints.  The screen therefore tests one u per breakpoint cell
    instead of sampling u blindly, with local refinement of near-feasible
    triples; every screen survivor is re-checked exactly.  Returns the
    first exactly-valid configuration in deterministic (batch, index)
    order, or None once the sample budget is exhausted.
    """
    rng = np.random.default_rng(seed)
    geo = _FrameFloats(frame)
    budget = max(1, samples // _CONFIGS_PER_TRIPLE)
    batch = 20_000
    drawn = 0
    promising = np.empty((3, 0))
    while drawn < budget:
        take = min(batch, budget - drawn)
        drawn += take
        n_refine = min(take // 2, promising.shape[1] * 200)
        t = geo.sample_triples(rng, take - n_refine)
        if n_refine:
            t = np.concatenate(
                [t, geo.perturb_triples(rng, promising, n_refine)], axis=1)
        u, feas_edges = geo.solve_u(t, skip_properties)
        for idx in np.flatnonzero(feas_edges == 3):
            if "ii" not in skip_properties and \
                    geo.clearly_meets_hull(u[:, idx], t[:, idx]):
                continue
            params = []
            for j in (1, 2, 3):
                params.append(Fraction(float(u[j - 1, idx])))
                params.append(Fraction(float(t[j - 1, idx])))
            cfg = config_from_params(frame, params)
            if validate_config(frame, cfg, skip=skip_properties).ok:
                return cfg
        keep = np.argsort(-feas_edges, kind="stable")[:40]
        promising = t[:, keep]
    return None


class _FrameFloats:
    """Float mirror of a frame for the vectorized screening stage."""

    def __init__(self, frame: SixLineFrame):
        self.frame = frame
        self.s = np.array([float(l.slope) for l in frame.lines])
        self.b = np.array([float(l.dual_offset) for l in frame.lines])
        self.apex = np.array([[float(frame.apex(j).x),
                               float(frame.apex(j).y)] for j in (1, 2, 3)])
        pts = np.array([[float(p.x), float(p.y)]
                        for p in frame.intersection_points()])
        self.center = pts.mean(axis=0)
        self.radius = max(1.0, np.max(np.linalg.norm(pts - self.center,
                                                     axis=1)))
        hull = convex_hull(frame.intersection_points())
        self.hull = np.array([[float(p.x), float(p.y)] for p in hull])

    def clearly_meets_hull(self, u, t) -> bool:
        """Float pre-screen of rule (ii): True when some edge cuts well into
        the hull of the 15 crossings, so the exact check cannot pass.
        Borderline cases return False and go to the exact check."""
        m = len(self.hull)
        for j in (1, 2, 3):
            px, py = u[j - 1], self.s[2 * j - 2] * u[j - 1] - self.b[2 * j - 2]
            qx, qy = t[j - 1], self.s[2 * j - 1] * t[j - 1] - self.b[2 * j - 1]
            t_lo, t_hi = 0.0, 1.0
            for e in range(m):
                u0, u1 = self.hull[e], self.hull[(e + 1) % m]
                dx, dy = u1 - u0
                vp = dx * (py - u0[1]) - dy * (px - u0[0])
                vq = dx * (qy - u0[1]) - dy * (qx - u0[0])
                if vp < 0 and vq < 0:
                    t_lo, t_hi = 1.0, 0.0
                    break
                if vp != vq:
                    tt = vp / (vp - vq)
                    if vp < vq:
                        t_lo = max(t_lo, tt)
                    else:
                        t_hi = min(t_hi, tt)
            if t_hi - t_lo > 1e-9:
                return True
        return False

    # -- sampling ----------------------------------------------------------
    def sample_triples(self, rng, n: int) -> np.ndarray:
        """(3, n) even-endpoint abscissas: log-uniform offsets from each
        apex abscissa, either side, over a wide range of scales."""
        if n <= 0:
            return np.empty((3, 0))
        off = 10.0 ** rng.uniform(-4, 2.5, size=(3, n)) * self.radius
        sign = rng.choice([-1.0, 1.0], size=(3, n))
        return self.apex[:, :1] + sign * off

    def perturb_triples(self, rng, base: np.ndarray, n: int) -> np.ndarray:
        """Jitter near-feasible triples, preserving each t's apex side."""
        if base.shape[1] == 0 or n <= 0:
            return np.empty((3, 0))
        picks = rng.integers(0, base.shape[1], size=n)
        off = base[:, picks] - self.apex[:, :1]
        return self.apex[:, :1] + off * np.exp(rng.normal(0.0, 0.5,
                                                          size=(3, n)))

    # -- per-edge feasible-u solving ---------------------------------------
    def solve_u(self, t: np.ndarray, skip: FrozenSet[str]):
        """For each sampled triple, pick a u_j satisfying rules (i) and
        (iii) for each edge where one exists.  Returns the chosen u values
        (3, n) and the per-triple count of satisfiable edges."""
        n = t.shape[1]
        u_out = np.zeros((3, n))
        feas_edges = np.zeros(n, dtype=np.int64)
        for j in (1, 2, 3):
            u, ok = self._solve_edge(j, t, skip)
            u_out[j - 1] = u
            feas_edges += ok
        return u_out, feas_edges

    def _solve_edge(self, j: int, t: np.ndarray, skip: FrozenSet[str]):
        i = _PREV[j]
        ta = t[j - 1]
        tprev = t[i - 1]
        ax, ay = self.apex[j - 1]
        so, bo = self.s[2 * j - 2], self.b[2 * j - 2]
        se, be = self.s[2 * j - 1], self.b[2 * j - 1]
        si, bi = self.s[2 * i - 1], self.b[2 * i - 1]
        axi = self.apex[i - 1, 0]
        ya = se * ta - be

        # rule (i): the edge's height at the apex abscissa, relative to the
        # apex, is sign(c1*u + c0) * sign(ta - u)
        c1 = so * (ta - ax) - ya + ay
        c0 = -bo * (ta - ax) + ya * ax - ay * ta
        # rule (iii): side value of the u endpoint w.r.t. line l_{2i} is
        # d1*u + d0; the crossing abscissa is a ratio of linears in u
        d1 = so - si
        d0 = bi - bo
        v_a = ya - si * ta + bi
        e1 = -v_a + d1 * (ta - tprev)
        e0 = v_a * tprev + d0 * (ta - tprev)

        # u must sit on the far side of the apex from ta (rule (i) needs
        # the apex abscissa inside the edge's x-range)
        side = np.sign(ax - ta)

        def root(a, b):
            with np.errstate(divide="ignore", invalid="ignore"):
                r = np.where(a != 0, -b / np.where(a != 0, a, 1.0), np.nan)
            return r

        roots = np.stack([root(c1, c0), root(d1 * np.ones_like(c0), d0),
                          root(e1, e0),
                          root(d1 * np.ones_like(c0), d0 - v_a)])
        dist = (roots - ax) * side
        dist = np.where(np.isfinite(dist) & (dist > 0), dist, 0.0)
        dist.sort(axis=0)
        mids = np.empty((7, dist.shape[1]))
        prev = np.zeros(dist.shape[1])
        for k in range(4):
            mids[k] = (prev + dist[k]) / 2
            prev = dist[k]
        mids[4] = 2 * dist[3] + self.radius
        mids[5] = self.radius * 1e-3
        mids[6] = self.radius * 1e2
        u_test = ax + side * mids   # (7, n)

        ok = np.ones_like(u_test, dtype=bool)
        if "i" not in skip:
            want = -1.0 if j in (1, 3) else 1.0
            ok &= (c1 * u_test + c0) * (-side) * want > 0
        if "iii" not in skip:
            v_p = d1 * u_test + d0
            ok &= v_p * v_a < 0
            denom = v_p - v_a
            with np.errstate(divide="ignore", invalid="ignore"):
                cx = (-u_test * v_a + v_p * ta) / denom
            lo = np.minimum(axi, cx)
            hi = np.maximum(axi, cx)
            ok &= np.isfinite(cx) & (lo <= tprev) & (tprev <= hi)
        ok &= side != 0
        any_ok = ok.any(axis=0)
        first = np.argmax(ok, axis=0)
        return u_test[first, np.arange(u_test.shape[1])], any_ok
