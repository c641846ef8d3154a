"""Combinatorial extraction: monochromatic paths in the complete 3-uniform
hypergraph and the monotone / doubling angle-gap line subsets they yield.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .geometry import GapClass, angle_gap, compare_angle_gap
from .lineset import LineSet, LineSetError


class Color(enum.Enum):
    RED = "red"
    BLUE = "blue"


class Direction(enum.Enum):
    NON_DECREASING = "non_decreasing"
    NON_INCREASING = "non_increasing"


class Variant(enum.Enum):
    LOWER = "lower"   # gap(j, j+1) >= gap(1, j)
    UPPER = "upper"   # gap(j-1, j) >= gap(j, k)


class ChainTooShort(LineSetError):
    pass


@dataclass
class TripleColoring:
    """A total 2-coloring of the vertex triples {i<j<k} of [n]."""

    n: int
    color: Dict[Tuple[int, int, int], Color]

    def __post_init__(self):
        expected = self.n * (self.n - 1) * (self.n - 2) // 6
        if len(self.color) != expected:
            raise ValueError(f"coloring must cover all {expected} triples")

    def of(self, i: int, j: int, k: int) -> Color:
        return self.color[(i, j, k)]


@dataclass(frozen=True)
class HyperPath:
    """Increasing vertex sequence whose consecutive triples share one color."""

    vertices: Tuple[int, ...]
    color: Color

    def __len__(self) -> int:
        return len(self.vertices)

    def check(self, tc: TripleColoring) -> bool:
        v = self.vertices
        return all(tc.of(v[j], v[j + 1], v[j + 2]) == self.color
                   for j in range(len(v) - 2))


@dataclass(frozen=True)
class MonotoneGapChain:
    ids: Tuple[int, ...]
    direction: Direction


@dataclass(frozen=True)
class DoublingChain:
    ids: Tuple[int, ...]
    variant: Variant


def mono_path_bound(n: int) -> int:
    """Largest k with C(2k-4, k-2) + 1 <= n: the Erdos-Szekeres-recursion
    guarantee on monochromatic path size."""
    if n < 3:
        raise ValueError("need n >= 3")
    k = 3
    while math.comb(2 * (k + 1) - 4, (k + 1) - 2) + 1 <= n:
        k += 1
    return k


def longest_mono_path(tc: TripleColoring) -> HyperPath:
    """Longest monochromatic path via a dynamic program over ordered vertex
    pairs; ties broken toward the lexicographically smallest sequence."""
    n = tc.n
    if n < 3:
        raise ValueError("need n >= 3")
    # best[(i, j, color)] = length of the longest path of that color ending
    # with the consecutive vertices i < j
    best: Dict[Tuple[int, int, Color], int] = {}
    parent: Dict[Tuple[int, int, Color], Optional[int]] = {}
    for color in Color:
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                best[(i, j, color)] = 2
                parent[(i, j, color)] = None
    for j in range(1, n + 1):
        for k in range(j + 1, n + 1):
            for i in range(1, j):
                color = tc.of(i, j, k)
                cand = best[(i, j, color)] + 1
                if cand > best[(j, k, color)]:
                    best[(j, k, color)] = cand
                    parent[(j, k, color)] = i
    top = max(best.values())
    if top < 3:
        # no extension happened (impossible for n >= 3, kept defensive)
        raise AssertionError("DP failed to build a single triple")
    ends = [key for key, v in best.items() if v == top]
    j, k, color = min(
        ends, key=lambda key: (_reconstruct(parent, key), key[2].value))
    verts = _reconstruct(parent, (j, k, color))
    return HyperPath(tuple(verts), color)


def _reconstruct(parent, key) -> List[int]:
    j, k, color = key
    seq = [k, j]
    while parent[(seq[-1], seq[-2], color)] is not None:
        seq.append(parent[(seq[-1], seq[-2], color)])
    seq.reverse()
    return seq


def color_by_gaps(ls: LineSet) -> TripleColoring:
    """Red iff the later gap is strictly smaller than the earlier one:
    gap(i2, i3) < gap(i1, i2); Blue for >=."""
    n = len(ls)
    if n < 3:
        raise ValueError("need at least 3 lines")
    # all O(n^3) triple comparisons reuse the O(n^2) pairwise gap keys
    key: Dict[Tuple[int, int], Tuple] = {}
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            key[(i, j)] = angle_gap(ls.line(i), ls.line(j))._key()
    color: Dict[Tuple[int, int, int], Color] = {}
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            earlier = key[(i, j)]
            for k in range(j + 1, n + 1):
                color[(i, j, k)] = (Color.RED if key[(j, k)] < earlier
                                    else Color.BLUE)
    return TripleColoring(n, color)


def extract_monotone_gaps(ls: LineSet) -> MonotoneGapChain:
    """Subset of lines whose consecutive angle gaps are monotone, found as a
    monochromatic path of the gap coloring."""
    tc = color_by_gaps(ls)
    path = longest_mono_path(tc)
    direction = (Direction.NON_INCREASING if path.color == Color.RED
                 else Direction.NON_DECREASING)
    chain = MonotoneGapChain(path.vertices, direction)
    assert check_monotone(ls, chain)
    return chain


def check_monotone(ls: LineSet, chain: MonotoneGapChain) -> bool:
    ids = chain.ids
    want = -1 if chain.direction == Direction.NON_INCREASING else 1
    for a, b, c in zip(ids, ids[1:], ids[2:]):
        cmp = compare_angle_gap((ls.line(b), ls.line(c)),
                                (ls.line(a), ls.line(b)))
        if cmp == -want:
            return False
    return True


def check_doubling(ls: LineSet, chain: DoublingChain) -> bool:
    """The doubling inequalities plus the span-below-right-angle condition."""
    ids = chain.ids
    if len(ids) < 3:
        return False
    span = angle_gap(ls.line(ids[0]), ls.line(ids[-1]))
    if span.cls != GapClass.ACUTE:
        return False
    for j in range(1, len(ids) - 1):
        if chain.variant == Variant.LOWER:
            later = (ls.line(ids[j]), ls.line(ids[j + 1]))
            earlier = (ls.line(ids[0]), ls.line(ids[j]))
        else:
            later = (ls.line(ids[j - 1]), ls.line(ids[j]))
            earlier = (ls.line(ids[j]), ls.line(ids[-1]))
        if compare_angle_gap(later, earlier) < 0:
            return False
    return True


def extract_doubling(ls: LineSet) -> DoublingChain:
    """Chain with gaps growing at least as fast as the total so far (or the
    mirror condition), taken as the power-of-two subsequence of a monotone
    chain of the majority slope-sign class."""
    n = len(ls)
    if n < 3:
        raise ValueError("need at least 3 lines")
    neg = [l.id for l in ls if l.slope < 0]
    pos = [l.id for l in ls if l.slope >= 0]
    majority = neg if len(neg) >= len(pos) else pos
    if len(majority) < 3:
        raise ChainTooShort("majority sign class below 3 lines")
    sub = ls.subset(majority)
    back = {k + 1: majority[k] for k in range(len(majority))}

    chain = extract_monotone_gaps(sub)
    m = len(chain.ids)
    if chain.direction == Direction.NON_DECREASING:
        picks = _doubling_indices(m)
        variant = Variant.LOWER
    else:
        picks = [m - 1 - i for i in reversed(_doubling_indices(m))]
        variant = Variant.UPPER
    ids = tuple(back[chain.ids[i]] for i in picks)
    if len(ids) < 3:
        raise ChainTooShort(f"doubling subsequence has {len(ids)} lines")
    result = DoublingChain(ids, variant)
    assert check_doubling(ls, result)
    return result


def _doubling_indices(m: int) -> List[int]:
    """0-based indices 2^0-1, 2^1-1, ..., capped below m."""
    out = []
    p = 1
    while p <= m:
        out.append(p - 1)
        p *= 2
    return out
