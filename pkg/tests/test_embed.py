"""Embedding verification, backtracking search, and path descriptors."""

from fractions import Fraction

import pytest

from treelines.geometry import DegenerateContact, Line, Point, Segment, scalar
from treelines.lineset import (
    ColorClasses,
    RegionIndex,
    all_region_indices,
    intersection_order,
    region_hull,
    verify_general_position,
)
from treelines.embed import (
    Assignment,
    CombTuple,
    DivisibilityError,
    EmbedError,
    Embedding,
    NotAPath,
    NonUniform,
    SizeMismatch,
    TooLarge,
    Tree,
    ViolationKind,
    build_iota,
    build_theorem_tree,
    candidate_positions,
    check_embedding,
    color_type,
    comb_type,
    path_descriptor,
    path_tree,
    scan_universality,
    solve,
    star_tree,
)

from conftest import random_lines


@pytest.fixture(scope="module")
def four_lines():
    # y = -x, y = 1, y = x, y = 3x - 1
    return verify_general_position(
        [Line(scalar(-1), scalar(0)), Line(scalar(0), scalar(-1)),
         Line(scalar(1), scalar(0)), Line(scalar(3), scalar(1))])


PATH4 = path_tree(4)
ASG4 = Assignment((1, 3, 2, 4))


def _emb(*xs):
    return Embedding(tuple(Fraction(x) for x in xs))


def test_tree_validation():
    with pytest.raises(EmbedError):
        Tree(3, 0, ((0, 1),))                    # too few edges
    with pytest.raises(EmbedError):
        Tree(3, 0, ((0, 1), (0, 1)))             # duplicate child
    with pytest.raises(EmbedError):
        Tree(4, 0, ((0, 1), (1, 2), (3, 2)))     # two parents for vertex 2
    t = path_tree(4)
    assert t.bfs_order() == [0, 1, 2, 3]
    assert star_tree(4).children_of()[0] == [1, 2, 3]


def test_tree_validation_vs_networkx(rng):
    """Random parent arrays accepted by Tree are exactly those whose edge
    set is a tree rooted at 0 per networkx."""
    import networkx as nx
    for _ in range(300):
        n = int(rng.integers(2, 9))
        parents = [int(rng.integers(0, n)) for _ in range(1, n)]
        edges = tuple((p, v) for v, p in enumerate(parents, 1))
        g = nx.Graph(edges)
        g.add_nodes_from(range(n))
        want = nx.is_tree(g)
        try:
            Tree(n, 0, edges)
            got = True
        except EmbedError:
            got = False
        assert got == want, edges


def test_check_crossing_free(four_lines):
    rep = check_embedding(four_lines, PATH4, ASG4,
                          _emb(-2, 2, 0, Fraction(1, 3)))
    assert rep.crossing_free
    assert rep.violations == ()
    assert rep.warnings == ()


def test_check_proper_cross(four_lines):
    rep = check_embedding(four_lines, PATH4, ASG4, _emb(-2, 2, 0, 2))
    assert not rep.crossing_free
    kinds = {v.kind for v in rep.violations}
    assert ViolationKind.PROPER_CROSS in kinds


def test_check_touch_and_vertex_on_edge(four_lines):
    # vertex 3 at (1, 2) sits on the interior of edge 0-1
    rep = check_embedding(four_lines, PATH4, ASG4, _emb(-2, 2, 0, 1))
    assert not rep.crossing_free
    kinds = {v.kind for v in rep.violations}
    assert ViolationKind.VERTEX_ON_EDGE in kinds
    assert ViolationKind.TOUCH in kinds


def test_check_coincident_vertices(four_lines):
    # l1 and l3 meet at the origin
    rep = check_embedding(four_lines, PATH4, ASG4, _emb(0, 0, 0, 2))
    assert not rep.crossing_free
    kinds = {v.kind for v in rep.violations}
    assert ViolationKind.COINCIDENT_VERTICES in kinds
    assert any("intersection point" in w for w in rep.warnings)


def test_check_shared_endpoint_allowed(four_lines):
    # consecutive path edges share a vertex; that contact is not a violation
    rep = check_embedding(four_lines, PATH4, ASG4,
                          _emb(-2, 2, 0, Fraction(1, 3)))
    assert rep.crossing_free


def test_check_size_mismatch(four_lines):
    with pytest.raises(SizeMismatch):
        check_embedding(four_lines, PATH4, ASG4, _emb(0, 1))


def test_candidate_positions_counts(four_lines):
    three = verify_general_position(
        [Line(scalar(-1), scalar(0)), Line(scalar(0), scalar(-1)),
         Line(scalar(1), scalar(0))])
    assert len(candidate_positions(three, 1, 1)) == 3
    assert len(candidate_positions(three, 1, 4)) == 6
    # four lines: three breakpoints per line, two interior intervals
    assert len(candidate_positions(four_lines, 2, 2)) == 6
    xs = [p.x for _, p in intersection_order(four_lines, 1)]
    assert not set(candidate_positions(four_lines, 1, 3)) & set(xs)


def test_solve_and_verify(four_lines):
    res = solve(four_lines, PATH4, ASG4, refine=3, budget=200, seed=1)
    assert res.found
    rep = check_embedding(four_lines, PATH4, ASG4, res.embedding)
    assert rep.crossing_free


def test_scan_universality_small(four_lines, rng):
    three = random_lines(rng, 3)
    report = scan_universality(three, path_tree(3), refine=2, budget=50)
    assert report.total == 6
    assert report.all_found
    report4 = scan_universality(four_lines, star_tree(4), refine=3,
                                budget=200)
    assert report4.total == 24
    assert report4.all_found


def test_scan_guards(four_lines, rng):
    with pytest.raises(SizeMismatch):
        scan_universality(four_lines, path_tree(3), 2, 10)
    big = random_lines(rng, 8)
    with pytest.raises(TooLarge):
        scan_universality(big, path_tree(8), 1, 1)


def test_comb_type_single_region(four_lines):
    cc = ColorClasses(2, 4)
    # a short segment in the left wedge between l1 and l2 stays in R_{1,1}
    seg = Segment(Point(Fraction(-50), Fraction(30)),
                  Point(Fraction(-49), Fraction(30)))
    out = comb_type(four_lines, cc, seg)
    assert out == [CombTuple(1, 1, 0, 0)]


def test_comb_type_reversal_symmetry(four_lines, rng):
    cc = ColorClasses(2, 4)
    hulls = {r: region_hull(four_lines, cc, r)
             for r in all_region_indices(cc)}
    done = 0
    while done < 30:
        c = [Fraction(int(v), 7) for v in rng.integers(-80, 80, size=4)]
        if (c[0], c[1]) == (c[2], c[3]):
            continue
        seg = Segment(Point(c[0], c[1]), Point(c[2], c[3]))
        rev = Segment(seg.q, seg.p)
        try:
            fwd = comb_type(four_lines, cc, seg, hulls)
            bwd = comb_type(four_lines, cc, rev, hulls)
        except DegenerateContact:
            continue
        done += 1
        assert bwd == [CombTuple(t.a, t.b, t.exit, t.enter)
                       for t in reversed(fwd)]


def test_comb_type_degenerate(four_lines):
    cc = ColorClasses(2, 4)
    seg = Segment(Point(Fraction(-5), Fraction(0)),
                  Point(Fraction(5), Fraction(0)))   # through the origin
    with pytest.raises(DegenerateContact):
        comb_type(four_lines, cc, seg)


def test_color_type(four_lines):
    cc = ColorClasses(2, 4)
    assert color_type(PATH4, ASG4, cc, [0, 1, 2, 3]) == (1, 2, 1, 2)
    with pytest.raises(NotAPath):
        color_type(PATH4, ASG4, cc, [0, 2])
    with pytest.raises(NotAPath):
        color_type(PATH4, ASG4, cc, [1, 0])        # wrong direction


def test_path_descriptor_two_paths(four_lines):
    cc = ColorClasses(2, 4)
    star = star_tree(4)
    emb = _emb(-40, 30, 35, 40)
    desc = path_descriptor(four_lines, cc, ASG4, emb, star,
                           [[0, 1], [0, 2]])
    assert len(desc.entry_points) == 2
    for seq in desc.entry_points:
        assert len(seq) == len(desc.visited_regions)
    assert len(desc.doors) == len(desc.visited_regions)
    start = emb.point_of(four_lines, ASG4, 0)
    assert desc.doors[0] == (start,)
    assert desc.visited_regions[0] == RegionIndex(1, 1)


def test_path_descriptor_non_uniform(four_lines):
    cc = ColorClasses(2, 4)
    star = star_tree(4)
    # one edge crosses the arrangement, the other stays far outside it
    emb = _emb(-40, 30, Fraction(1, 2), 40)
    with pytest.raises((NonUniform, DegenerateContact)):
        path_descriptor(four_lines, cc, ASG4, emb, star, [[0, 1], [0, 2]])


def test_build_theorem_tree():
    t = build_theorem_tree(1, 2)
    assert t.n == 2 and t.edges == ((0, 1),)
    t = build_theorem_tree(2, 2)
    assert t.n == 6
    assert t.edges == ((0, 1), (0, 2), (1, 3), (1, 4), (2, 5))
    deg = [len(t.children_of()[v]) for v in range(6)]
    assert deg == [2, 2, 1, 0, 0, 0]


def test_build_iota_quotas(rng):
    t = build_theorem_tree(2, 2)
    ls = random_lines(rng, 6)
    cc = ColorClasses(2, 6)
    asg = build_iota(t, ls, cc, seed=7)
    asg.check_bijection(6)
    assert asg.line_of(0) == 1
    children = t.children_of()
    classes = {v: cc.class_of(asg.line_of(v)) for v in range(6)}
    for v in (0, 1):
        assert sorted(classes[w] for w in children[v]) == [1, 2]
    assert [classes[w] for w in children[2]] == [2]   # deficient vertex
    with pytest.raises(DivisibilityError):
        build_iota(build_theorem_tree(2, 3), random_lines(rng, 12),
                   ColorClasses(2, 12), seed=0)
