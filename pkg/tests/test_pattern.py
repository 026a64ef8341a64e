import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import internal_by_definition, o_internal_by_definition
from subcount.errors import CapabilityError, PatternError
from subcount.pattern import (
    Anchor,
    iter_spanning_trees,
    make_pattern,
    o_internal_count,
    spanning_tree,
    tree_from_edges,
)


def test_named_patterns():
    tri = make_pattern("clique:3")
    assert (tri.h, tri.edges, tri.root) == (3, ((0, 1), (0, 2), (1, 2)), 0)
    assert make_pattern("edge").edges == ((0, 1),)
    assert make_pattern("path:4").edges == ((0, 1), (1, 2), (2, 3))
    assert make_pattern("star:4").h == 5
    assert len(make_pattern("cycle:5").edges) == 5
    assert make_pattern("path:1").h == 1


def test_anchor_whole_star():
    p = make_pattern("star:4", anchor="vertices:0,1,2,3,4")
    assert p.anchor.size == 5
    assert set(p.anchor.edges) == set(p.edges)


def test_k4_wedge_anchor():
    p = make_pattern([(0, 1), (1, 2), (0, 2), (0, 3), (1, 3), (2, 3)], root=0, anchor="wedge")
    assert p.is_complete() and p.h == 4
    assert p.anchor.vertices == (0, 1, 2)
    assert set(p.anchor.edges) == {(0, 1), (0, 2)}
    assert p.anchor.is_star()


def test_pattern_file(tmp_path):
    f = tmp_path / "h.edges"
    f.write_text("0 1\n1 2\n2 0\n2 3\n")
    p = make_pattern(f"file:{f}:root=2")
    assert p.h == 4 and p.root == 2 and len(p.edges) == 4


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(name_or_edges=[(0, 1), (2, 3)]),
        dict(name_or_edges="clique:3", root=5),
        dict(name_or_edges="path:3", anchor="vertices:1"),     # single vertex must be the root
        dict(name_or_edges="path:3", anchor="wedge"),          # root is an end vertex
        dict(name_or_edges="cycle:2"),
        dict(name_or_edges="blob:3"),
    ],
)
def test_invalid_patterns(kwargs):
    with pytest.raises(PatternError):
        make_pattern(**kwargs)


def test_anchor_edge_must_be_pattern_edge():
    p = make_pattern("path:3")
    with pytest.raises(PatternError):
        p.with_anchor(Anchor((0, 2), ((0, 2),)))


def test_path_tree_is_itself():
    t = spanning_tree(make_pattern("path:3"))
    assert t.edges == ((0, 1), (1, 2))
    assert t.internal_count == 2


def test_star_center_root():
    assert spanning_tree(make_pattern("star:4")).internal_count == 1


def test_triangle_bfs():
    t = spanning_tree(make_pattern("clique:3"), "bfs")
    assert t.edges == ((0, 1), (0, 2))
    assert t.internal_count == 1
    assert internal_by_definition(3, t.edges, 0) == [0]


def test_dfs_differs_from_bfs():
    p = make_pattern("clique:4")
    assert spanning_tree(p, "dfs").edges == ((0, 1), (1, 2), (2, 3))
    assert spanning_tree(p, "bfs").edges == ((0, 1), (0, 2), (0, 3))


def test_min_internal_gate():
    with pytest.raises(CapabilityError, match="bfs"):
        spanning_tree(make_pattern("path:9"), "min_internal")


def test_min_internal_prefers_star():
    # root at a path end of a 4-cycle: bfs gives 0-1, 0-3, 1-2 (two internal)
    p = make_pattern("cycle:4", root=0)
    best = spanning_tree(p, "min_internal")
    assert best.internal_count == 2
    p = make_pattern([(0, 1), (1, 2), (1, 3), (0, 2)], root=1)
    assert spanning_tree(p, "min_internal").internal_count == 1


def test_spanning_tree_count_k4():
    assert len(list(iter_spanning_trees(4, make_pattern("clique:4").edges))) == 16  # Cayley 4^2


def test_o_internal_clique_star():
    for h in range(2, 7):
        p = make_pattern(f"clique:{h}", anchor=f"star:{h - 1}")
        t = spanning_tree(p)
        assert set(t.edges) == set(p.anchor.edges)
        assert o_internal_count(t, p) == 0


def test_o_internal_root_anchor_matches_internal():
    for spec in ("path:3", "path:5", "star:3", "cycle:5", "clique:4"):
        p = make_pattern(spec, anchor="root")
        t = spanning_tree(p)
        assert o_internal_count(t, p) == t.internal_count


def test_o_internal_path_edge():
    p = make_pattern("path:4", anchor="edge")
    t = spanning_tree(p)
    assert o_internal_count(t, p) == 2
    assert [v for v in range(4) if t.o_internal_flags[v]] == o_internal_by_definition(4, t.edges, (0, 1)) == [1, 2]


def test_o_internal_needs_anchor():
    p = make_pattern("path:3")
    with pytest.raises(PatternError):
        o_internal_count(spanning_tree(p), p)


@st.composite
def connected_patterns(draw):
    h = draw(st.integers(1, 6))
    edges = set()
    for v in range(1, h):
        edges.add((draw(st.integers(0, v - 1)), v))
    extra = draw(st.lists(st.tuples(st.integers(0, h - 1), st.integers(0, h - 1)), max_size=8))
    edges |= {(min(a, b), max(a, b)) for a, b in extra if a != b}
    root = draw(st.integers(0, h - 1))
    k = draw(st.integers(1, h))
    anchor = "vertices:" + ",".join(map(str, sorted(draw(st.permutations(range(h)))[:k])))
    if k == 1:
        anchor = "root"
    return make_pattern(sorted(edges), root=root, anchor=anchor, h=h)


@settings(max_examples=150, deadline=None)
@given(connected_patterns())
def test_tree_invariants(p):
    trees = {s: spanning_tree(p, s) for s in ("bfs", "dfs", "min_internal")}
    for t in trees.values():
        assert len(t.edges) == p.h - 1 and set(t.edges) <= set(p.edges)
        tree_from_edges(p, t.edges)  # re-validates spanning + connectivity
        assert [u for u in range(p.h) if t.internal_flags[u]] == internal_by_definition(p.h, t.edges, p.root)
        assert [u for u in range(p.h) if t.o_internal_flags[u]] == o_internal_by_definition(
            p.h, t.edges, p.anchor.vertices
        )
        assert t.internal_count <= p.h and t.o_internal_count <= p.h
        if p.is_tree():
            assert set(t.edges) == set(p.edges)
    assert trees["min_internal"].internal_count <= min(trees["bfs"].internal_count, trees["dfs"].internal_count)
    brute = min(
        len(internal_by_definition(p.h, tr, p.root)) for tr in iter_spanning_trees(p.h, p.edges)
    )
    assert trees["min_internal"].internal_count == brute
