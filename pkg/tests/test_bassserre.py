import random

import pytest
from hypothesis import given, settings

from abgog.abelian import FgAbGroup, coset_index
from abgog.bassserre import (cover_ball, cover_ball_dot, cover_ball_size, finite_stabilizer_scan,
                             fixes, kernel_action_check, stabilizer_class, stabilizer_generators,
                             tree_ball, tree_ball_dot)
from abgog.gog import GraphOfGroups
from abgog.rationalize import RationalizationContext, phi
from abgog.sampling import baumslag_solitar, gbs_graph, random_element
from abgog.words import GroupWord, VertexLetter, invert
from conftest import graph_from_seed, seeds


def test_bs23_ball_sizes(bs23):
    assert [len(tree_ball(bs23, radius=r).vertices) for r in range(4)] == [1, 6, 26, 106]
    ball = tree_ball(bs23, radius=1)
    assert ball.degree(0) == 5 and not ball.truncated


def test_infinite_index_truncates():
    Z, Z2 = FgAbGroup(1), FgAbGroup(2)
    g = GraphOfGroups.build({"a": Z2, "b": Z}, [("f", "a", "b", Z, [[1], [0]], [[1]])])
    ball = tree_ball(g, radius=1, coset_bound=2)
    assert ball.truncated and ball.degree(0) == 5


@settings(max_examples=25)
@given(seeds)
def test_degree_is_sum_of_indices(seed):
    g = graph_from_seed(seed, max_vertices=3, max_rank=1, extra_edges=1)
    ball = tree_ball(g, radius=1)
    v = ball.vertices[0].vertex
    indices = [coset_index(e.alpha) for e in g.out_edges(v)]
    if all(i is not None for i in indices):
        assert ball.degree(0) == sum(indices)


def test_stabilizer_examples(bs23):
    ball = tree_ball(bs23, radius=1)
    g, v = stabilizer_class(ball, 0)
    assert g.letters == () and v == "v"
    g, v = stabilizer_class(ball, 3)
    assert str(g) == "v[2] e" and v == "v"
    for i in range(len(ball.vertices)):
        for s in stabilizer_generators(ball, i):
            assert fixes(ball, s, i)


@settings(max_examples=20)
@given(seeds)
def test_conjugates_fix_their_vertex(seed):
    rng = random.Random(seed)
    g = graph_from_seed(seed, max_vertices=3, extra_edges=1)
    ball = tree_ball(g, radius=1)
    for i in range(len(ball.vertices)):
        w, v = stabilizer_class(ball, i)
        x = GroupWord(g, (VertexLetter(v, random_element(g.vertices[v], rng)),))
        h = w * x * invert(w)
        assert fixes(ball, h, i)


def test_stabilizer_scan_examples(torsion_graph, bs23):
    ctx = RationalizationContext(bs23)
    scans = finite_stabilizer_scan(ctx, tree_ball(bs23, radius=1))
    assert all(s.ok and s.surviving_rank == 1 and s.torsion_elements == 1 for s in scans)
    assert phi(ctx, GroupWord(bs23, (VertexLetter("v", bs23.vertices["v"].element(1)),))).vec == (1,)
    ctx = RationalizationContext(torsion_graph)
    scans = finite_stabilizer_scan(ctx, tree_ball(torsion_graph, radius=2))
    assert all(s.ok for s in scans)
    byv = {s.graph_vertex: s for s in scans}
    assert byv["x"].surviving_rank == 0 and byv["x"].torsion_elements == 6
    assert byv["w"].surviving_rank == 1 and byv["w"].torsion_elements == 2


def test_kernel_action(bs23):
    ctx = RationalizationContext(bs23)
    rep = kernel_action_check(ctx, tree_ball(bs23, radius=2))
    assert rep.ok and rep.moving_checked > 0 and rep.fiber_pairs_checked > 0


def test_cover_examples(bs23):
    ball = cover_ball(bs23, radius=2)
    assert len(ball.paths) == 5 and ball.acyclic
    tree = gbs_graph("abc", [("x", "a", "b", 1, 1), ("y", "b", "c", 1, 1)])
    cb = cover_ball(tree, "a", radius=4)
    assert len(cb.paths) == 3 and cb.acyclic
    two = gbs_graph(["v"], [("e", "v", "v", 1, 1), ("f", "v", "v", 1, 1)])
    assert len(cover_ball(two, radius=2).paths) == 17


@pytest.mark.parametrize("loops", [1, 2, 3])
def test_cover_matches_regular_tree(loops):
    g = gbs_graph(["v"], [(f"e{i}", "v", "v", 1, 1) for i in range(loops)])
    for r in range(5):
        assert len(cover_ball(g, radius=r).paths) == cover_ball_size(2 * loops, r)


@given(seeds)
def test_cover_always_acyclic(seed):
    g = graph_from_seed(seed)
    assert cover_ball(g, radius=3).acyclic


def test_dot_output(bs23):
    dot = cover_ball_dot(cover_ball(bs23, radius=1))
    assert dot.startswith("graph universal_cover {") and dot.count(" -- ") == 2
    Z, Z2 = FgAbGroup(1), FgAbGroup(2)
    g = GraphOfGroups.build({"a": Z2, "b": Z}, [("f", "a", "b", Z, [[1], [0]], [[1]])])
    assert "style=dashed" in tree_ball_dot(tree_ball(g, radius=1, coset_bound=1))
    assert "dashed" not in tree_ball_dot(tree_ball(bs23, radius=1))


def test_bs_degrees():
    for p, q in [(1, 2), (2, 3), (3, 5)]:
        ball = tree_ball(baumslag_solitar(p, q), radius=2)
        assert ball.degree(0) == p + q
        assert len(ball.vertices) == 1 + (p + q) + (p + q) * (p + q - 1)
