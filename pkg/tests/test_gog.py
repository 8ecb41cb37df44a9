import json

import pytest
from hypothesis import given

from abgog.abelian import AbHom, FgAbGroup
from abgog.gog import (Edge, GraphFormatError, GraphOfGroups, SpanningTree, from_dict, load,
                       maximal_tree, to_dict, validate)
from abgog.sampling import gbs_graph
from conftest import data_path, graph_from_seed, seeds

Z = FgAbGroup(1)


def raw(vertices, edges):
    """Unvalidated graph from (id, from, to, G_e, alpha_from, alpha_to)."""
    half = []
    for eid, u, w, G, a, b in edges:
        half.append(Edge(eid, "~" + eid, u, w, G, AbHom(G, vertices[u], a)))
        half.append(Edge("~" + eid, eid, w, u, G, AbHom(G, vertices[w], b)))
    return GraphOfGroups(vertices, half)


def test_bs23_is_valid(bs23):
    assert validate(bs23).ok
    assert bs23.pairs() == ["e"]
    assert bs23.edges["~e"].alpha.matrix == ((2,),)


def test_zero_map_is_invalid():
    g = raw({"v": Z}, [("e", "v", "v", Z, [[0]], [[2]])])
    rep = validate(g)
    assert not rep.ok and "non-injective" in str(rep)
    with pytest.raises(GraphFormatError):
        load(data_path("bad_zero_map.gog"))


def test_disconnected_is_invalid():
    g = raw({"a": Z, "b": Z}, [])
    assert "disconnected" in str(validate(g))


def test_broken_involution_is_reported():
    e = Edge("e", "~e", "v", "v", Z, AbHom(Z, Z, [[1]]))
    bad = Edge("~e", "x", "v", "v", Z, AbHom(Z, Z, [[1]]))
    assert "involution" in str(validate(GraphOfGroups({"v": Z}, [e, bad])))


def test_tree_examples():
    tri = gbs_graph("abc", [("x", "a", "b", 1, 1), ("y", "b", "c", 1, 1), ("z", "c", "a", 1, 1)])
    T = tri.tree
    assert len(T.oriented) == 2 and len(T.non_tree) == 1
    one = gbs_graph(["v"], [("e", "v", "v", 1, 2)])
    assert one.tree.oriented == () and one.tree.non_tree == ("e",)
    path = gbs_graph("abc", [("x", "a", "b", 1, 1), ("y", "b", "c", 1, 1)])
    assert set(path.tree.oriented) == {"x", "y"} and path.tree.non_tree == ()


def test_geodesic_and_generator_index():
    g = gbs_graph("abc", [("x", "a", "b", 1, 1), ("y", "b", "c", 1, 1), ("z", "a", "a", 1, 1)])
    T = g.tree
    assert T.geodesic("a", "c") == ["x", "y"]
    assert T.geodesic("c", "a") == ["~y", "~x"]
    assert T.geodesic("b", "b") == []
    assert T.generator_index("z") == 1 and T.generator_index("~z") == -1


def test_explicit_tree_choice():
    g = gbs_graph("ab", [("p", "a", "b", 1, 1), ("q", "a", "b", 1, 1)])
    T = SpanningTree.from_pairs(g, ["q"], "a")
    assert T.oriented == ("q",) and T.non_tree == ("p",)
    with pytest.raises(GraphFormatError):
        SpanningTree.from_pairs(g, [], "a")


@given(seeds)
def test_random_trees_span(seed):
    g = graph_from_seed(seed)
    T = maximal_tree(g)
    assert len(T.oriented) == len(g.vertices) - 1
    assert len(T.oriented) + len(T.non_tree) == len(g.pairs())
    for u in g.vertices:
        for w in g.vertices:
            path = T.geodesic(u, w)
            at = u
            for e in path:
                assert g.edges[e].source == at and T.is_tree_edge(e)
                at = g.edges[e].target
            assert at == w


@given(seeds)
def test_file_round_trip(seed):
    g = graph_from_seed(seed)
    h = from_dict(json.loads(json.dumps(to_dict(g))))
    assert to_dict(h) == to_dict(g)
    assert {k: (e.source, e.target, e.group, e.alpha) for k, e in g.edges.items()} == \
           {k: (e.source, e.target, e.group, e.alpha) for k, e in h.edges.items()}


@pytest.mark.parametrize("text, needle", [
    ('{"vertices": [', "1:"),
    ('[]', "top level"),
    ('{"vertices": [{"id": "a b", "group": {"rank": 1}}], "edges": []}', "whitespace"),
    ('{"vertices": [{"id": "~a", "group": {"rank": 1}}], "edges": []}', "~"),
    ('{"vertices": [{"id": "a", "group": {"rank": -1}}], "edges": []}', "bad group"),
    ('{"vertices": [{"id": "a", "group": {"rank": 1}}], "edges": [{"id": "e", "from": "a",'
     ' "to": "b", "group": {"rank": 1}, "alpha_from": [[1]], "alpha_to": [[1]]}]}', "unknown"),
    ('{"vertices": [{"id": "a", "group": {"rank": 1}}], "edges": [{"id": "e", "from": "a",'
     ' "to": "a", "group": {"rank": 1}, "alpha_from": [[1, 2]], "alpha_to": [[1]]}]}', "matrix"),
    ('{"vertices": [{"id": "a", "group": {"torsion": [4]}}], "edges": [{"id": "e", "from": "a",'
     ' "to": "a", "group": {"torsion": [2]}, "alpha_from": [[1]], "alpha_to": [[2]]}]}', "order"),
])
def test_malformed_files(tmp_path, text, needle):
    p = tmp_path / "g.gog"
    p.write_text(text)
    with pytest.raises(GraphFormatError) as exc:
        load(str(p))
    assert needle in str(exc.value)


def test_json_error_has_location():
    with pytest.raises(GraphFormatError, match=r"malformed.gog:2:1"):
        load(data_path("malformed.gog"))
