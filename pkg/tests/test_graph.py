import json

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from pebblelp.graph import (Graph, GraphError, bruhat, cartesian_product, coxeter, cube, cycle,
                            emit_graph, from_spec, gen, generalized_petersen, graph_power,
                            is_tree, lemke, parse_graph, path, petersen, r15, r20,
                            random_graph, random_tree, star)

from conftest import to_nx


def test_basic_families():
    assert path(5).n == 5 and len(path(5).edges) == 4
    assert cycle(6).diameter() == 3
    assert star(3).degree(0) == 3
    assert cube(3).n == 8 and cube(3).diameter() == 3
    assert gen("complete", 4).diameter() == 1


def test_petersen_is_petersen():
    assert nx.is_isomorphic(to_nx(petersen()), nx.petersen_graph())


def test_lemke_shape():
    g = lemke()
    assert (g.n, len(g.edges), g.diameter()) == (8, 13, 3)
    assert g.labels[0] == "v1"


def test_named_graphs():
    assert (r15().n, r20().n) == (15, 20)
    assert nx.is_connected(to_nx(r15())) and nx.is_connected(to_nx(r20()))
    pm = generalized_petersen(5, 2)
    assert pm.n == 16 and pm.degree(pm.vertex("u")) == 5
    assert coxeter(7).n == 28
    assert nx.girth(to_nx(coxeter(7))) == 7
    assert all(coxeter(7).degree(v) == 3 for v in range(28))
    b = bruhat(4)
    assert b.n == 24 and all(b.degree(v) == 3 for v in range(24))


def test_product_and_power():
    q = cartesian_product(path(2), cycle(4))
    assert nx.is_isomorphic(to_nx(q), to_nx(cube(3)))
    p = graph_power(cycle(9), 2)
    assert all(p.degree(v) == 4 for v in range(9))
    assert p.diameter() == 2


def test_from_spec():
    assert from_spec("cycle:7").n == 7
    assert from_spec("cycle:9^2").degree(0) == 4
    assert from_spec("pm:4,2").n == 13
    with pytest.raises(GraphError):
        from_spec("nosuch")
    with pytest.raises(GraphError):
        from_spec("petersen:3")


def test_disconnected_rejected():
    with pytest.raises(GraphError):
        Graph.from_edges(4, [(0, 1), (2, 3)])


def test_text_and_json_roundtrip(tmp_path):
    g = petersen()
    for fmt in ("text", "json"):
        h = parse_graph(emit_graph(g, fmt))
        assert h.labels == g.labels and h.edges == g.edges
    f = tmp_path / "g.json"
    f.write_text(emit_graph(g, "json"))
    assert from_spec(f"file:{f}").edges == g.edges
    json.loads(emit_graph(g, "json"))


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 12), st.integers(0, 10**6))
def test_random_tree_is_tree(n, seed):
    t = random_tree(n, seed)
    assert is_tree(t) and t.n == n


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 9), st.floats(0.2, 0.9), st.integers(0, 10**6))
def test_random_graph_distances_match_networkx(n, p, seed):
    g = random_graph(n, p, seed)
    d = dict(nx.all_pairs_shortest_path_length(to_nx(g)))
    for u in range(n):
        assert g.distances(u) == [d[u][v] for v in range(n)]


def test_random_graph_deterministic():
    assert random_graph(8, 0.4, 3).edges == random_graph(8, 0.4, 3).edges
