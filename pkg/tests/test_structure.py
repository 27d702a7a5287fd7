import itertools
import random

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import half_graph, path, random_graph, to_nx
from lcwmodel.structure import (
    BipartiteGraph,
    Graph,
    Poset,
    RelStructure,
    UnknownVertex,
    bipartite_complement,
    complement,
    connected_components,
    cover_graph,
    cover_relation,
    degeneracy,
    distance,
    find_induced_path,
    format_edge_list,
    has_induced_path,
    has_ktt_subgraph,
    induced_subgraph,
    parse_bipartite,
    parse_edge_list,
    relstructure_from_json,
    relstructure_to_json,
    semi_induced,
    shortest_path,
    to_dot,
    transitive_closure,
)


@st.composite
def graphs(draw, max_n=8):
    n = draw(st.integers(0, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph(range(n), [e for e, k in zip(pairs, keep) if k])


@st.composite
def dags(draw, max_n=7):
    n = draw(st.integers(0, max_n))
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return n, [e for e, k in zip(pairs, keep) if k]


def test_induced_subgraph_examples():
    k3 = Graph("abc", [("a", "b"), ("b", "c"), ("a", "c")])
    assert induced_subgraph(k3, "ab") == Graph("ab", [("a", "b")])
    assert induced_subgraph(k3, []) == Graph()
    p4 = Graph("abcd", [("a", "b"), ("b", "c"), ("c", "d")])
    assert induced_subgraph(p4, "ac") == Graph("ac")


def test_induced_subgraph_unknown_vertex():
    with pytest.raises(UnknownVertex):
        induced_subgraph(path(3), [7])


def test_self_loop_rejected():
    with pytest.raises(ValueError):
        Graph([1], [(1, 1)])


def test_bipartite_complement_examples():
    k22 = BipartiteGraph(Graph("abcd", [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")]),
                         {"a": 1, "b": 1, "c": 2, "d": 2})
    empty = bipartite_complement(k22)
    assert not empty.graph.edges and empty.side == k22.side
    assert bipartite_complement(empty) == k22


def test_bipartite_rejects_same_side_edge():
    with pytest.raises(ValueError):
        BipartiteGraph(Graph("ab", [("a", "b")]), {"a": 1, "b": 1})


@given(graphs())
def test_complement_involution_and_oracle(g):
    c = complement(g)
    assert complement(c) == g
    assert nx.is_isomorphic(to_nx(c), nx.complement(to_nx(g)))


@given(graphs())
def test_semi_induced_keeps_cross_pairs_only(g):
    a = [v for v in g.vertices if v % 2 == 0]
    b = [v for v in g.vertices if v % 2 == 1]
    s = semi_induced(g, a, b)
    want = {e for e in g.edges if len({v % 2 for v in e}) == 2}
    assert s.graph.edges == want
    assert all(s.side[v] == (1 if v % 2 == 0 else 2) for v in s.vertices)


def test_cover_relation_examples():
    chain = Poset([1, 2, 3], [(1, 2), (2, 3), (1, 3)])
    assert cover_relation(chain) == {(1, 2), (2, 3)}
    assert cover_relation(Poset("abc", [])) == frozenset()
    diamond = Poset(["bot", "a", "b", "top"], [("bot", "a"), ("bot", "b"), ("a", "top"),
                                             ("b", "top"), ("bot", "top")])
    assert cover_relation(diamond) == {("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top")}
    assert cover_graph(diamond) == Graph(["bot", "a", "b", "top"],
                                         [("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top")])


def test_cover_graph_of_chain_is_path():
    p = Poset(range(5), [(a, b) for a in range(5) for b in range(a + 1, 5)])
    assert cover_graph(p) == path(5)


@given(dags())
def test_closure_and_covers_against_networkx(d):
    n, edges = d
    lt = transitive_closure(edges)
    dg = nx.DiGraph()
    dg.add_nodes_from(range(n))
    dg.add_edges_from(edges)
    assert lt == set(nx.transitive_closure_dag(dg).edges)
    p = Poset(range(n), lt)
    assert cover_relation(p) == set(nx.transitive_reduction(dg).edges)
    assert transitive_closure(cover_relation(p)) == lt


def test_poset_rejects_cycle():
    with pytest.raises(ValueError):
        Poset([1, 2], [(1, 2), (2, 1)])


def test_induced_path_examples():
    assert has_induced_path(path(7), 7)
    k4 = Graph(range(4), itertools.combinations(range(4), 2))
    assert not has_induced_path(k4, 3)
    c6 = Graph(range(6), [(i, (i + 1) % 6) for i in range(6)])
    assert has_induced_path(c6, 5)
    assert not has_induced_path(c6, 6)


@given(graphs(7), st.integers(2, 5))
def test_find_induced_path_is_induced(g, k):
    p = find_induced_path(g, k)
    h = to_nx(g)
    if p is None:
        for vs in itertools.permutations(g.vertices, k):
            sub = h.subgraph(vs)
            assert not (sub.number_of_edges() == k - 1
                        and all(sub.has_edge(vs[i], vs[i + 1]) for i in range(k - 1)))
    else:
        assert len(set(p)) == k
        sub = h.subgraph(p)
        assert sub.number_of_edges() == k - 1
        assert all(sub.has_edge(p[i], p[i + 1]) for i in range(k - 1))


def test_ktt_examples():
    k22 = Graph("abcd", [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")])
    assert has_ktt_subgraph(k22, 2)
    tree = Graph(range(6), [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5)])
    assert not has_ktt_subgraph(tree, 2)
    k5 = Graph(range(5), itertools.combinations(range(5), 2))
    assert has_ktt_subgraph(k5, 2)
    assert not has_ktt_subgraph(k5, 3)


def test_components_and_distance():
    g = Graph("abcd", [("a", "b"), ("c", "d")])
    assert sorted(map(sorted, connected_components(g))) == [["a", "b"], ["c", "d"]]
    p = Graph("abc", [("a", "b"), ("b", "c")])
    assert distance(p, "a", "c") == 2
    assert shortest_path(p, "a", "c") == ["a", "b", "c"]
    assert distance(g, "a", "c") == float("inf")
    assert shortest_path(g, "a", "c") is None


@given(graphs())
def test_distance_against_networkx(g):
    h = to_nx(g)
    lengths = dict(nx.all_pairs_shortest_path_length(h))
    for u in g.vertices:
        for v in g.vertices:
            assert distance(g, u, v) == lengths[u].get(v, float("inf"))


def test_degeneracy_examples():
    assert degeneracy(Graph(range(4), [(0, 1), (1, 2), (1, 3)])) == 1
    assert degeneracy(Graph(range(4), itertools.combinations(range(4), 2))) == 3
    assert degeneracy(Graph(range(5), [(i, (i + 1) % 5) for i in range(5)])) == 2


@given(graphs())
def test_degeneracy_against_networkx(g):
    want = max(nx.core_number(to_nx(g)).values(), default=0)
    assert degeneracy(g) == want


def test_edge_list_round_trip():
    rng = random.Random(3)
    g = random_graph(rng, 7, 0.4)
    g = Graph([str(v) for v in g.vertices], [tuple(str(v) for v in e) for e in g.edges])
    assert parse_edge_list(format_edge_list(g)) == g


def test_parse_bipartite_labels():
    b = half_graph(2)
    text = format_edge_list(Graph(b.vertices, b.graph.edges, {v: {str(s)} for v, s in b.side.items()}))
    assert parse_bipartite(text) == b
    with pytest.raises(ValueError):
        parse_bipartite("a b\n")


def test_parse_edge_list_bad_line():
    with pytest.raises(ValueError, match="line 2"):
        parse_edge_list("a b\na b c\n")


def test_dot_output_lists_vertices_and_edges():
    dot = to_dot(Graph("ab", [("a", "b")]), "G", {"a": "red"})
    assert dot.startswith("graph G {")
    assert '"a" [color="red"];' in dot
    assert '"a" -- "b";' in dot


def test_relstructure_checks_and_json():
    with pytest.raises(ValueError):
        RelStructure({"E": 2}, [1], {"E": [(1,)]})
    with pytest.raises(ValueError):
        RelStructure({"E": 2}, [1], {"E": [(1, 2)]})
    s = RelStructure({"E": 2, "P": 1}, [(0, 1), 2], {"E": [((0, 1), 2)], "P": [(2,)]})
    assert relstructure_from_json(relstructure_to_json(s)) == s
    assert s.induced([2]).relations["E"] == frozenset()
