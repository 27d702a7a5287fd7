import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import induced_paths, path, random_graph
from lcwmodel.cotree import NotCograph, cograph_decompose, cotree_height, is_clean_cotree
from lcwmodel.gen import gen_clean_cotree
from lcwmodel.structure import Graph, has_induced_path
from lcwmodel.tmodel import LEAF, build, from_nested, model_iso_fixing_ground, node_type

seeds = st.integers(0, 2**32)


def test_p4_rejected_with_witness():
    g = path(4)
    with pytest.raises(NotCograph) as exc:
        cograph_decompose(g)
    w = exc.value.witness
    assert len(w) == 4
    assert all(g.has_edge(w[i], w[i + 1]) for i in range(3))
    assert not g.has_edge(w[0], w[2]) and not g.has_edge(w[1], w[3]) and not g.has_edge(w[0], w[3])


def test_single_vertex():
    t = cograph_decompose(Graph(["v"]))
    assert t.tree.kind == {"v": LEAF}
    assert cotree_height(t) == 1


def test_p3_shape():
    g = Graph("abc", [("a", "b"), ("b", "c")])
    t = cograph_decompose(g)
    r = t.root
    assert node_type(t, r) == "J"
    kids = t.tree.children[r]
    assert "b" in kids
    (u,) = [k for k in kids if k != "b"]
    assert node_type(t, u) == "U"
    assert set(t.tree.children[u]) == {"a", "c"}
    assert cotree_height(t) == 3


def test_empty_graph_refused():
    with pytest.raises(ValueError):
        cograph_decompose(Graph())


def test_unclean_examples():
    assert not is_clean_cotree(from_nested(("U", ["a"]), 1))
    assert not is_clean_cotree(from_nested(("J", [("J", ["a", "b"]), "c"]), 1))
    assert is_clean_cotree(from_nested(("J", [("U", ["a", "b"]), "c"]), 1))


@pytest.mark.parametrize("seed", range(40))
def test_rejection_matches_p4_oracle(seed):
    rng = random.Random(seed)
    g = random_graph(rng, rng.randint(1, 7), rng.random())
    has_p4 = bool(induced_paths(g, 4))
    assert has_p4 == has_induced_path(g, 4)
    if has_p4:
        with pytest.raises(NotCograph):
            cograph_decompose(g)
    else:
        t = cograph_decompose(g)
        assert build(t) == g and is_clean_cotree(t)


@given(seeds)
def test_round_trip_is_isomorphic(seed):
    t = gen_clean_cotree(seed, 10, 5)
    assert is_clean_cotree(t)
    g = build(t)
    t2 = cograph_decompose(g)
    assert is_clean_cotree(t2)
    assert build(t2) == g
    assert model_iso_fixing_ground(t, t2)


def test_decomposition_ignores_vertex_order():
    g = Graph(range(6), [(0, 1), (2, 3), (0, 2), (0, 3), (1, 2), (1, 3), (4, 5)])
    perm = list(range(6))
    random.Random(1).shuffle(perm)
    h = Graph([perm[v] for v in range(6)], [(perm[a], perm[b]) for a, b in (tuple(e) for e in g.edges)])
    t, s = cograph_decompose(g), cograph_decompose(h)
    assert cotree_height(t) == cotree_height(s)
    assert sorted(map(len, (t.tree.children[u] for u in t.tree.kind if t.tree.children[u]))) == \
        sorted(map(len, (s.tree.children[u] for u in s.tree.kind if s.tree.children[u])))


def test_all_cographs_on_four_vertices():
    pairs = list(itertools.combinations(range(4), 2))
    for mask in range(1 << len(pairs)):
        g = Graph(range(4), [p for i, p in enumerate(pairs) if mask >> i & 1])
        if has_induced_path(g, 4):
            continue
        assert build(cograph_decompose(g)) == g
