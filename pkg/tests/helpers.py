"""Small fixed instances and brute-force oracles shared by the tests."""

import itertools

import networkx as nx

from lcwmodel.structure import BipartiteGraph, Graph
from lcwmodel.tmodel import A, C, from_nested


# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES: list = []


def path(k, offset=0):
    return Graph(range(offset, offset + k), [(i, i + 1) for i in range(offset, offset + k - 1)])


def half_graph(k):
    """H_k: a_i ~ b_j iff i <= j; sides 1 (a) and 2 (b)."""
    a = [f"a{i}" for i in range(1, k + 1)]
    b = [f"b{i}" for i in range(1, k + 1)]
    g = Graph(a + b, [(a[i], b[j]) for i in range(k) for j in range(k) if i <= j])
    return BipartiteGraph(g, {**{x: 1 for x in a}, **{y: 2 for y in b}})


def h2_model():
    """C-root, kappa(1,2) true only, leaves a1 b1 a2 b2."""
    tab = ((False, True), (False, False))
    gamma = {"a1": 1, "b1": 2, "a2": 1, "b2": 2}
    return from_nested(((C, tab), ["a1", "b1", "a2", "b2"]), 2, gamma)


def to_nx(g):
    h = nx.Graph()
    h.add_nodes_from(g.vertices)
    h.add_edges_from(tuple(e) for e in g.edges)
    return h


def induced_paths(g, k):
    """All vertex sequences inducing P_k (brute force)."""
    h = to_nx(g)
    out = []
    for vs in itertools.permutations(sorted(g.vertices, key=str), k):
        if vs[0] > vs[-1] if all(isinstance(v, int) for v in vs) else str(vs[0]) > str(vs[-1]):
            continue
        sub = h.subgraph(vs)
        if sub.number_of_edges() == k - 1 and all(sub.has_edge(vs[i], vs[i + 1]) for i in range(k - 1)):
            out.append(vs)
    return out


def random_graph(rng, n, p):
    return Graph(range(n), [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p])


__all__ = ["ACCEPTANCE_LINES", "A", "C", "half_graph", "h2_model", "induced_paths", "path", "random_graph", "to_nx"]
