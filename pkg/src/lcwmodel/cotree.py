"""Cograph recognition and the unique clean cotree."""

from __future__ import annotations

from .structure import Graph, complement, connected_components, find_induced_path, induced_subgraph, vkey
from .tmodel import A, COTREE_TABLES, LEAF, TModel, from_nested, node_type, rename_internal


class NotCograph(ValueError):
    def __init__(self, witness: list):
        super().__init__(f"graph contains an induced P4: {witness}")
        self.witness = witness


def _nested(g: Graph):
    vs = g.vertices
    if len(vs) == 1:
        return next(iter(vs))
    comps = connected_components(g)
    if len(comps) > 1:
        label = "U"
    else:
        comps = connected_components(complement(g))
        if len(comps) == 1:
            raise NotCograph(find_induced_path(g, 4) or [])
        label = "J"
    kids = [_nested(induced_subgraph(g, c)) for c in comps]
    return (label, sorted(kids, key=_nested_key))


def _nested_key(spec) -> tuple:
    if isinstance(spec, tuple) and len(spec) == 2 and isinstance(spec[1], list):
        return (1, spec[0], tuple(_nested_key(c) for c in spec[1]))
    return (0, vkey(spec))


def cograph_decompose(g: Graph) -> TModel:
    """The clean cotree of ``g``; raises NotCograph with an induced-P4 witness."""
    if not g.vertices:
        raise ValueError("empty graph has no cotree")
    spec = _nested(g)
    return rename_internal(from_nested(spec, 1))


def is_clean_cotree(t: TModel) -> bool:
    if t.n != 1:
        return False
    tr = t.tree
    if tr.root is None:
        return True
    for u, k in tr.kind.items():
        if k == LEAF:
            continue
        if k != A or node_type(t, u) not in COTREE_TABLES:
            return False
        if len(tr.children[u]) < 2:
            return False
        p = tr.parent[u]
        if p != u and node_type(t, p) == node_type(t, u):
            return False
    return True


def cotree_height(t: TModel) -> int:
    return t.height()
