"""Shallow ordered bicographs (sobs) and their bicotrees.

A bicotree is a two-color T-model whose internal nodes have type U (no
edges), B (all cross-color pairs adjacent) or O (a color-1 leaf is adjacent
to a color-2 leaf exactly when it lies in an earlier child).
"""

from __future__ import annotations

import heapq

from .structure import (
    BipartiteGraph,
    bipartite_complement,
    connected_components,
    find_induced_path,
    induced_bipartite,
    is_connected,
    vkey,
    vsorted,
)
from .tmodel import (
    BICOTREE_KINDS,
    BICOTREE_TABLES,
    C,
    LEAF,
    MalformedModel,
    SemiPlaneTree,
    TModel,
    build,
    graft,
    node_type,
    rename_internal,
    restrict,
    splice_root,
    subtree_at,
    validate,
)


class NotSob(ValueError):
    """The graph has no clean bicotree reachable by the decomposition.

    ``witness`` is an induced P7 when one exists, otherwise None;
    ``failing_part`` is the vertex set where the ordered split was refused.
    """

    def __init__(self, witness: list | None, failing_part: frozenset):
        msg = f"not a sob (induced P7: {witness})" if witness else "not a sob"
        super().__init__(msg)
        self.witness = witness
        self.failing_part = failing_part


class NoOPartition(ValueError):
    def __init__(self, msg: str, blocks: list | None = None):
        super().__init__(msg)
        self.blocks = blocks


class PreconditionError(ValueError):
    pass


# --------------------------------------------------------------------------


def bipartite_of(t: TModel) -> BipartiteGraph:
    return BipartiteGraph(build(t), {v: t.gamma[v] for v in t.ground})


def bicotree_problems(t: TModel) -> list[str]:
    out = validate(t)
    if out:
        return out
    if t.n != 2:
        return [f"bicotree needs n=2, got {t.n}"]
    for u, k in t.tree.kind.items():
        if k != LEAF and node_type(t, u) not in BICOTREE_TABLES:
            out.append(f"node {u!r} is not of type U, B or O")
    return out


def check_bicotree(t: TModel) -> TModel:
    problems = bicotree_problems(t)
    if problems:
        raise MalformedModel(problems)
    return t


def dual_star(t: TModel) -> TModel:
    """Swap U and B, reverse every O-node's children."""
    check_bicotree(t)
    swap = {"U": "B", "B": "U", "O": "O"}
    kappa, order = {}, {}
    for u, k in t.tree.kind.items():
        if k == LEAF:
            continue
        ty = swap[node_type(t, u)]
        kappa[u] = BICOTREE_TABLES[ty]
        if k == C:
            order[u] = tuple(reversed(t.tree.children[u]))
    tr = SemiPlaneTree(t.tree.root, t.tree.kind, t.tree.parent, order)
    return TModel(tr, 2, t.gamma, kappa)


def _colors(t: TModel, u) -> frozenset:
    return frozenset(t.gamma[v] for v in t.tree.leaves_under(u))


def clean_violations(t: TModel) -> list[str]:
    """Which of the three clean conditions fail, node by node."""
    problems = bicotree_problems(t)
    if problems:
        return problems
    out = []
    tr = t.tree
    for u in tr.preorder():
        ty = node_type(t, u)
        if ty == "Leaf":
            continue
        for c in tr.children[u]:
            sub = subtree_at(t, c)
            if ty == "U" and not is_connected(build(sub)):
                out.append(f"U-node {u!r}: child {c!r} is disconnected")
            elif ty == "B" and not is_connected(bipartite_complement(bipartite_of(sub)).graph):
                out.append(f"B-node {u!r}: child {c!r} has disconnected bipartite complement")
            elif ty == "O" and _colors(t, c) != {1, 2}:
                out.append(f"O-node {u!r}: child {c!r} is monochromatic")
    return out


def is_clean_bicotree(t: TModel) -> bool:
    return not clean_violations(t)


# --------------------------------------------------------------------------
# decomposition


def _sccs(vertices: list, succ: dict) -> list[list]:
    """Tarjan, iterative; returns components in reverse topological order."""
    index: dict = {}
    low: dict = {}
    onstack: set = set()
    stack: list = []
    out: list = []
    counter = 0
    for s in vertices:
        if s in index:
            continue
        work = [(s, iter(succ[s]))]
        index[s] = low[s] = counter
        counter += 1
        stack.append(s)
        onstack.add(s)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    onstack.add(w)
                    work.append((w, iter(succ[w])))
                    advanced = True
                    break
                if w in onstack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                low[work[-1][0]] = min(low[work[-1][0]], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    onstack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                out.append(comp)
    return out


def o_partition(b: BipartiteGraph, check_pre: bool = True) -> list[frozenset]:
    """Ordered parts P_1..P_k (k >= 2), each with both colors, such that a
    color-1 vertex of P_i and a color-2 vertex of P_j (i != j) are adjacent
    exactly when i < j.

    Every cross-color pair forces an order constraint between its endpoints
    (edge: the color-1 end is not later; non-edge: it is not earlier).
    Strongly connected groups of constraints must share a part; a
    topological scan of the groups cut into minimal two-colored blocks gives
    the parts.
    """
    ones, twos = vsorted(b.part(1)), vsorted(b.part(2))
    if check_pre:
        if not ones or not twos:
            raise PreconditionError("both colors must be present")
        if not is_connected(b.graph):
            raise PreconditionError("graph must be connected")
        if not bipartite_complement(b).graph.edges:
            raise PreconditionError("graph is complete bipartite (no ordered split possible)")
    order = vsorted(b.vertices)
    succ: dict = {v: [] for v in order}
    for x in ones:
        nx = b.graph.neighbors(x)
        for y in twos:
            if y in nx:
                succ[x].append(y)
            else:
                succ[y].append(x)
    comps = _sccs(order, succ)
    comp_of = {v: i for i, c in enumerate(comps) for v in c}
    indeg = [0] * len(comps)
    csucc: list[set] = [set() for _ in comps]
    for v in order:
        for w in succ[v]:
            a, c = comp_of[v], comp_of[w]
            if a != c and c not in csucc[a]:
                csucc[a].add(c)
                indeg[c] += 1
    keys = [min(vkey(v) for v in c) for c in comps]
    heap = [(keys[i], i) for i in range(len(comps)) if indeg[i] == 0]
    heapq.heapify(heap)
    topo = []
    while heap:
        _, i = heapq.heappop(heap)
        topo.append(i)
        for j in csucc[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                heapq.heappush(heap, (keys[j], j))
    blocks: list[set] = []
    cur: set = set()
    cols: set = set()
    for i in topo:
        cur |= set(comps[i])
        cols |= {b.side[v] for v in comps[i]}
        if cols == {1, 2}:
            blocks.append(cur)
            cur, cols = set(), set()
    if cur:
        if not blocks:
            raise NoOPartition("no ordered split: constraints collapse to one part", [cur])
        blocks[-1] |= cur
    if len(blocks) < 2:
        raise NoOPartition("no ordered split: constraints collapse to one part", blocks)
    parts = [frozenset(x) for x in blocks]
    _check_o_partition(b, parts)
    return parts


def _check_o_partition(b: BipartiteGraph, parts: list[frozenset]) -> None:
    where = {v: i for i, p in enumerate(parts) for v in p}
    for i, p in enumerate(parts):
        if {b.side[v] for v in p} != {1, 2}:
            raise NoOPartition(f"part {i} is monochromatic", parts)
    for x in b.part(1):
        for y in b.part(2):
            i, j = where[x], where[y]
            if i != j and b.graph.has_edge(x, y) != (i < j):
                raise NoOPartition(f"pair {x!r},{y!r} violates the part order", parts)


def _leaf(v, color: int) -> TModel:
    return TModel(SemiPlaneTree(v, {v: LEAF}, {v: v}, {}), 2, {v: color}, {})


def _node(ty: str, kids: list[TModel]) -> TModel:
    return graft(2, BICOTREE_KINDS[ty], BICOTREE_TABLES[ty], kids)


def _decompose(b: BipartiteGraph) -> TModel:
    vs = b.vertices
    if len(vs) == 1:
        v = next(iter(vs))
        return _leaf(v, b.side[v])
    comps = connected_components(b.graph)
    if len(comps) > 1:
        return _node("U", [_decompose(induced_bipartite(b, c)) for c in comps])
    bc = bipartite_complement(b)
    if len(connected_components(bc.graph)) > 1:
        return dual_star(_decompose(bc))
    try:
        parts = o_partition(b, check_pre=False)
    except NoOPartition:
        raise NotSob(None, frozenset(vs)) from None
    return _node("O", [_decompose(induced_bipartite(b, p)) for p in parts])


def sob_decompose(b: BipartiteGraph) -> TModel:
    """A clean bicotree of ``b`` (U-test, then B-test, then ordered split)."""
    if not b.vertices:
        raise ValueError("empty graph has no bicotree")
    try:
        t = _decompose(b)
    except NotSob as e:
        raise NotSob(find_induced_path(b.graph, 7), e.failing_part) from None
    return rename_internal(t)


# --------------------------------------------------------------------------
# cleaning


def _mono(t: TModel) -> int | None:
    cols = {t.gamma[v] for v in t.ground}
    return next(iter(cols)) if len(cols) == 1 else None


def _leaves_of(t: TModel) -> list[TModel]:
    return [_leaf(v, t.gamma[v]) for v in vsorted(t.ground)]


def _clean(t: TModel) -> TModel:
    tr = t.tree
    if tr.kind[tr.root] == LEAF:
        return t
    ty = node_type(t, tr.root)
    if ty == "B":
        return dual_star(_clean(dual_star(t)))
    kids = [subtree_at(t, c) for c in tr.children[tr.root]]
    if ty == "U":
        parts = []
        for k in kids:
            g = build(k)
            for comp in connected_components(g):
                parts.append(_clean(splice_root(restrict(k, comp))))
        return _node("U", parts)
    # O-root
    cleaned = [_clean(k) for k in kids]
    mono = [_mono(k) for k in cleaned]
    lo, hi = 0, len(cleaned)
    while lo < hi and mono[lo] == 1:
        lo += 1
    while hi > lo and mono[hi - 1] == 2:
        hi -= 1
    # middle intervals: color-2 children, a pivot, color-1 children
    blocks: list[list[TModel]] = []
    i = lo
    while i < hi:
        block = []
        while i < hi and mono[i] == 2:
            block.append(cleaned[i])
            i += 1
        block.append(cleaned[i])
        i += 1
        while i < hi and mono[i] == 1:
            block.append(cleaned[i])
            i += 1
        blocks.append(block)
    top: list[TModel] = []
    for k in cleaned[:lo]:
        top.extend(_leaves_of(k))
    if blocks:
        units = []
        for block in blocks:
            items = []
            for k in block:
                items.extend(_leaves_of(k) if _mono(k) else [k])
            units.append(items[0] if len(items) == 1 else _node("U", items))
        top.append(units[0] if len(units) == 1 else _node("O", units))
    for k in cleaned[hi:]:
        top.extend(_leaves_of(k))
    if len(top) == 1:
        return top[0]
    return _node("B", top)


def clean_bicotree(t: TModel) -> TModel:
    """A clean bicotree for the same bipartite graph, height at most 3h.

    Follows the induction on the root type: U-roots regroup by connected
    components, B-roots go through the dual, O-roots are rebuilt as a
    B-root over the monochromatic ends and an O-node over interval blocks.
    Any node where that rebuilt shape still breaks a clean condition is
    replaced by the canonical decomposition of its graph.
    """
    check_bicotree(t)
    if t.is_empty():
        return t
    out = _clean(t)
    if clean_violations(out):
        out = _repair(out)
    return rename_internal(out)


def _repair(t: TModel) -> TModel:
    tr = t.tree
    if tr.kind[tr.root] == LEAF:
        return t
    ty = node_type(t, tr.root)
    kids = [_repair(subtree_at(t, c)) for c in tr.children[tr.root]]
    node = _node(ty, kids)
    for k in kids:
        g = bipartite_of(k)
        if (ty == "U" and not is_connected(g.graph)) or \
                (ty == "B" and not is_connected(bipartite_complement(g).graph)):
            return sob_decompose(bipartite_of(node))
    return node


__all__ = [
    "NotSob", "NoOPartition", "PreconditionError", "bipartite_of", "check_bicotree",
    "clean_bicotree", "clean_violations", "dual_star", "is_clean_bicotree", "o_partition",
    "sob_decompose",
]
