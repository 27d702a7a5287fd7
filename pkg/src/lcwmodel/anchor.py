"""Anchors of clean cotrees, clean bicotrees and amalgams; restricted models
agreeing with the original on anchor-closed sets; anchor-based covers.

An anchor maps every leaf u to a set F(u) containing u.  For a leaf set L'
the restricted model T_{L'} has ground L' and agrees with T (up to an
isomorphism fixing X) on every X whose anchors all lie inside L'.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping

from . import kernels
from .bicotree import (
    bipartite_of,
    clean_violations,
    sob_decompose,
)
from .cotree import cograph_decompose, is_clean_cotree
from .splitdec import Amalgam, _assemble, cell_node_id, ground_id, pair_node_id
from .structure import (
    BipartiteGraph,
    Graph,
    bipartite_complement,
    connected_components,
    induced_bipartite,
    induced_subgraph,
    shortest_path,
    vkey,
    vsorted,
)
from .tmodel import (
    A,
    BICOTREE_KINDS,
    BICOTREE_TABLES,
    COTREE_TABLES,
    LEAF,
    TModel,
    build,
    canonical_records,
    empty_model,
    graft,
    node_type,
    rename_internal,
    subtree_at,
)


class NotClean(ValueError):
    pass


@dataclass
class Anchor:
    F: dict
    size_bound: int

    @property
    def size(self) -> int:
        return max((len(s) for s in self.F.values()), default=0)

    def problems(self) -> list[str]:
        out = []
        for u, s in self.F.items():
            if u not in s:
                out.append(f"{u!r} not in F({u!r})")
            if len(s) > self.size_bound:
                out.append(f"|F({u!r})| = {len(s)} exceeds {self.size_bound}")
        return out

    def closure(self, x) -> frozenset:
        """Y_X: the union of F(u) over u in X."""
        out: set = set()
        for u in x:
            out |= self.F[u]
        return frozenset(out)

    def qualifying(self, lprime) -> frozenset:
        """Leaves u with F(u) inside ``lprime``."""
        lprime = frozenset(lprime)
        return frozenset(u for u, s in self.F.items() if s <= lprime)

    def to_json(self) -> dict:
        return {"size_bound": self.size_bound,
                "F": {str(u): vsorted(self.F[u]) for u in vsorted(self.F)}}

    @staticmethod
    def from_json(d: Mapping, ground=None) -> "Anchor":
        names = {str(v): v for v in ground} if ground is not None else {}
        F = {names.get(k, k): frozenset(names.get(str(x), x) for x in xs) for k, xs in d["F"].items()}
        return Anchor(F, int(d["size_bound"]))


# --------------------------------------------------------------------------
# anchors, computed for every node of the tree at once


def _smallest(leaves) -> object:
    return min(leaves, key=vkey)


def cotree_node_anchors(t: TModel) -> dict:
    """{node: anchor of the subtree at node} for a clean cotree."""
    tr = t.tree
    table: dict = {}
    for u in reversed(tr.preorder()):
        if tr.kind[u] == LEAF:
            table[u] = {u: frozenset((u,))}
            continue
        F: dict = {}
        below = {c: tr.leaves_under(c) for c in tr.children[u]}
        allv = frozenset().union(*below.values())
        for c, lc in below.items():
            wit = _smallest(allv - lc)
            for v, s in table[c].items():
                F[v] = s | {wit}
        table[u] = F
    return table


def _paths_graph(t: TModel, u, g: Graph, side) -> Graph:
    b = induced_bipartite(BipartiteGraph(g, side), t.tree.leaves_under(u))
    return b.graph if node_type(t, t.tree.parent[u]) == "U" else bipartite_complement(b).graph


def bicotree_node_anchors(t: TModel) -> dict:
    """{node: anchor of the subtree at node} for a clean bicotree."""
    tr = t.tree
    g = build(t)
    side = {v: t.gamma[v] for v in t.ground}
    table: dict = {}
    for u in reversed(tr.preorder()):
        if tr.kind[u] == LEAF:
            table[u] = {u: frozenset((u,))}
            continue
        ty = node_type(t, u)
        kids = tr.children[u]
        F: dict = {}
        if ty in ("U", "B"):
            for c in kids:
                gc = _paths_graph(t, c, g, side)
                tc = _smallest(gc.vertices)
                for v, s in table[c].items():
                    acc = set()
                    for x in s:
                        path = shortest_path(gc, x, tc)
                        if path is None:
                            raise NotClean(f"child {c!r} of {ty}-node {u!r} is not connected")
                        acc.update(path)
                    F[v] = frozenset(acc)
        else:
            wit = []
            for c in kids:
                lc = tr.leaves_under(c)
                row = {}
                for j in (1, 2):
                    col = [v for v in lc if t.gamma[v] == j]
                    if not col:
                        raise NotClean(f"child {c!r} of O-node {u!r} is monochromatic")
                    row[j] = _smallest(col)
                wit.append(row)
            k = len(kids)
            ends = {wit[0][1], wit[0][2], wit[k - 1][1], wit[k - 1][2]}
            for i, c in enumerate(kids):
                near = {wit[i2][j] for i2 in range(max(0, i - 1), min(k, i + 2)) for j in (1, 2)}
                for v, s in table[c].items():
                    F[v] = s | ends | near
        table[u] = F
    return table


def cotree_anchor(t: TModel) -> Anchor:
    if not is_clean_cotree(t):
        raise NotClean("cotree is not clean")
    if t.is_empty():
        return Anchor({}, 0)
    return Anchor(cotree_node_anchors(t)[t.root], t.height())


def bicotree_anchor(t: TModel) -> Anchor:
    problems = clean_violations(t)
    if problems:
        raise NotClean("; ".join(problems))
    if t.is_empty():
        return Anchor({}, 0)
    # strict bound 5^(h+1) means size <= 5^(h+1) - 1
    return Anchor(bicotree_node_anchors(t)[t.root], 5 ** (t.height() + 1) - 1)


# --------------------------------------------------------------------------
# restricted models


def _leaf(t: TModel, v) -> TModel:
    return subtree_at(t, v)


def _fresh_cotree(g: Graph, lp) -> TModel:
    return cograph_decompose(induced_subgraph(g, lp))


def _fresh_bicotree(b: BipartiteGraph, lp) -> TModel:
    return sob_decompose(induced_bipartite(b, lp))


def _rm_cotree(t, u, lp: frozenset, table, g) -> TModel:
    tr = t.tree
    if tr.kind[u] == LEAF:
        return _leaf(t, u)
    F = table[u]
    if not any(F[v] <= lp for v in lp):
        return _fresh_cotree(g, lp)
    ty = node_type(t, u)
    kids = []
    for c in tr.children[u]:
        lc = lp & tr.leaves_under(c)
        if not lc:
            continue
        sub = _rm_cotree(t, c, lc, table, g)
        if sub.tree.kind[sub.root] != LEAF and node_type(sub, sub.root) == ty:
            kids.extend(subtree_at(sub, k) for k in sub.tree.children[sub.root])
        else:
            kids.append(sub)
    return graft(1, A, COTREE_TABLES[ty], kids)


def _rm_bicotree(t, u, lp: frozenset, table, b: BipartiteGraph, bc: BipartiteGraph) -> TModel:
    tr = t.tree
    if tr.kind[u] == LEAF:
        return _leaf(t, u)
    F = table[u]
    if not any(F[v] <= lp for v in lp):
        return _fresh_bicotree(b, lp)
    ty = node_type(t, u)
    kids: list = []
    if ty in ("U", "B"):
        base = b if ty == "U" else bc
        for c in tr.children[u]:
            lc_all = tr.leaves_under(c)
            lc = lp & lc_all
            if not lc:
                continue
            tc = _smallest(lc_all)
            for comp in connected_components(induced_subgraph(base.graph, lc)):
                if tc in comp:
                    kids.append(_rm_bicotree(t, c, comp, table, b, bc))
                else:
                    kids.append(_fresh_bicotree(b, comp))
        return graft(2, A, BICOTREE_TABLES[ty], kids)
    # O-node
    parts = [lp & tr.leaves_under(c) for c in tr.children[u]]
    cols = [frozenset(t.gamma[v] for v in p) for p in parts]
    if cols[0] != {1, 2} or cols[-1] != {1, 2}:
        return _fresh_bicotree(b, lp)
    intervals: list[list[int]] = []
    pending: list[int] = []
    for i, p in enumerate(parts):
        if not p:
            continue
        if cols[i] == {1}:
            pending.append(i)
        elif cols[i] == {2} and not pending:
            intervals[-1].append(i)
        else:
            intervals.append(pending + [i])
            pending = []
    for iv in intervals:
        if len(iv) == 1:
            i = iv[0]
            kids.append(_rm_bicotree(t, tr.children[u][i], parts[i], table, b, bc))
        else:
            # a grouped interval is never met by an anchor-closed set; any
            # clean model of its graph will do
            kids.append(_fresh_bicotree(b, frozenset().union(*(parts[i] for i in iv))))
    return graft(2, BICOTREE_KINDS["O"], BICOTREE_TABLES["O"], kids)


def restricted_model(t: TModel, F: Anchor | None, lprime, table: dict | None = None) -> TModel:
    """T_{L'}: a clean model with ground ``lprime`` on which the constructed
    anchor of ``t`` is anchoring.  ``t`` is a clean cotree (n=1) or clean
    bicotree (n=2); ``F`` defaults to the constructed anchor."""
    lp = frozenset(lprime)
    if not lp <= t.ground:
        raise ValueError("lprime must be a subset of the leaves")
    if not lp:
        return empty_model(t.n)
    if lp == t.ground:
        return t
    if t.n == 1:
        table = table or cotree_node_anchors(t)
    else:
        table = table or bicotree_node_anchors(t)
    root_F = F.F if F is not None else table[t.root]
    if not any(root_F[v] <= lp for v in lp):
        out = _fresh_cotree(build(t), lp) if t.n == 1 else _fresh_bicotree(bipartite_of(t), lp)
        return out
    if t.n == 1:
        out = _rm_cotree(t, t.root, lp, table, build(t))
    else:
        b = bipartite_of(t)
        out = _rm_bicotree(t, t.root, lp, table, b, bipartite_complement(b))
    return rename_internal(out)


# --------------------------------------------------------------------------
# verification


@dataclass
class AnchorCheck:
    ok: bool
    checked: int
    failures: int
    witness: frozenset | None
    exhaustive: bool
    note: str = ""


def verify_anchoring(t: TModel, tprime: TModel, F: Anchor, cap: int = 16, samples: int = 10_000,
                     seed: int = 0, use_kernel: bool = True) -> AnchorCheck:
    """Check  Y_X within ground(tprime)  =>  t<X> = tprime<X>  for all X.

    Only X inside Q = {u : F(u) within ground(tprime)} qualify.  Up to
    ``cap`` leaves every such X is checked; beyond that ``samples`` random
    subsets of Q are checked.
    """
    ground = vsorted(t.ground)
    lp = tprime.ground
    if not lp <= t.ground:
        raise ValueError("ground of tprime must be inside the ground of t")
    if F.problems() and any(u not in F.F[u] for u in F.F):
        return AnchorCheck(False, 0, 1, None, True, "u not in F(u)")
    q = [u for u in ground if F.F[u] <= lp]
    exhaustive = len(ground) <= cap
    index = {v: i for i, v in enumerate(ground)}
    if len(ground) <= kernels.MAX_BITS and use_kernel:
        labels: dict = {}
        fa, fb = kernels.flatten(t, index, labels), kernels.flatten(tprime, index, labels)
        qmask = sum(1 << index[u] for u in q)
        if exhaustive:
            checked, fails, first = kernels.scan_submasks(fa, fb, qmask)
            wit = None if first < 0 else frozenset(v for v in ground if first >> index[v] & 1)
            return AnchorCheck(fails == 0, checked, fails, wit, True)
        rng = random.Random(seed)
        checked = fails = 0
        wit = None
        for _ in range(samples):
            x = qmask & rng.getrandbits(len(ground))
            if not x:
                continue
            checked += 1
            if not kernels.same_restriction(fa, fb, x):
                fails += 1
                wit = wit or frozenset(v for v in ground if x >> index[v] & 1)
        return AnchorCheck(fails == 0, checked, fails, wit, False, f"sampled {samples} subsets of Q")
    # reference path: Counter-based canonical records
    rng = random.Random(seed)
    if exhaustive:
        subsets = (frozenset(c) for r in range(1, len(q) + 1) for c in combinations(q, r))
    else:
        subsets = (frozenset(v for v in q if rng.random() < 0.5) for _ in range(samples))
    checked = fails = 0
    wit = None
    for x in subsets:
        if not x:
            continue
        checked += 1
        if canonical_records(t, x) != canonical_records(tprime, x):
            fails += 1
            wit = wit or x
    return AnchorCheck(fails == 0, checked, fails, wit, exhaustive)


def verify_anchor_all(t: TModel, F: Anchor | None = None, use_kernel: bool = True) -> tuple[bool, int, list]:
    """Anchoring for (t, T_{L'}) for every L' of the ground; returns
    (ok, number of L' checked, failing L' sets)."""
    table = cotree_node_anchors(t) if t.n == 1 else bicotree_node_anchors(t)
    if F is None:
        F = Anchor(table[t.root], 0)
    ground = vsorted(t.ground)
    bad = []
    n = 0
    for r in range(0, len(ground) + 1):
        for lp in combinations(ground, r):
            lp = frozenset(lp)
            n += 1
            tp = restricted_model(t, F, lp, table)
            if tp.ground != lp:
                bad.append(lp)
                continue
            if not _clean_any(tp):
                bad.append(lp)
                continue
            if not verify_anchoring(t, tp, F, use_kernel=use_kernel).ok:
                bad.append(lp)
    return not bad, n, bad


def _clean_any(m: TModel) -> bool:
    if m.is_empty():
        return True
    return is_clean_cotree(m) if m.n == 1 else not clean_violations(m)


# --------------------------------------------------------------------------
# amalgams


def _inverse(inj: Mapping) -> dict:
    return {leaf: v for v, leaf in inj.items()}


@dataclass
class AmalgamAnchor:
    anchor: Anchor
    cell: dict = field(default_factory=dict)
    pair: dict = field(default_factory=dict)


def amalgam_anchors(a: Amalgam) -> AmalgamAnchor:
    cell = {i: cotree_anchor(t) for i, t in a.cell_trees.items()}
    pair = {k: bicotree_anchor(t) for k, t in a.pair_trees.items()}
    heights = [t.height() for t in list(a.cell_trees.values()) + list(a.pair_trees.values())]
    h = max(heights, default=1)
    F: dict = {}
    for v in a.ground:
        i = a.gamma[v]
        acc = set()
        if i in cell:
            back = _inverse(a.iota_cell[i])
            acc |= {back[l] for l in cell[i].F[a.iota_cell[i][v]]}
        for key, an in pair.items():
            if i in key:
                back = _inverse(a.iota_pair[key])
                acc |= {back[l] for l in an.F[a.iota_pair[key][v]]}
        acc.add(v)
        F[v] = frozenset(acc)
    bound = h + 5 ** (h + 1) * (a.N - 1)
    return AmalgamAnchor(Anchor(F, bound), cell, pair)


def amalgam_anchor(a: Amalgam) -> Anchor:
    return amalgam_anchors(a).anchor


@dataclass
class Cover:
    zeta: dict
    p: int
    q: int
    members: dict  # frozenset S -> Amalgam


def restricted_amalgam(a: Amalgam, aa: AmalgamAnchor, u_s) -> Amalgam:
    u_s = frozenset(u_s)
    cells, pairs = {}, {}
    for i, t in a.cell_trees.items():
        lp = frozenset(a.iota_cell[i][v] for v in u_s if v in a.iota_cell[i])
        if lp:
            cells[i] = restricted_model(t, aa.cell[i], lp)
    for key, t in a.pair_trees.items():
        lp = frozenset(a.iota_pair[key][v] for v in u_s if v in a.iota_pair[key])
        if lp:
            pairs[key] = restricted_model(t, aa.pair[key], lp)
    return _assemble(u_s, {v: a.gamma[v] for v in u_s}, a.N, cells, pairs)


def build_cover(a: Amalgam, zeta: Mapping, p: int, rule: str = "preimage") -> Cover:
    """R_S for every nonempty color set S with |S| <= p*q, assembled from
    the restricted models on U_S.

    ``rule="preimage"`` takes U_S = zeta^-1(S), so that zeta(F(Y)) within S
    puts all of F(Y) inside U_S and the anchors apply.  ``rule="anchor"``
    takes U_S = {u : zeta(F(u)) within S}; that set contains Y but not
    necessarily F(Y), and the guarantee can fail (kept for comparison).
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    if set(zeta) != set(a.ground):
        raise ValueError("zeta must be total on the ground")
    aa = amalgam_anchors(a)
    q = aa.anchor.size
    colors = vsorted(set(zeta.values()))
    members = {}
    for r in range(1, min(p * q, len(colors)) + 1):
        for s in combinations(colors, r):
            s = frozenset(s)
            if rule == "preimage":
                u_s = frozenset(u for u in a.ground if zeta[u] in s)
            elif rule == "anchor":
                u_s = frozenset(u for u in a.ground if {zeta[x] for x in aa.anchor.F[u]} <= s)
            else:
                raise ValueError(f"unknown rule {rule!r}")
            members[s] = restricted_amalgam(a, aa, u_s)
    return Cover(dict(zeta), p, q, members)


def representative(a: Amalgam, x) -> object:
    """y(x): a ground vertex whose restriction contains the coupling element x."""
    if x.startswith("g:"):
        for v in a.ground:
            if ground_id(v) == x:
                return v
    for i, t in a.cell_trees.items():
        for u in t.tree.kind:
            if cell_node_id(i, u) == x:
                under = t.tree.leaves_under(u)
                return min((v for v, l in a.iota_cell[i].items() if l in under), key=vkey)
    for (i, j), t in a.pair_trees.items():
        for u in t.tree.kind:
            if pair_node_id(i, j, u) == x:
                under = t.tree.leaves_under(u)
                return min((v for v, l in a.iota_pair[(i, j)].items() if l in under), key=vkey)
    raise KeyError(x)


def amalgams_agree(a: Amalgam, r: Amalgam, y) -> bool:
    """a<Y> = r<Y> component-wise, up to isomorphism fixing the leaves."""
    y = frozenset(y)
    if not y <= r.ground:
        return False
    for i, t in a.cell_trees.items():
        x = frozenset(a.iota_cell[i][v] for v in y if v in a.iota_cell[i])
        if x and (i not in r.cell_trees
                  or canonical_records(t, x) != canonical_records(r.cell_trees[i], x)):
            return False
    for key, t in a.pair_trees.items():
        x = frozenset(a.iota_pair[key][v] for v in y if v in a.iota_pair[key])
        if x and (key not in r.pair_trees
                  or canonical_records(t, x) != canonical_records(r.pair_trees[key], x)):
            return False
    return True


def check_cover(a: Amalgam, cover: Cover, elements, max_size: int | None = None) -> tuple[bool, int, list]:
    """For every X of at most ``max_size`` (default p) coupling elements,
    M<Y_X> = R_S<Y_X> with S = zeta(F(Y_X))."""
    aa = amalgam_anchors(a)
    elements = list(elements)
    rep = {x: representative(a, x) for x in elements}
    k = cover.p if max_size is None else max_size
    seen: dict = {}
    bad = []
    n = 0
    for r in range(1, k + 1):
        for xs in combinations(elements, r):
            y = frozenset(rep[x] for x in xs)
            n += 1
            if y not in seen:
                s = frozenset(cover.zeta[v] for v in aa.anchor.closure(y))
                member = cover.members.get(s)
                seen[y] = member is not None and amalgams_agree(a, member, y)
            if not seen[y]:
                bad.append(xs)
    return not bad, n, bad


__all__ = [
    "Anchor", "AnchorCheck", "AmalgamAnchor", "Cover", "NotClean", "amalgam_anchor", "amalgam_anchors",
    "amalgams_agree", "bicotree_anchor", "bicotree_node_anchors", "build_cover", "check_cover",
    "cotree_anchor", "cotree_node_anchors", "representative", "restricted_amalgam", "restricted_model",
    "verify_anchor_all", "verify_anchoring",
]
