"""Splits, amalgam models and the SBuild reading of an amalgam."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .bicotree import NotSob, bipartite_of, sob_decompose
from .cotree import NotCograph, cograph_decompose
from .structure import (
    Graph,
    RelStructure,
    UnknownVertex,
    induced_subgraph,
    semi_induced,
    vkey,
    vsorted,
)
from .tmodel import (
    A,
    BICOTREE_TABLES,
    C,
    LEAF,
    SemiPlaneTree,
    TModel,
    build,
    check,
    empty_model,
    from_json,
    node_type,
    restrict,
    to_json,
)


class SplitError(ValueError):
    def __init__(self, report: "SplitReport"):
        super().__init__("; ".join(str(e) for e in report.failures))
        self.report = report


class BrokenInjection(ValueError):
    pass


@dataclass(frozen=True)
class SplitFailure:
    where: tuple
    problem: str
    witness: list | None = None

    def __str__(self) -> str:
        w = f" witness={self.witness}" if self.witness else ""
        return f"{self.where}: {self.problem}{w}"


@dataclass
class SplitReport:
    failures: list = field(default_factory=list)
    heights: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures


@dataclass
class Split:
    """A coloring ``gamma`` of ``graph`` with N colors claimed to have height h.

    ``witnesses`` optionally holds models (keyed by ``i`` or ``(i, j)``) that
    certify the height of a cell or a pair.
    """

    graph: Graph
    gamma: dict
    N: int
    h: int
    witnesses: dict = field(default_factory=dict)

    def cell(self, i: int) -> frozenset:
        return frozenset(v for v, c in self.gamma.items() if c == i)


def _cells(gamma: Mapping, N: int) -> dict:
    out: dict = {i: set() for i in range(1, N + 1)}
    for v, c in gamma.items():
        out[c].add(v)
    return {i: frozenset(s) for i, s in out.items()}


def verify_split(g: Graph, gamma: Mapping, N: int, h: int, witnesses: Mapping | None = None) -> SplitReport:
    """Check every cell (cograph of height <= h) and every pair of cells
    (sob of height <= h).  A supplied witness model of height <= h that
    builds the right graph also certifies the height; a supplied witness
    that is malformed or builds a different graph is reported."""
    rep = SplitReport()
    witnesses = witnesses or {}
    missing = g.vertices - set(gamma)
    if missing:
        rep.failures.append(SplitFailure(("gamma",), "coloring is not total", vsorted(missing)))
        return rep
    bad = [v for v, c in gamma.items() if not (isinstance(c, int) and 1 <= c <= N)]
    if bad:
        rep.failures.append(SplitFailure(("gamma",), f"colors outside 1..{N}", vsorted(bad)))
        return rep
    cells = _cells(gamma, N)
    for i in range(1, N + 1):
        if not cells[i]:
            continue
        sub = induced_subgraph(g, cells[i])
        try:
            t = cograph_decompose(sub)
        except NotCograph as e:
            rep.failures.append(SplitFailure((i,), "cell is not a cograph", e.witness))
            continue
        rep.heights[i] = _certified_height(rep, (i,), t, witnesses.get(i), lambda m: build(m) == sub)
        if rep.heights[i] > h:
            rep.failures.append(SplitFailure((i,), f"cell height {rep.heights[i]} > {h}"))
    for i in range(1, N + 1):
        for j in range(i + 1, N + 1):
            if not cells[i] or not cells[j]:
                continue
            b = semi_induced(g, cells[i], cells[j])
            try:
                t = sob_decompose(b)
            except NotSob as e:
                rep.failures.append(SplitFailure((i, j), "pair is not a sob", e.witness))
                continue
            rep.heights[(i, j)] = _certified_height(
                rep, (i, j), t, witnesses.get((i, j)), lambda m: m.n == 2 and bipartite_of(m) == b)
            if rep.heights[(i, j)] > h:
                rep.failures.append(SplitFailure((i, j), f"pair height {rep.heights[(i, j)]} > {h}"))
    return rep


def _certified_height(rep: SplitReport, where: tuple, t: TModel, wit: TModel | None, builds_ok) -> int:
    best = t.height()
    if wit is None:
        return best
    problems = validate_quiet(wit)
    if problems:
        rep.failures.append(SplitFailure(where, "witness model is malformed", problems[:3]))
        return best
    try:
        ok = builds_ok(wit)
    except ValueError:  # e.g. an edge between two leaves of one color
        ok = False
    if not ok:
        rep.failures.append(SplitFailure(where, "witness model builds a different graph"))
        return best
    return min(best, wit.height())


def validate_quiet(m: TModel) -> list:
    from .tmodel import validate
    return validate(m)


# --------------------------------------------------------------------------
# splits from T-models


def _retype(m: TModel, n: int, gamma: dict, spec: dict) -> TModel:
    """Rebuild ``m`` with per-node (kind, table, reverse_children) overrides."""
    t = m.tree
    kind, order, kappa = dict(t.kind), {}, {}
    for u, (k, tab, rev) in spec.items():
        kind[u] = k
        kappa[u] = tab
        if k == C:
            kids = t.children[u]
            order[u] = tuple(reversed(kids)) if rev else tuple(kids)
    return TModel(SemiPlaneTree(t.root, kind, t.parent, order), n, gamma, kappa)


def cell_tree_from(m: TModel, i: int) -> TModel:
    """``m`` restricted to color ``i`` read as a (possibly non-clean) cotree."""
    r = restrict(m, [v for v in m.ground if m.gamma[v] == i])
    if r.is_empty():
        return empty_model(1)
    spec = {u: (A, ((r.kappa[u][i - 1][i - 1],),), False)
            for u, k in r.tree.kind.items() if k != LEAF}
    return _retype(r, 1, {v: 1 for v in r.ground}, spec)


def pair_tree_from(m: TModel, i: int, j: int) -> TModel:
    """``m`` restricted to colors i, j as a bicotree: colors become 1, 2 and
    each node is typed by the pair (kappa(i,j), kappa(j,i))."""
    r = restrict(m, [v for v in m.ground if m.gamma[v] in (i, j)])
    if r.is_empty():
        return empty_model(2)
    spec = {}
    for u, k in r.tree.kind.items():
        if k == LEAF:
            continue
        a, b = r.kappa[u][i - 1][j - 1], r.kappa[u][j - 1][i - 1]
        if k == A or a == b:
            ty = "B" if a or b else "U"
            spec[u] = (A, BICOTREE_TABLES[ty], False)
        else:
            spec[u] = (C, BICOTREE_TABLES["O"], b)
    gamma = {v: 1 if m.gamma[v] == i else 2 for v in r.ground}
    return _retype(r, 2, gamma, spec)


def split_from_tmodel(m: TModel) -> Split:
    """The split given by the leaf colors of ``m``, with the restricted models
    as height witnesses."""
    check(m)
    g = build(m)
    wit: dict = {}
    for i in range(1, m.n + 1):
        t = cell_tree_from(m, i)
        if not t.is_empty():
            wit[i] = t
        for j in range(i + 1, m.n + 1):
            p = pair_tree_from(m, i, j)
            if not p.is_empty():
                wit[(i, j)] = p
    return Split(g, dict(m.gamma), m.n, m.height(), wit)


# --------------------------------------------------------------------------
# amalgams


@dataclass
class Amalgam:
    """Ground set with cell coloring, one cotree per nonempty cell, one
    bicotree per pair of cells (i < j) with a nonempty union, and the
    injection system sending ground vertices to tree leaves."""

    ground: frozenset
    gamma: dict
    N: int
    cell_trees: dict
    pair_trees: dict
    iota_cell: dict
    iota_pair: dict
    attachments: list = field(default_factory=list)

    def cells(self) -> dict:
        return _cells(self.gamma, self.N)


def _attachments(iota_cell: Mapping, iota_pair: Mapping) -> list:
    out = []
    for i in sorted(iota_cell):
        out.extend((v, ("c", i), leaf) for v, leaf in iota_cell[i].items())
    for key in sorted(iota_pair):
        out.extend((v, ("p",) + key, leaf) for v, leaf in iota_pair[key].items())
    out.sort(key=lambda e: (vkey(e[0]), e[1]))
    return out


def _assemble(ground, gamma, N, cells: dict, pairs: dict) -> Amalgam:
    ic = {i: {v: v for v in t.ground} for i, t in cells.items()}
    ip = {k: {v: v for v in t.ground} for k, t in pairs.items()}
    return Amalgam(frozenset(ground), dict(gamma), N, cells, pairs, ic, ip, _attachments(ic, ip))


def amalgam_build(g: Graph, split: Split) -> Amalgam:
    """Clean amalgam of ``g`` over ``split``: canonical cotrees and bicotrees."""
    rep = verify_split(g, split.gamma, split.N, split.h, split.witnesses)
    if not rep.ok:
        raise SplitError(rep)
    cells = _cells(split.gamma, split.N)
    ct, pt = {}, {}
    for i in range(1, split.N + 1):
        if cells[i]:
            ct[i] = cograph_decompose(induced_subgraph(g, cells[i]))
        for j in range(i + 1, split.N + 1):
            if cells[i] | cells[j]:
                pt[(i, j)] = sob_decompose(semi_induced(g, cells[i], cells[j]))
    return _assemble(g.vertices, split.gamma, split.N, ct, pt)


def injection_problems(a: Amalgam) -> list[str]:
    out = []
    cells = a.cells()
    if set(a.gamma) != set(a.ground):
        out.append("gamma does not cover the ground exactly")
    for i in range(1, a.N + 1):
        want = cells.get(i, frozenset())
        t = a.cell_trees.get(i)
        inj = a.iota_cell.get(i, {})
        if not want:
            if t is not None and not t.is_empty():
                out.append(f"cell {i} is empty but has a tree")
            continue
        if t is None:
            out.append(f"cell {i} has no tree")
            continue
        if set(inj) != set(want):
            out.append(f"iota_{i} domain differs from V_{i}")
        img = list(inj.values())
        if len(set(img)) != len(img) or set(img) != set(t.ground):
            out.append(f"iota_{i} is not a bijection onto the leaves of tree {i}")
    for i in range(1, a.N + 1):
        for j in range(i + 1, a.N + 1):
            want = cells.get(i, frozenset()) | cells.get(j, frozenset())
            t = a.pair_trees.get((i, j))
            inj = a.iota_pair.get((i, j), {})
            if not want:
                continue
            if t is None:
                out.append(f"pair {i},{j} has no tree")
                continue
            if set(inj) != set(want):
                out.append(f"iota_{i},{j} domain differs from V_{i} u V_{j}")
                continue
            img = list(inj.values())
            if len(set(img)) != len(img) or set(img) != set(t.ground):
                out.append(f"iota_{i},{j} is not a bijection onto the leaves of tree {i},{j}")
                continue
            for v, leaf in inj.items():
                if t.gamma[leaf] != (1 if a.gamma[v] == i else 2):
                    out.append(f"iota_{i},{j} sends {v!r} to a leaf of the wrong color")
                    break
    if a.attachments != _attachments(a.iota_cell, a.iota_pair):
        out.append("attachment edges disagree with the injections")
    return out


def sbuild(a: Amalgam) -> Graph:
    """The graph read off an amalgam: same-cell pairs through the cell
    cotree, cross-cell pairs through the pair bicotree."""
    problems = injection_problems(a)
    if problems:
        raise BrokenInjection("; ".join(problems))
    cells = a.cells()
    edges = []
    for i in range(1, a.N + 1):
        if cells[i]:
            t, inj = a.cell_trees[i], a.iota_cell[i]
            g = build(t)
            vs = vsorted(cells[i])
            for k, x in enumerate(vs):
                for y in vs[k + 1:]:
                    if g.has_edge(inj[x], inj[y]):
                        edges.append((x, y))
        for j in range(i + 1, a.N + 1):
            if not (cells[i] and cells[j]):
                continue
            t, inj = a.pair_trees[(i, j)], a.iota_pair[(i, j)]
            g = build(t)
            for x in cells[i]:
                for y in cells[j]:
                    if g.has_edge(inj[x], inj[y]):
                        edges.append((x, y))
    return Graph(a.ground, edges)


def amalgam_restrict(a: Amalgam, w) -> Amalgam:
    """Component-wise restriction to the ground subset ``w``."""
    w = frozenset(w)
    bad = w - a.ground
    if bad:
        raise UnknownVertex(vsorted(bad)[0])
    ct, pt, ic, ip = {}, {}, {}, {}
    for i, t in a.cell_trees.items():
        keep = {v: l for v, l in a.iota_cell[i].items() if v in w}
        if keep:
            ct[i] = restrict(t, keep.values())
            ic[i] = keep
    for key, t in a.pair_trees.items():
        keep = {v: l for v, l in a.iota_pair[key].items() if v in w}
        if keep:
            pt[key] = restrict(t, keep.values())
            ip[key] = keep
    gamma = {v: a.gamma[v] for v in w}
    return Amalgam(w, gamma, a.N, ct, pt, ic, ip, _attachments(ic, ip))


# --------------------------------------------------------------------------
# coupling view


def cell_node_id(i: int, u) -> str:
    return f"c{i}:{u}"


def pair_node_id(i: int, j: int, u) -> str:
    return f"p{i},{j}:{u}"


def ground_id(v) -> str:
    return f"g:{v}"


TYPE_UNARIES = ("Leaf", "U", "J", "B", "O")


def coupling_view(a: Amalgam) -> RelStructure:
    """One structure holding the ground, every tree and the attachment edges.

    E: tree edges and attachment edges (symmetric); Lt: the child sequence
    of every C-node (a disjoint union of chains); Gr: ground; L<i>: cells;
    Leaf/U/J/B/O: node types; Col1/Col2: leaf colors in pair trees.
    """
    sig = {"E": 2, "Lt": 2, "Gr": 1, "Col1": 1, "Col2": 1}
    sig.update({t: 1 for t in TYPE_UNARIES})
    sig.update({f"L{i}": 1 for i in range(1, a.N + 1)})
    dom: list = []
    rel: dict = {k: set() for k in sig}
    for v in a.ground:
        gid = ground_id(v)
        dom.append(gid)
        rel["Gr"].add((gid,))
        rel[f"L{a.gamma[v]}"].add((gid,))

    def add_tree(t: TModel, name):
        tr = t.tree
        for u in tr.kind:
            x = name(u)
            dom.append(x)
            ty = node_type(t, u)
            if ty in TYPE_UNARIES:
                rel[ty].add((x,))
            if tr.kind[u] == LEAF and t.n == 2:
                rel[f"Col{t.gamma[u]}"].add((x,))
            p = tr.parent[u]
            if p != u:
                rel["E"].add((x, name(p)))
                rel["E"].add((name(p), x))
            if tr.kind[u] == C:
                kids = tr.children[u]
                for k, c in enumerate(kids):
                    for d in kids[k + 1:]:
                        rel["Lt"].add((name(c), name(d)))

    for i in sorted(a.cell_trees):
        add_tree(a.cell_trees[i], lambda u, i=i: cell_node_id(i, u))
    for (i, j) in sorted(a.pair_trees):
        add_tree(a.pair_trees[(i, j)], lambda u, i=i, j=j: pair_node_id(i, j, u))
    for v, where, leaf in a.attachments:
        x = cell_node_id(where[1], leaf) if where[0] == "c" else pair_node_id(where[1], where[2], leaf)
        rel["E"].add((ground_id(v), x))
        rel["E"].add((x, ground_id(v)))
    return RelStructure(sig, dom, rel)


def chain_violations(s: RelStructure) -> list:
    """Elements whose Lt-comparable set is not totally ordered by Lt."""
    lt = s.relations.get("Lt", frozenset())
    comp: dict = {}
    for x, y in lt:
        comp.setdefault(x, set()).add(y)
        comp.setdefault(y, set()).add(x)
    bad = []
    for x, ys in comp.items():
        grp = sorted(ys | {x}, key=vkey)
        for k, p in enumerate(grp):
            for q in grp[k + 1:]:
                if ((p, q) in lt) == ((q, p) in lt):
                    bad.append((x, p, q))
    return bad


# --------------------------------------------------------------------------
# JSON


def _pairs(m: Mapping) -> list:
    return [[v, m[v]] for v in vsorted(m)]


def _unpair(xs) -> dict:
    return {_tup(v): _tup(l) for v, l in xs}


def _tup(x):
    return tuple(x) if isinstance(x, list) else x


def amalgam_to_json(a: Amalgam) -> dict:
    return {
        "N": a.N,
        "ground": vsorted(a.ground),
        "gamma": _pairs(a.gamma),
        "cells": {str(i): to_json(t) for i, t in sorted(a.cell_trees.items())},
        "pairs": {f"{i},{j}": to_json(t) for (i, j), t in sorted(a.pair_trees.items())},
        "iota_cell": {str(i): _pairs(m) for i, m in sorted(a.iota_cell.items())},
        "iota_pair": {f"{i},{j}": _pairs(m) for (i, j), m in sorted(a.iota_pair.items())},
        "attachments": [[v, list(w), l] for v, w, l in a.attachments],
    }


def _pkey(s: str) -> tuple:
    i, j = s.split(",")
    return int(i), int(j)


def amalgam_from_json(d: Mapping) -> Amalgam:
    ic = {int(i): _unpair(m) for i, m in d["iota_cell"].items()}
    ip = {_pkey(k): _unpair(m) for k, m in d["iota_pair"].items()}
    att = [(_tup(v), tuple(w), _tup(l)) for v, w, l in d.get("attachments", [])]
    if "attachments" not in d:
        att = _attachments(ic, ip)
    return Amalgam(
        frozenset(_tup(v) for v in d["ground"]),
        _unpair(d["gamma"]),
        int(d["N"]),
        {int(i): from_json(t) for i, t in d["cells"].items()},
        {_pkey(k): from_json(t) for k, t in d["pairs"].items()},
        ic, ip, att,
    )


def split_to_json(s: Split) -> dict:
    return {"N": s.N, "h": s.h, "gamma": _pairs(s.gamma)}


def split_from_json(d: Mapping, g: Graph) -> Split:
    """``gamma`` may be a list of [v, color] pairs or a {v: color} object;
    keys are matched to the graph's vertices by their string form."""
    names = {str(v): v for v in g.vertices}
    raw = d["gamma"]
    items = raw.items() if isinstance(raw, Mapping) else raw
    gamma = {names.get(str(v), _tup(v)): int(c) for v, c in items}
    return Split(g, gamma, int(d["N"]), int(d["h"]))


__all__ = [
    "Amalgam", "BrokenInjection", "Split", "SplitError", "SplitFailure", "SplitReport",
    "amalgam_build", "amalgam_from_json", "amalgam_restrict", "amalgam_to_json", "cell_tree_from",
    "chain_violations", "coupling_view", "injection_problems", "pair_tree_from", "sbuild",
    "split_from_json", "split_from_tmodel", "split_to_json", "verify_split",
]
