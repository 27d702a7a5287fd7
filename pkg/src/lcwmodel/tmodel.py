"""Semi-plane rooted trees and T-models.

A tree is stored as a parent map (the root is its own parent), a node-kind map
over ``{"L", "A", "C"}`` and, for C-nodes, the left-to-right child sequence.
A T-model adds a leaf coloring ``gamma`` into ``1..n`` and one ``n x n``
boolean table ``kappa`` per internal node; two leaves are adjacent according
to the table of their lowest common ancestor, read in the order of the leaves
when that ancestor is a C-node.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from typing import Any, Hashable, Iterable, Mapping, Sequence

from .structure import Graph, RelStructure, UnknownVertex, vkey, vsorted

LEAF, A, C = "L", "A", "C"
KINDS = (LEAF, A, C)

Node = Hashable
Table = tuple  # tuple[tuple[bool, ...], ...]


class MalformedModel(ValueError):
    """Raised by operations that need a valid model; carries the violation list."""

    def __init__(self, problems: list[str]):
        super().__init__("; ".join(problems[:5]))
        self.problems = problems


class DecodeError(ValueError):
    pass


def fresh_ids(taken: Iterable, prefix: str = "_") -> Iterable[str]:
    taken = set(taken)
    i = 0
    while True:
        name = f"{prefix}{i}"
        i += 1
        if name not in taken:
            yield name


@dataclass(frozen=True, eq=False)
class SemiPlaneTree:
    root: Node | None
    kind: Mapping[Node, str]
    parent: Mapping[Node, Node]
    order: Mapping[Node, tuple]

    def __init__(self, root, kind: Mapping, parent: Mapping, order: Mapping | None = None):
        object.__setattr__(self, "root", root)
        object.__setattr__(self, "kind", dict(kind))
        object.__setattr__(self, "parent", dict(parent))
        object.__setattr__(self, "order", {u: tuple(o) for u, o in (order or {}).items()})
        kids: dict = {u: [] for u in self.kind}
        for u, p in self.parent.items():
            if u != p and p in kids:
                kids[p].append(u)
        children = {}
        for u, ks in kids.items():
            if u in self.order and set(self.order[u]) == set(ks):
                children[u] = self.order[u]
            else:
                children[u] = tuple(vsorted(ks))
        object.__setattr__(self, "children", children)

    @property
    def nodes(self) -> frozenset:
        return frozenset(self.kind)

    @property
    def leaves(self) -> frozenset:
        return frozenset(u for u, k in self.kind.items() if k == LEAF)

    def is_empty(self) -> bool:
        return self.root is None

    def ancestors(self, u: Node) -> list:
        """Path root -> u (inclusive)."""
        path = [u]
        seen = {u}
        while self.parent[path[-1]] != path[-1]:
            p = self.parent[path[-1]]
            if p in seen:
                raise MalformedModel([f"parent cycle through {p!r}"])
            seen.add(p)
            path.append(p)
        return path[::-1]

    def depth(self, u: Node) -> int:
        return len(self.ancestors(u)) - 1

    def preorder(self) -> list:
        if self.root is None:
            return []
        out = []
        stack = [self.root]
        while stack:
            u = stack.pop()
            out.append(u)
            stack.extend(reversed(self.children[u]))
        return out

    def descendants(self, u: Node) -> list:
        out = []
        stack = [u]
        while stack:
            x = stack.pop()
            out.append(x)
            stack.extend(reversed(self.children[x]))
        return out

    def leaves_under(self, u: Node) -> frozenset:
        return frozenset(x for x in self.descendants(u) if self.kind[x] == LEAF)

    def lca(self, x: Node, y: Node) -> Node:
        px, py = self.ancestors(x), self.ancestors(y)
        w = px[0]
        for a, b in zip(px, py):
            if a != b:
                break
            w = a
        return w

    def st(self, w: Node, y: Node) -> Node:
        """Child of ``w`` on the path to ``y`` (``w`` itself unless w is a strict ancestor)."""
        path = self.ancestors(y)
        if w in path[:-1]:
            return path[path.index(w) + 1]
        return w

    def position(self, u: Node) -> int:
        p = self.parent[u]
        return self.children[p].index(u)

    def height(self) -> int:
        if self.root is None:
            return 0
        best = 0
        stack = [(self.root, 1)]
        while stack:
            u, d = stack.pop()
            best = max(best, d)
            stack.extend((c, d + 1) for c in self.children[u])
        return best

    def precedes(self, x: Node, y: Node) -> bool:
        """The order ``<`` of the sigma2 encoding.

        ``x < y`` when x is a strict ancestor of y, or when the infimum ``w`` is
        a C-node and the child of w towards x comes before the child towards y.
        """
        if x == y:
            return False
        w = self.lca(x, y)
        if w == x:
            return True
        if w == y or self.kind[w] != C:
            return False
        kids = self.children[w]
        return kids.index(self.st(w, x)) < kids.index(self.st(w, y))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SemiPlaneTree):
            return NotImplemented
        return (self.root == other.root and self.kind == other.kind
                and self.parent == other.parent and self._c_orders() == other._c_orders())

    def _c_orders(self) -> dict:
        return {u: self.children[u] for u, k in self.kind.items() if k == C}

    def __hash__(self) -> int:
        return hash((self.root, len(self.kind)))

    def __repr__(self) -> str:
        return f"SemiPlaneTree(root={self.root!r}, nodes={len(self.kind)}, height={self.height()})"


@dataclass(frozen=True, eq=False)
class TModel:
    tree: SemiPlaneTree
    n: int
    gamma: Mapping[Node, int]
    kappa: Mapping[Node, Table]

    def __init__(self, tree: SemiPlaneTree, n: int, gamma: Mapping, kappa: Mapping):
        object.__setattr__(self, "tree", tree)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "gamma", dict(gamma))
        object.__setattr__(self, "kappa", {u: tuple(tuple(bool(b) for b in row) for row in t)
                                           for u, t in kappa.items()})

    @property
    def ground(self) -> frozenset:
        return self.tree.leaves

    @property
    def root(self):
        return self.tree.root

    def is_empty(self) -> bool:
        return self.tree.root is None

    def height(self) -> int:
        return self.tree.height()

    def adjacent(self, x: Node, y: Node) -> bool:
        if x == y:
            return False
        t = self.tree
        w = t.lca(x, y)
        tab = self.kappa[w]
        cx, cy = self.gamma[x], self.gamma[y]
        if t.kind[w] == C:
            kids = t.children[w]
            if kids.index(t.st(w, x)) > kids.index(t.st(w, y)):
                cx, cy = cy, cx
            return tab[cx - 1][cy - 1]
        return tab[cx - 1][cy - 1] or tab[cy - 1][cx - 1]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TModel):
            return NotImplemented
        return (self.n == other.n and self.tree == other.tree and self.gamma == other.gamma
                and self.kappa == other.kappa)

    def __hash__(self) -> int:
        return hash((self.n, self.tree))

    def __repr__(self) -> str:
        return (f"TModel(n={self.n}, leaves={len(self.ground)}, nodes={len(self.tree.kind)}, "
                f"height={self.height()})")


def empty_model(n: int) -> TModel:
    return TModel(SemiPlaneTree(None, {}, {}, {}), n, {}, {})


# --------------------------------------------------------------------------
# node-type tables

F_, T_ = False, True
COTREE_TABLES = {"U": ((F_,),), "J": ((T_,),)}
BICOTREE_TABLES = {"U": ((F_, F_), (F_, F_)), "B": ((F_, T_), (T_, F_)), "O": ((F_, T_), (F_, F_))}
BICOTREE_KINDS = {"U": A, "B": A, "O": C}


def node_type(m: TModel, u: Node) -> str | None:
    """U/J for one-color models, U/B/O for two-color models, 'Leaf' on leaves."""
    kind = m.tree.kind[u]
    if kind == LEAF:
        return "Leaf"
    tab = m.kappa.get(u)
    if m.n == 1:
        for name, t in COTREE_TABLES.items():
            if tab == t:
                return name
        return None
    if m.n == 2:
        for name, t in BICOTREE_TABLES.items():
            if tab == t and kind == BICOTREE_KINDS[name]:
                return name
    return None


def _is_internal(s) -> bool:
    return isinstance(s, tuple) and len(s) == 2 and isinstance(s[1], list)


def from_nested(spec: Any, n: int, gamma: Mapping | None = None,
                tables: Mapping[str, tuple[str, Table]] | None = None) -> TModel:
    """Build a model from nested ``(label, [children])`` tuples.

    Leaves are bare ids.  ``label`` is either a key of ``tables`` (mapping to
    ``(kind, kappa)``) or an explicit ``(kind, kappa)`` pair.  For ``n == 1``
    and ``n == 2`` the cotree / bicotree type names are understood by default.
    """
    if tables is None:
        if n == 1:
            tables = {k: (A, t) for k, t in COTREE_TABLES.items()}
        elif n == 2:
            tables = {k: (BICOTREE_KINDS[k], t) for k, t in BICOTREE_TABLES.items()}
        else:
            tables = {}
    leaves: list = []

    def collect(s):
        if _is_internal(s):
            for c in s[1]:
                collect(c)
        else:
            leaves.append(s)

    collect(spec)
    if len(set(leaves)) != len(leaves):
        raise ValueError("duplicate leaf ids")
    ids = fresh_ids(leaves)
    kind, parent, order, kappa = {}, {}, {}, {}

    def walk(s, par):
        if _is_internal(s):
            label, kids = s
            k, tab = tables[label] if isinstance(label, str) else label
            u = next(ids)
            kind[u] = k
            kappa[u] = tab
            parent[u] = u if par is None else par
            cs = [walk(c, u) for c in kids]
            if k == C:
                order[u] = tuple(cs)
            return u
        kind[s] = LEAF
        parent[s] = s if par is None else par
        return s

    root = walk(spec, None)
    gamma = dict(gamma) if gamma else {v: 1 for v in leaves}
    return TModel(SemiPlaneTree(root, kind, parent, order), n, gamma, kappa)


def to_nested(m: TModel) -> Any:
    t = m.tree

    def walk(u):
        if t.kind[u] == LEAF:
            return u
        label = node_type(m, u) or (t.kind[u], m.kappa[u])
        return (label, [walk(c) for c in t.children[u]])

    return None if t.root is None else walk(t.root)


# --------------------------------------------------------------------------
# validation


def validate(m: TModel) -> list[str]:
    """Every violated TModel invariant, as human-readable strings."""
    out = []
    t = m.tree
    if t.root is None:
        if t.kind:
            out.append("nodes present but no root")
        return out
    if t.root not in t.kind:
        return [f"root {t.root!r} is not a node"]
    if t.parent.get(t.root) != t.root:
        out.append("root must be its own parent")
    for u, k in t.kind.items():
        if k not in KINDS:
            out.append(f"node {u!r} has unknown kind {k!r}")
        if u not in t.parent:
            out.append(f"node {u!r} has no parent entry")
            continue
        if t.parent[u] not in t.kind:
            out.append(f"node {u!r} has unknown parent {t.parent[u]!r}")
        if u != t.root and t.parent[u] == u:
            out.append(f"second root {u!r}")
    if out:
        return out
    for u in t.kind:
        seen = set()
        x = u
        while t.parent[x] != x:
            if x in seen:
                out.append(f"parent cycle through {x!r}")
                break
            seen.add(x)
            x = t.parent[x]
        else:
            if x != t.root:
                out.append(f"node {u!r} does not reach the root")
    if out:
        return out
    for u, k in t.kind.items():
        kids = t.children[u]
        if k == LEAF and kids:
            out.append(f"leaf {u!r} has children")
        if k in (A, C) and not kids:
            out.append(f"internal node {u!r} has no children")
        if k == C:
            o = t.order.get(u)
            if o is None or sorted(o, key=vkey) != sorted(kids, key=vkey) or len(set(o)) != len(o):
                out.append(f"child order at C-node {u!r} is not a permutation of its children")
        elif u in t.order:
            out.append(f"non-C node {u!r} carries a child order")
    for u, k in t.kind.items():
        if k == LEAF:
            c = m.gamma.get(u)
            if c is None:
                out.append(f"leaf {u!r} has no color")
            elif not (isinstance(c, int) and 1 <= c <= m.n):
                out.append(f"leaf {u!r} color {c!r} outside 1..{m.n}")
        else:
            tab = m.kappa.get(u)
            if tab is None:
                out.append(f"internal node {u!r} has no kappa table")
                continue
            if len(tab) != m.n or any(len(row) != m.n for row in tab):
                out.append(f"kappa at {u!r} is not {m.n}x{m.n}")
                continue
            if k == A and any(tab[i][j] != tab[j][i] for i in range(m.n) for j in range(m.n)):
                out.append(f"kappa at A-node {u!r} is not symmetric")
    for v in m.gamma:
        if t.kind.get(v) != LEAF:
            out.append(f"gamma defined on non-leaf {v!r}")
    for u in m.kappa:
        if t.kind.get(u) not in (A, C):
            out.append(f"kappa defined on non-internal node {u!r}")
    return out


def check(m: TModel) -> TModel:
    problems = validate(m)
    if problems:
        raise MalformedModel(problems)
    return m


def height(m: TModel) -> int:
    return m.height()


# --------------------------------------------------------------------------
# Build, restriction, submodels


def build(m: TModel) -> Graph:
    check(m)
    t = m.tree
    leaves = vsorted(t.leaves)
    paths = {x: t.ancestors(x) for x in leaves}
    edges = []
    for i, x in enumerate(leaves):
        px = paths[x]
        for y in leaves[i + 1:]:
            py = paths[y]
            d = 0
            while d < len(px) and d < len(py) and px[d] == py[d]:
                d += 1
            w = px[d - 1]
            tab = m.kappa[w]
            cx, cy = m.gamma[x], m.gamma[y]
            if t.kind[w] == C:
                kids = t.children[w]
                if kids.index(px[d]) > kids.index(py[d]):
                    cx, cy = cy, cx
                adj = tab[cx - 1][cy - 1]
            else:
                adj = tab[cx - 1][cy - 1] or tab[cy - 1][cx - 1]
            if adj:
                edges.append((x, y))
    return Graph(leaves, edges)


def _induced_model(m: TModel, keep: set, root) -> TModel:
    t = m.tree
    kind = {u: t.kind[u] for u in keep}
    parent = {u: (u if u == root else t.parent[u]) for u in keep}
    order = {u: tuple(c for c in t.children[u] if c in keep) for u in keep if t.kind[u] == C}
    gamma = {u: m.gamma[u] for u in keep if t.kind[u] == LEAF}
    kappa = {u: m.kappa[u] for u in keep if t.kind[u] != LEAF}
    return TModel(SemiPlaneTree(root, kind, parent, order), m.n, gamma, kappa)


def restrict(m: TModel, x: Iterable) -> TModel:
    """The submodel induced by the ancestors of ``x``; unary nodes are kept."""
    x = frozenset(x)
    t = m.tree
    bad = x - t.leaves
    if bad:
        raise UnknownVertex(next(iter(bad)))
    if not x:
        return empty_model(m.n)
    keep: set = set()
    for v in x:
        u = v
        while u not in keep:
            keep.add(u)
            if t.parent[u] == u:
                break
            u = t.parent[u]
    return _induced_model(m, keep, t.root)


def subtree_at(m: TModel, u: Node) -> TModel:
    if u not in m.tree.kind:
        raise UnknownVertex(u)
    return _induced_model(m, set(m.tree.descendants(u)), u)


def splice_root(m: TModel) -> TModel:
    """Drop a root with a single child (semantics are unchanged)."""
    t = m.tree
    while t.root is not None and t.kind[t.root] != LEAF and len(t.children[t.root]) == 1:
        m = subtree_at(m, t.children[t.root][0])
        t = m.tree
    return m


def relabel_colors(m: TModel, mapping: Mapping[int, int], n: int) -> TModel:
    return TModel(m.tree, n, {v: mapping[c] for v, c in m.gamma.items()}, m.kappa)


def graft(n: int, kind: str, table: Table, children: Sequence[TModel], ids: Iterable | None = None) -> TModel:
    """New root of the given kind/table over submodels with disjoint leaves.

    Internal ids that clash between children are renamed.
    """
    leaves: set = set()
    for c in children:
        if leaves & c.ground:
            raise ValueError("children share leaves")
        leaves |= c.ground
    taken: set = set(leaves)
    fixed = []
    for c in children:
        inner = set(c.tree.kind) - c.ground
        if inner & taken:
            c = _rename_with(c, fresh_ids(taken | set(c.tree.kind)))
        taken |= set(c.tree.kind)
        fixed.append(c)
    children = fixed
    new = next(iter(ids)) if ids is not None else next(fresh_ids(taken))
    if new in taken:
        raise ValueError(f"root id {new!r} clashes")
    kd, par, order, gamma, kappa = {new: kind}, {new: new}, {}, {}, {new: table}
    for c in children:
        ct = c.tree
        for u in ct.kind:
            kd[u] = ct.kind[u]
            par[u] = new if u == ct.root else ct.parent[u]
        order.update({u: ct.children[u] for u in ct.kind if ct.kind[u] == C})
        gamma.update(c.gamma)
        kappa.update(c.kappa)
    if kind == C:
        order[new] = tuple(c.tree.root for c in children)
    return TModel(SemiPlaneTree(new, kd, par, order), n, gamma, kappa)


def rename_internal(m: TModel, taken: Iterable = (), prefix: str = "_") -> TModel:
    """Rename internal nodes to fresh ids in preorder (deterministic output)."""
    if m.tree.root is None:
        return m
    return _rename_with(m, fresh_ids(set(m.tree.leaves) | set(taken), prefix))


def _rename_with(m: TModel, ids) -> TModel:
    t = m.tree
    ren = {}
    for u in t.preorder():
        ren[u] = u if t.kind[u] == LEAF else next(ids)
    kind = {ren[u]: k for u, k in t.kind.items()}
    parent = {ren[u]: ren[p] for u, p in t.parent.items()}
    order = {ren[u]: tuple(ren[c] for c in t.children[u]) for u in t.kind if t.kind[u] == C}
    kappa = {ren[u]: tab for u, tab in m.kappa.items()}
    return TModel(SemiPlaneTree(ren[t.root], kind, parent, order), m.n, dict(m.gamma), kappa)


# --------------------------------------------------------------------------
# isomorphism fixing the ground


def _label(m: TModel, u) -> tuple:
    if m.tree.kind[u] == LEAF:
        return (LEAF, m.gamma[u])
    return (m.tree.kind[u], m.kappa[u])


def canonical_records(m: TModel, x: Iterable | None = None) -> Counter:
    """Multiset describing ``m<x>`` up to isomorphism fixing the leaves.

    Every node of the restricted tree is named by its cluster (the leaves of
    ``x`` below it) and its rank inside the chain of nodes sharing that
    cluster; C-nodes with several restricted children add their child
    sequence.  Two restricted models are isomorphic over ``x`` exactly when
    these multisets agree.
    """
    t = m.tree
    if t.root is None:
        return Counter()
    x = t.leaves if x is None else frozenset(x)
    cluster: dict = {}
    for u in reversed(t.preorder()):
        if t.kind[u] == LEAF:
            cluster[u] = frozenset((u,)) & x
        else:
            acc = frozenset()
            for c in t.children[u]:
                acc |= cluster[c]
            cluster[u] = acc
    recs: Counter = Counter()
    chain: dict = {}
    for u in t.preorder():
        c = cluster[u]
        if not c:
            continue
        p = t.parent[u]
        chain[u] = chain[p] + 1 if p != u and cluster[p] == c else 0
        recs[("N", c, chain[u], _label(m, u))] += 1
        if t.kind[u] == C:
            kids = [k for k in t.children[u] if cluster[k]]
            if len(kids) >= 2:
                recs[("O", c, chain[u], tuple(cluster[k] for k in kids))] += 1
    return recs


def model_iso_fixing_ground(m1: TModel, m2: TModel, x: Iterable | None = None) -> bool:
    if m1.n != m2.n:
        return False
    if x is None:
        if m1.ground != m2.ground:
            return False
        return canonical_records(m1) == canonical_records(m2)
    x = frozenset(x)
    return canonical_records(m1, x) == canonical_records(m2, x)


# --------------------------------------------------------------------------
# relational encodings


SIGMA1 = {"C": 1, "Inf": 3, "Tri": 2}
SIGMA2 = {"Lt": 2, "E": 2}
SIGMA3 = {"Mr": 1, "E": 2, "Tri": 2}


def _tri(t: SemiPlaneTree) -> list:
    out = []
    for u, k in t.kind.items():
        if k == C:
            kids = t.children[u]
            out.extend((a, b) for i, a in enumerate(kids) for b in kids[i + 1:])
    return out


def _tree_edges(t: SemiPlaneTree) -> list:
    out = []
    for u, p in t.parent.items():
        if u != p:
            out.extend([(u, p), (p, u)])
    return out


def encode(t: SemiPlaneTree, level: str) -> RelStructure:
    nodes = vsorted(t.kind)
    if level == "sigma1":
        inf = [(x, y, t.lca(x, y)) for x in nodes for y in nodes]
        return RelStructure(SIGMA1, nodes, {
            "C": [(u,) for u in nodes if t.kind[u] == C], "Inf": inf, "Tri": _tri(t)})
    if level == "sigma2":
        lt = [(x, y) for x in nodes for y in nodes if t.precedes(x, y)]
        return RelStructure(SIGMA2, nodes, {"Lt": lt, "E": _tree_edges(t)})
    if level == "sigma3":
        mr = [] if t.root is None else [(t.root,)]
        return RelStructure(SIGMA3, nodes, {"Mr": mr, "E": _tree_edges(t), "Tri": _tri(t)})
    raise ValueError(f"unknown level {level!r}")


def decode_sigma3(s: RelStructure, h: int) -> SemiPlaneTree:
    """Rebuild a tree of height at most ``h`` from its sigma3 reduct.

    Ancestry is recovered from distances to the root (bounded by ``h``), the
    C-flag from the presence of ordered siblings.  A C-node with a single
    child is indistinguishable from an A-node here and decodes as one.
    """
    for rel in SIGMA3:
        if rel not in s.signature:
            raise DecodeError(f"missing relation {rel}")
    if not s.domain:
        return SemiPlaneTree(None, {}, {}, {})
    roots = s.unary("Mr")
    if len(roots) != 1:
        raise DecodeError(f"expected exactly one root, got {len(roots)}")
    root = next(iter(roots))
    adj: dict = {u: set() for u in s.domain}
    for a, b in s.relations["E"]:
        if (b, a) not in s.relations["E"]:
            raise DecodeError(f"E is not symmetric at {a!r},{b!r}")
        adj[a].add(b)
    depth = {root: 0}
    parent = {root: root}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in depth:
                depth[v] = depth[u] + 1
                parent[v] = u
                queue.append(v)
            elif v != parent[u] and parent.get(v) != u:
                raise DecodeError(f"E contains a cycle through {u!r}-{v!r}")
    if len(depth) != len(s.domain):
        raise DecodeError("E is not connected")
    if max(depth.values()) + 1 > h:
        raise DecodeError(f"tree height {max(depth.values()) + 1} exceeds {h}")
    kids: dict = {u: [] for u in s.domain}
    for u, p in parent.items():
        if u != p:
            kids[p].append(u)
    tri = s.relations["Tri"]
    kind, order = {}, {}
    for u in s.domain:
        ks = kids[u]
        if not ks:
            kind[u] = LEAF
        elif any((a, b) in tri for a in ks for b in ks):
            kind[u] = C
            rank = {a: sum((b, a) in tri for b in ks) for a in ks}
            seq = sorted(ks, key=lambda a: rank[a])
            if [rank[a] for a in seq] != list(range(len(ks))):
                raise DecodeError(f"Tri is not a linear order on the children of {u!r}")
            order[u] = tuple(seq)
        else:
            kind[u] = A
    for a, b in tri:
        if parent.get(a) != parent.get(b) or a == b:
            raise DecodeError(f"Tri pair {a!r},{b!r} is not a pair of siblings")
    return SemiPlaneTree(root, kind, parent, order)


def model_structure(m: TModel) -> RelStructure:
    """Full relational view used by the formula oracle.

    Relations: L, A, C (node kinds), Inf (infimum as a ternary relation),
    Lt (the sigma2 order), Col{i} (leaf colors), K{i}_{j} (node marks for
    kappa entries that are true).
    """
    t = m.tree
    nodes = vsorted(t.kind)
    sig = {"L": 1, "A": 1, "C": 1, "Inf": 3, "Lt": 2}
    rels: dict = {
        "L": [(u,) for u in nodes if t.kind[u] == LEAF],
        "A": [(u,) for u in nodes if t.kind[u] == A],
        "C": [(u,) for u in nodes if t.kind[u] == C],
        "Inf": [(x, y, t.lca(x, y)) for x in nodes for y in nodes],
        "Lt": [(x, y) for x in nodes for y in nodes if t.precedes(x, y)],
    }
    for i in range(1, m.n + 1):
        sig[f"Col{i}"] = 1
        rels[f"Col{i}"] = [(v,) for v in nodes if m.gamma.get(v) == i]
        for j in range(1, m.n + 1):
            sig[f"K{i}_{j}"] = 1
            rels[f"K{i}_{j}"] = [(u,) for u in nodes if u in m.kappa and m.kappa[u][i - 1][j - 1]]
    return RelStructure(sig, nodes, rels)


# --------------------------------------------------------------------------
# JSON


def to_json(m: TModel) -> dict:
    t = m.tree
    nodes = []
    for u in t.preorder():
        entry: dict = {"id": u, "kind": t.kind[u], "parent": t.parent[u]}
        if u != t.root and t.kind[t.parent[u]] == C:
            entry["order_index"] = t.position(u)
        if t.kind[u] != LEAF:
            ty = node_type(m, u)
            if ty is not None:
                entry["type"] = ty
        nodes.append(entry)
    return {
        "n": m.n,
        "nodes": nodes,
        "gamma": {str(v): m.gamma[v] for v in vsorted(m.gamma)},
        "kappa": {str(u): [list(r) for r in m.kappa[u]] for u in t.preorder() if u in m.kappa},
    }


def from_json(d: Mapping) -> TModel:
    n = int(d["n"])
    kind, parent, byname = {}, {}, {}
    root = None
    positions: dict = {}
    for e in d["nodes"]:
        u = e["id"]
        if isinstance(u, list):
            u = tuple(u)
        p = e["parent"]
        if isinstance(p, list):
            p = tuple(p)
        byname[str(u)] = u
        kind[u] = e["kind"]
        parent[u] = p
        if p == u:
            root = u
        if "order_index" in e:
            positions.setdefault(p, []).append((e["order_index"], u))
    order = {p: tuple(u for _, u in sorted(ps)) for p, ps in positions.items() if kind.get(p) == C}
    gamma = {byname[k]: v for k, v in d.get("gamma", {}).items()}
    kappa = {byname[k]: v for k, v in d.get("kappa", {}).items()}
    return TModel(SemiPlaneTree(root, kind, parent, order), n, gamma, kappa)
