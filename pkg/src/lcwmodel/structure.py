"""Finite graphs, bipartite graphs, posets and relational structures.

All objects are treated as immutable values: constructors copy their inputs
into frozensets / fresh dicts and nothing here mutates them afterwards.
"""

from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Hashable, Iterable, Iterator, Mapping

Vertex = Hashable

INF = float("inf")


def vkey(v: Any) -> tuple:
    """Sort key that totally orders mixed int/str (and tuple) ids."""
    if isinstance(v, bool):
        return (0, int(v), "")
    if isinstance(v, int):
        return (0, v, "")
    if isinstance(v, str):
        return (1, 0, v)
    if isinstance(v, tuple):
        return (2, 0, tuple(vkey(x) for x in v))
    return (3, 0, repr(v))


def vsorted(items: Iterable[Any]) -> list:
    return sorted(items, key=vkey)


class UnknownVertex(KeyError):
    pass


@dataclass(frozen=True, eq=False)
class Graph:
    vertices: frozenset
    edges: frozenset  # frozenset of 2-element frozensets
    labels: Mapping[Vertex, frozenset] = field(default_factory=dict)

    def __init__(self, vertices: Iterable = (), edges: Iterable = (), labels: Mapping | None = None):
        vs = set(vertices)
        es = set()
        for e in edges:
            u, v = tuple(e)
            if u == v:
                raise ValueError(f"self-loop at {u!r}")
            vs.add(u)
            vs.add(v)
            es.add(frozenset((u, v)))
        labs = {}
        for v, ls in (labels or {}).items():
            if v not in vs:
                raise UnknownVertex(v)
            if ls:
                labs[v] = frozenset(ls)
        object.__setattr__(self, "vertices", frozenset(vs))
        object.__setattr__(self, "edges", frozenset(es))
        object.__setattr__(self, "labels", labs)
        adj: dict = {v: set() for v in vs}
        for e in es:
            u, v = tuple(e)
            adj[u].add(v)
            adj[v].add(u)
        object.__setattr__(self, "_adj", {v: frozenset(n) for v, n in adj.items()})

    def neighbors(self, v: Vertex) -> frozenset:
        try:
            return self._adj[v]
        except KeyError:
            raise UnknownVertex(v) from None

    def has_edge(self, u: Vertex, v: Vertex) -> bool:
        return frozenset((u, v)) in self.edges

    def __len__(self) -> int:
        return len(self.vertices)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.vertices == other.vertices and self.edges == other.edges
                and self.labels == other.labels)

    def __hash__(self) -> int:
        return hash((self.vertices, self.edges))

    def __repr__(self) -> str:
        es = sorted((tuple(vsorted(e)) for e in self.edges), key=vkey)
        return f"Graph(V={vsorted(self.vertices)}, E={es})"

    def edge_list(self) -> list[tuple]:
        return sorted((tuple(vsorted(e)) for e in self.edges), key=vkey)


@dataclass(frozen=True, eq=False)
class BipartiteGraph:
    graph: Graph
    side: Mapping[Vertex, int]

    def __init__(self, graph: Graph, side: Mapping[Vertex, int]):
        side = dict(side)
        if set(side) != set(graph.vertices):
            raise ValueError("side map must cover exactly the vertex set")
        if any(s not in (1, 2) for s in side.values()):
            raise ValueError("sides must be 1 or 2")
        for e in graph.edges:
            u, v = tuple(e)
            if side[u] == side[v]:
                raise ValueError(f"edge {u!r}-{v!r} inside side {side[u]}")
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "side", side)

    @property
    def vertices(self) -> frozenset:
        return self.graph.vertices

    def part(self, s: int) -> frozenset:
        return frozenset(v for v, c in self.side.items() if c == s)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BipartiteGraph):
            return NotImplemented
        return self.graph == other.graph and self.side == other.side

    def __hash__(self) -> int:
        return hash(self.graph)

    def __repr__(self) -> str:
        return f"BipartiteGraph({self.graph!r}, side={dict(sorted(self.side.items(), key=lambda kv: vkey(kv[0])))})"


@dataclass(frozen=True, eq=False)
class Poset:
    elements: frozenset
    lt: frozenset  # pairs (a, b) meaning a < b

    def __init__(self, elements: Iterable, lt: Iterable[tuple], check: bool = True):
        els = frozenset(elements)
        rel = frozenset((a, b) for a, b in lt)
        object.__setattr__(self, "elements", els)
        object.__setattr__(self, "lt", rel)
        if check:
            problems = poset_violations(els, rel)
            if problems:
                raise ValueError("not a strict partial order: " + "; ".join(problems[:3]))

    def less(self, a, b) -> bool:
        return (a, b) in self.lt

    def down(self, a) -> frozenset:
        return frozenset(x for x in self.elements if (x, a) in self.lt) | {a}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Poset):
            return NotImplemented
        return self.elements == other.elements and self.lt == other.lt

    def __hash__(self) -> int:
        return hash((self.elements, self.lt))


def poset_violations(elements: frozenset, lt: frozenset) -> list[str]:
    """Exhaustive triple scan of the strict-order axioms."""
    out = []
    for a, b in lt:
        if a not in elements or b not in elements:
            out.append(f"pair ({a!r},{b!r}) outside the ground set")
        if a == b:
            out.append(f"reflexive pair at {a!r}")
        elif (b, a) in lt:
            out.append(f"asymmetry fails for {a!r},{b!r}")
    succ: dict = {}
    for a, b in lt:
        succ.setdefault(a, set()).add(b)
    for a, bs in succ.items():
        for b in bs:
            for c in succ.get(b, ()):
                if (a, c) not in lt:
                    out.append(f"transitivity fails: {a!r}<{b!r}<{c!r}")
    return out


@dataclass(frozen=True, eq=False)
class RelStructure:
    signature: Mapping[str, int]
    domain: frozenset
    relations: Mapping[str, frozenset]

    def __init__(self, signature: Mapping[str, int], domain: Iterable,
                 relations: Mapping[str, Iterable] | None = None):
        sig = dict(signature)
        dom = frozenset(domain)
        rels = {}
        relations = relations or {}
        for name in relations:
            if name not in sig:
                raise ValueError(f"relation {name!r} not in signature")
        for name, ar in sig.items():
            tuples = set()
            for t in relations.get(name, ()):
                t = tuple(t) if isinstance(t, (tuple, list)) else (t,)
                if len(t) != ar:
                    raise ValueError(f"{name}: tuple {t!r} has arity {len(t)}, expected {ar}")
                for x in t:
                    if x not in dom:
                        raise ValueError(f"{name}: element {x!r} not in domain")
                tuples.add(t)
            rels[name] = frozenset(tuples)
        object.__setattr__(self, "signature", sig)
        object.__setattr__(self, "domain", dom)
        object.__setattr__(self, "relations", rels)

    def holds(self, name: str, *args) -> bool:
        return tuple(args) in self.relations[name]

    def unary(self, name: str) -> frozenset:
        return frozenset(t[0] for t in self.relations[name])

    def reduct(self, names: Iterable[str]) -> "RelStructure":
        names = list(names)
        return RelStructure({n: self.signature[n] for n in names}, self.domain,
                            {n: self.relations[n] for n in names})

    def induced(self, x: Iterable) -> "RelStructure":
        x = frozenset(x)
        if not x <= self.domain:
            raise UnknownVertex(next(iter(x - self.domain)))
        return RelStructure(self.signature, x, {
            n: [t for t in ts if all(e in x for e in t)] for n, ts in self.relations.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RelStructure):
            return NotImplemented
        return (self.signature == other.signature and self.domain == other.domain
                and self.relations == other.relations)

    def __hash__(self) -> int:
        return hash(self.domain)

    def __repr__(self) -> str:
        return f"RelStructure(sig={self.signature}, |domain|={len(self.domain)})"


# --------------------------------------------------------------------------
# operations


def induced_subgraph(g: Graph, x: Iterable) -> Graph:
    x = frozenset(x)
    bad = x - g.vertices
    if bad:
        raise UnknownVertex(next(iter(bad)))
    return Graph(x, (e for e in g.edges if e <= x),
                 {v: ls for v, ls in g.labels.items() if v in x})


def induced_bipartite(b: BipartiteGraph, x: Iterable) -> BipartiteGraph:
    sub = induced_subgraph(b.graph, x)
    return BipartiteGraph(sub, {v: b.side[v] for v in sub.vertices})


def semi_induced(g: Graph, a: Iterable, b: Iterable) -> BipartiteGraph:
    """G[A,B]: keep only edges between A and B, sides 1 and 2."""
    a, b = frozenset(a), frozenset(b)
    if a & b:
        raise ValueError("parts must be disjoint")
    es = [e for e in g.edges if len(e & a) == 1 and len(e & b) == 1]
    side = {v: 1 for v in a}
    side.update({v: 2 for v in b})
    return BipartiteGraph(Graph(a | b, es), side)


def complement(g: Graph) -> Graph:
    vs = vsorted(g.vertices)
    es = [(u, v) for u, v in itertools.combinations(vs, 2) if not g.has_edge(u, v)]
    return Graph(vs, es, g.labels)


def bipartite_complement(b: BipartiteGraph) -> BipartiteGraph:
    ones = vsorted(b.part(1))
    twos = vsorted(b.part(2))
    es = [(u, v) for u in ones for v in twos if not b.graph.has_edge(u, v)]
    return BipartiteGraph(Graph(b.vertices, es, b.graph.labels), b.side)


def transitive_closure(pairs: Iterable[tuple]) -> frozenset:
    succ: dict = {}
    for a, b in pairs:
        succ.setdefault(a, set()).add(b)
    out = set()
    for a in list(succ):
        seen = set()
        stack = list(succ[a])
        while stack:
            x = stack.pop()
            if x in seen:
                continue
            seen.add(x)
            stack.extend(succ.get(x, ()))
        out.update((a, x) for x in seen)
    return frozenset(out)


def cover_relation(p: Poset) -> frozenset:
    succ: dict = {}
    for a, b in p.lt:
        succ.setdefault(a, set()).add(b)
    covers = set()
    for a, b in p.lt:
        if not any((c, b) in p.lt for c in succ[a]):
            covers.add((a, b))
    return frozenset(covers)


def cover_graph(p: Poset) -> Graph:
    return Graph(p.elements, cover_relation(p))


def connected_components(g: Graph) -> list[frozenset]:
    seen: set = set()
    comps = []
    for s in vsorted(g.vertices):
        if s in seen:
            continue
        comp = {s}
        queue = deque([s])
        seen.add(s)
        while queue:
            x = queue.popleft()
            for y in g.neighbors(x):
                if y not in seen:
                    seen.add(y)
                    comp.add(y)
                    queue.append(y)
        comps.append(frozenset(comp))
    return comps


def is_connected(g: Graph) -> bool:
    return len(g.vertices) <= 1 or len(connected_components(g)) == 1


def distance(g: Graph, u: Vertex, v: Vertex) -> int | float:
    """BFS distance; INF (a float, never a finite int) across components."""
    if u not in g.vertices:
        raise UnknownVertex(u)
    if v not in g.vertices:
        raise UnknownVertex(v)
    dist = {u: 0}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        if x == v:
            return dist[x]
        for y in g.neighbors(x):
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    return INF


def shortest_path(g: Graph, u: Vertex, v: Vertex) -> list | None:
    """Shortest u-v path; among equal lengths BFS explores neighbours in vkey order."""
    parent = {u: None}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        if x == v:
            path = [x]
            while parent[path[-1]] is not None:
                path.append(parent[path[-1]])
            return path[::-1]
        for y in vsorted(g.neighbors(x)):
            if y not in parent:
                parent[y] = x
                queue.append(y)
    return None


def degeneracy(g: Graph) -> int:
    deg = {v: len(g.neighbors(v)) for v in g.vertices}
    alive = set(g.vertices)
    best = 0
    while alive:
        v = min(alive, key=lambda x: (deg[x], vkey(x)))
        best = max(best, deg[v])
        alive.remove(v)
        for w in g.neighbors(v):
            if w in alive:
                deg[w] -= 1
    return best


def find_induced_path(g: Graph, k: int) -> list | None:
    """An induced path on k vertices as a vertex list, or None."""
    if k < 1:
        raise ValueError("k must be >= 1")
    order = vsorted(g.vertices)
    if k == 1:
        return order[:1] or None

    def extend(path: list, inpath: set):
        if len(path) == k:
            return list(path)
        last = path[-1]
        for y in vsorted(g.neighbors(last)):
            if y in inpath:
                continue
            # y may touch only the last vertex of the path
            if any(y in g.neighbors(z) for z in path[:-1]):
                continue
            path.append(y)
            inpath.add(y)
            found = extend(path, inpath)
            if found:
                return found
            path.pop()
            inpath.discard(y)
        return None

    for s in order:
        found = extend([s], {s})
        if found:
            return found
    return None


def has_induced_path(g: Graph, k: int) -> bool:
    return find_induced_path(g, k) is not None


def find_ktt_subgraph(g: Graph, t: int) -> tuple[list, list] | None:
    """A K_{t,t} subgraph (not necessarily induced) as two vertex lists."""
    if t < 1:
        raise ValueError("t must be >= 1")
    order = vsorted(g.vertices)
    for a in itertools.combinations(order, t):
        common = set(g.vertices)
        for x in a:
            common &= g.neighbors(x)
            if len(common) < t:
                break
        common -= set(a)
        if len(common) >= t:
            return list(a), vsorted(common)[:t]
    return None


def has_ktt_subgraph(g: Graph, t: int) -> bool:
    return find_ktt_subgraph(g, t) is not None


# --------------------------------------------------------------------------
# text / JSON / DOT formats


def parse_edge_list(text: str) -> Graph:
    """Parse ``u v`` edge lines, ``u`` isolated-vertex lines and ``# label u L`` lines."""
    vs: list = []
    es: list = []
    labels: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split()
            if len(parts) == 3 and parts[0] == "label":
                vs.append(parts[1])
                labels.setdefault(parts[1], set()).add(parts[2])
            continue
        parts = line.split()
        if len(parts) == 1:
            vs.append(parts[0])
        elif len(parts) == 2:
            es.append((parts[0], parts[1]))
        else:
            raise ValueError(f"line {lineno}: expected 'u v', got {raw!r}")
    return Graph(vs, es, labels)


def format_edge_list(g: Graph) -> str:
    lines = []
    covered = set()
    for u, v in g.edge_list():
        lines.append(f"{u} {v}")
        covered.update((u, v))
    for v in vsorted(g.vertices - covered):
        lines.append(f"{v}")
    for v in vsorted(g.labels):
        for lab in sorted(g.labels[v]):
            lines.append(f"# label {v} {lab}")
    return "\n".join(lines) + "\n"


def parse_bipartite(text: str) -> BipartiteGraph:
    """Edge list whose vertices carry exactly one of the labels ``1`` / ``2``."""
    g = parse_edge_list(text)
    side = {}
    for v in g.vertices:
        labs = g.labels.get(v, frozenset()) & {"1", "2"}
        if len(labs) != 1:
            raise ValueError(f"vertex {v!r} needs exactly one side label 1 or 2")
        side[v] = int(next(iter(labs)))
    # side labels move into ``side``; other labels stay on the graph
    rest = {v: ls - {"1", "2"} for v, ls in g.labels.items()}
    return BipartiteGraph(Graph(g.vertices, g.edges, rest), side)


def to_dot(g: Graph, name: str = "G", colors: Mapping | None = None) -> str:
    lines = [f"graph {name} {{"]
    for v in vsorted(g.vertices):
        attr = f' [color="{colors[v]}"]' if colors and v in colors else ""
        lines.append(f'  "{v}"{attr};')
    for u, v in g.edge_list():
        lines.append(f'  "{u}" -- "{v}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _enc(x):
    if isinstance(x, tuple):
        return [_enc(y) for y in x]
    return x


def _dec(x):
    if isinstance(x, list):
        return tuple(_dec(y) for y in x)
    return x


def relstructure_to_json(s: RelStructure) -> dict:
    return {
        "signature": dict(sorted(s.signature.items())),
        "domain": [_enc(x) for x in vsorted(s.domain)],
        "relations": {n: sorted(([_enc(x) for x in t] for t in ts), key=lambda t: vkey(_dec(t)))
                      for n, ts in sorted(s.relations.items())},
    }


def relstructure_from_json(d: Mapping) -> RelStructure:
    dom = [_dec(x) for x in d["domain"]]
    rels = {n: [tuple(_dec(x) for x in t) for t in ts] for n, ts in d.get("relations", {}).items()}
    return RelStructure(d["signature"], dom, rels)


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)


def iter_subsets(items: list) -> Iterator[frozenset]:
    for r in range(len(items) + 1):
        for c in itertools.combinations(items, r):
            yield frozenset(c)
