"""Encoding a coupling (order + graph) as a single colored poset, and back.

Each source element u gets four clones (u, 1)..(u, 4).  The order is the
transitive closure of:

* (u, 4) < (v, 4) whenever u < v,
* (u, 2), (u, 3), (u, 4) < (u, 1),
* (u, 2) < (v, 3) and (u, 2) < (v, 1) whenever E(u, v).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .structure import (
    Poset,
    RelStructure,
    _dec,
    _enc,
    cover_graph,
    cover_relation,
    has_ktt_subgraph,
    poset_violations,
    to_dot,
    transitive_closure,
    vsorted,
)

MARKS = ("Gr", "P1", "P2", "P3", "P4")
COUPLING_SIG = {"Lt": 2, "E": 2, "Gr": 1}


class NotACoupling(ValueError):
    pass


@dataclass(frozen=True)
class ColoredPosetStructure:
    poset: Poset
    marks: Mapping[str, frozenset]
    clone_of: Mapping

    def mark(self, name: str) -> frozenset:
        return self.marks[name]

    def clones(self, u) -> list:
        return [x for x in vsorted(self.poset.elements) if self.clone_of[x] == u]

    def as_structure(self) -> RelStructure:
        """Relational view: Lt, the marks, and F linking distinct clones of
        one source element."""
        sig = {"Lt": 2, "F": 2, **{m: 1 for m in MARKS}}
        by_src: dict = {}
        for x, u in self.clone_of.items():
            by_src.setdefault(u, []).append(x)
        f = [(x, y) for xs in by_src.values() for x in xs for y in xs if x != y]
        rels = {"Lt": self.poset.lt, "F": f}
        rels.update({m: [(x,) for x in self.marks[m]] for m in MARKS})
        return RelStructure(sig, self.poset.elements, rels)


def validate_cps(p: ColoredPosetStructure) -> list[str]:
    out = poset_violations(p.poset.elements, p.poset.lt)
    parts = [p.marks[f"P{k}"] for k in range(1, 5)]
    seen: set = set()
    for k, s in enumerate(parts, 1):
        if seen & s:
            out.append(f"P{k} overlaps an earlier mark")
        seen |= s
    if seen != p.poset.elements:
        out.append("P1..P4 do not cover the domain")
    if not p.marks["Gr"] <= p.marks["P1"]:
        out.append("Gr is not contained in P1")
    return out


def _check_coupling(m: RelStructure) -> None:
    for name, ar in COUPLING_SIG.items():
        if m.signature.get(name) != ar:
            raise NotACoupling(f"structure needs relation {name}/{ar}")
    lt = m.relations["Lt"]
    problems = poset_violations(m.domain, lt)
    if problems:
        raise NotACoupling("Lt is not a strict partial order: " + problems[0])
    e = m.relations["E"]
    for x, y in e:
        if x == y or (y, x) not in e:
            raise NotACoupling(f"E is not symmetric and irreflexive at ({x!r},{y!r})")


def generators(m: RelStructure) -> frozenset:
    """The generating pairs, before closing transitively."""
    gen = set()
    for u, v in m.relations["Lt"]:
        gen.add(((u, 4), (v, 4)))
    for u in m.domain:
        for k in (2, 3, 4):
            gen.add(((u, k), (u, 1)))
    for u, v in m.relations["E"]:
        gen.add(((u, 2), (v, 3)))
        gen.add(((u, 2), (v, 1)))
    return frozenset(gen)


def encode_poset(m: RelStructure) -> ColoredPosetStructure:
    _check_coupling(m)
    els = [(u, k) for u in m.domain for k in (1, 2, 3, 4)]
    lt = transitive_closure(generators(m))
    marks = {f"P{k}": frozenset((u, k) for u in m.domain) for k in (1, 2, 3, 4)}
    marks["Gr"] = frozenset((u, 1) for u in m.unary("Gr"))
    return ColoredPosetStructure(Poset(els, lt), marks, {x: x[0] for x in els})


def decode_poset(p: ColoredPosetStructure) -> RelStructure:
    """Ground = sources of Gr; u < v via their P4 clones, E(u, v) via a P2
    clone of u below a P3 clone of v."""
    lt = p.poset.lt
    ground = [p.clone_of[x] for x in p.marks["Gr"]]
    clone: dict = {}
    for k in (2, 3, 4):
        for x in p.marks[f"P{k}"]:
            clone.setdefault((p.clone_of[x], k), []).append(x)

    def related(u, v, ku, kv):
        return any((a, b) in lt for a in clone.get((u, ku), ()) for b in clone.get((v, kv), ()))

    rl, re = [], []
    for u in ground:
        for v in ground:
            if u == v:
                continue
            if related(u, v, 4, 4):
                rl.append((u, v))
            if related(u, v, 2, 3):
                re.append((u, v))
    return RelStructure(COUPLING_SIG, ground, {"Lt": rl, "E": re, "Gr": [(u,) for u in ground]})


def weak_sparseness_probe(p: ColoredPosetStructure, t: int) -> bool:
    """True iff the cover graph has no K_{t,t} subgraph."""
    if t < 1:
        raise ValueError("t must be >= 1")
    return not has_ktt_subgraph(cover_graph(p.poset), t)


def cover_provenance_ok(p: ColoredPosetStructure) -> bool:
    return all(len({p.clone_of[a], p.clone_of[b]}) <= 2 for a, b in cover_relation(p.poset))


# --------------------------------------------------------------------------
# I/O

_PALETTE = {"P1": "black", "P2": "red", "P3": "blue", "P4": "darkgreen"}


def cps_to_dot(p: ColoredPosetStructure) -> str:
    colors = {}
    for k, c in _PALETTE.items():
        for x in p.marks[k]:
            colors[x] = c
    return to_dot(cover_graph(p.poset), "cover", colors)


def cps_to_json(p: ColoredPosetStructure) -> dict:
    return {
        "elements": [_enc(x) for x in vsorted(p.poset.elements)],
        "lt": [[_enc(a), _enc(b)] for a, b in vsorted(p.poset.lt)],
        "marks": {m: [_enc(x) for x in vsorted(p.marks[m])] for m in MARKS},
        "clone_of": [[_enc(x), _enc(p.clone_of[x])] for x in vsorted(p.clone_of)],
    }


def cps_from_json(d: Mapping) -> ColoredPosetStructure:
    els = [_dec(x) for x in d["elements"]]
    lt = [(_dec(a), _dec(b)) for a, b in d["lt"]]
    marks = {m: frozenset(_dec(x) for x in d["marks"].get(m, [])) for m in MARKS}
    clone = {_dec(x): _dec(u) for x, u in d["clone_of"]}
    return ColoredPosetStructure(Poset(els, lt), marks, clone)


__all__ = [
    "ColoredPosetStructure", "NotACoupling", "cover_provenance_ok", "cps_from_json", "cps_to_dot",
    "cps_to_json", "decode_poset", "encode_poset", "generators", "validate_cps",
    "weak_sparseness_probe",
]
