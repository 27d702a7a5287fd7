"""Property suites shared by the CLI and the acceptance tests.

Each suite returns a RunReport; instance ``i`` of a run with base seed
``s`` is generated from seed ``s + i`` so any failure can be replayed.
"""

from __future__ import annotations

import itertools
import json
import random
import time
from dataclasses import dataclass, field
from typing import Callable

from . import folang, posetenc
from .anchor import (
    amalgam_anchors,
    bicotree_anchor,
    build_cover,
    check_cover,
    cotree_anchor,
    verify_anchor_all,
)
from .bicotree import (
    NoOPartition,
    NotSob,
    bipartite_of,
    clean_bicotree,
    is_clean_bicotree,
    o_partition,
    sob_decompose,
)
from .cotree import NotCograph, cograph_decompose, is_clean_cotree
from .gen import gen_bicotree, gen_clean_bicotree, gen_clean_cotree, gen_tmodel
from .splitdec import (
    Amalgam,
    BrokenInjection,
    amalgam_build,
    amalgam_restrict,
    chain_violations,
    coupling_view,
    injection_problems,
    sbuild,
    split_from_tmodel,
    verify_split,
)
from .structure import (
    BipartiteGraph,
    Graph,
    RelStructure,
    has_induced_path,
    has_ktt_subgraph,
    induced_subgraph,
    iter_subsets,
    transitive_closure,
    vsorted,
)
from .tmodel import TModel, build, model_iso_fixing_ground, model_structure, validate

SEED_MASK = (1 << 64) - 1


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""
    witness: object = None

    def to_json(self) -> dict:
        d = {"name": self.name, "ok": self.ok, "detail": self.detail}
        if self.witness is not None:
            d["witness"] = _jsonable(self.witness)
        return d


@dataclass
class RunReport:
    command: str
    seed: int
    checks: list = field(default_factory=list)
    seconds: float = 0.0
    stats: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def add(self, name: str, ok: bool, detail: str = "", witness=None) -> Check:
        c = Check(name, bool(ok), detail, witness)
        self.checks.append(c)
        return c

    def merge(self, other: "RunReport") -> None:
        self.checks.extend(other.checks)
        self.seconds += other.seconds
        for k, v in other.stats.items():
            self.stats[k] = v

    def to_json(self) -> dict:
        return {"command": self.command, "seed": self.seed, "ok": self.ok,
                "seconds": round(self.seconds, 3), "stats": _jsonable(self.stats),
                "checks": [c.to_json() for c in self.checks]}

    def to_text(self) -> str:
        lines = [f"# {self.command}  seed={self.seed}  {self.seconds:.2f}s"]
        for c in self.checks:
            line = f"{'PASS' if c.ok else 'FAIL'}  {c.name}"
            if c.detail:
                line += f"  ({c.detail})"
            if not c.ok and c.witness is not None:
                line += f"  witness={_jsonable(c.witness)}"
            lines.append(line)
        for k, v in self.stats.items():
            lines.append(f"stat  {k} = {_jsonable(v)}")
        lines.append("OK" if self.ok else "FAILED")
        return "\n".join(lines)


def _jsonable(x):
    try:
        json.dumps(x)
        return x
    except TypeError:
        if isinstance(x, dict):
            return {str(k): _jsonable(v) for k, v in x.items()}
        if isinstance(x, (list, tuple, set, frozenset)):
            items = vsorted(x) if isinstance(x, (set, frozenset)) else x
            return [_jsonable(v) for v in items]
        return repr(x)


def _shape_stats(shapes: list) -> dict:
    if not shapes:
        return {}
    return {"instances": len(shapes), "max leaves": max(a for a, _ in shapes),
            "mean leaves": round(sum(a for a, _ in shapes) / len(shapes), 2),
            "max height": max(b for _, b in shapes)}


class _Timer:
    def __init__(self, report: RunReport):
        self.report = report

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self.report

    def __exit__(self, *exc):
        self.report.seconds += time.perf_counter() - self.t0
        return False


def _first_failure(seed: int, count: int, fn: Callable[[int], object]):
    """Run ``fn`` on seeds seed..seed+count-1; return (failures, first)."""
    fails, first = 0, None
    for i in range(count):
        s = (seed + i) & SEED_MASK
        w = fn(s)
        if w is not None:
            fails += 1
            if first is None:
                first = {"seed": s, "detail": w}
    return fails, first


# --------------------------------------------------------------------------
# round trips


def cograph_suite(seed: int = 0, count: int = 500, max_leaves: int = 10, height: int = 5) -> RunReport:
    rep = RunReport("suite cograph", seed)
    with _Timer(rep):
        shapes = []

        def one(s):
            t = gen_clean_cotree(s, max_leaves, height)
            shapes.append((len(t.ground), t.height()))
            if not is_clean_cotree(t):
                return "generator produced an unclean cotree"
            g = build(t)
            d = cograph_decompose(g)
            if build(d) != g:
                return "decomposition builds a different graph"
            if not is_clean_cotree(d):
                return "decomposition is not clean"
            if not model_iso_fixing_ground(d, t):
                return "decomposition is not isomorphic to the source cotree"
            return None
        fails, first = _first_failure(seed, count, one)
        rep.add("cograph round trip", fails == 0, f"{count - fails}/{count}", first)
        rep.stats["cotree shapes"] = _shape_stats(shapes)
    return rep


def sob_suite(seed: int = 0, count: int = 500, max_leaves: int = 12, height: int = 4) -> RunReport:
    rep = RunReport("suite sob", seed)
    with _Timer(rep):
        shapes = []

        def clean_one(s):
            t = gen_clean_bicotree(s, max_leaves, height)
            shapes.append((len(t.ground), t.height()))
            b = bipartite_of(t)
            d = sob_decompose(b)
            if build(d) != b.graph:
                return "sob_decompose builds a different graph"
            if not is_clean_bicotree(d):
                return "sob_decompose output is not clean"
            if has_induced_path(b.graph, 7):
                return "accepted graph has an induced P7"
            return None
        fails, first = _first_failure(seed, count, clean_one)
        rep.add("sob round trip (clean, P7-free)", fails == 0, f"{count - fails}/{count}", first)
        rep.stats["bicotree shapes"] = _shape_stats(shapes)

        worst = [0.0]

        def raw_one(s):
            t = gen_bicotree(s, max_leaves, height)
            h = t.height()
            c = clean_bicotree(t)
            if build(c) != build(t):
                return "clean_bicotree changed the graph"
            if not is_clean_bicotree(c):
                return "clean_bicotree output is not clean"
            worst[0] = max(worst[0], c.height() / h)
            if c.height() > 3 * h:
                return f"height {c.height()} > 3*{h}"
            return None
        fails, first = _first_failure(seed, count, raw_one)
        rep.add("clean_bicotree height <= 3h", fails == 0, f"{count - fails}/{count}", first)
        rep.stats["max cleaned height ratio"] = round(worst[0], 3)
    return rep


def amalgam_suite(seed: int = 0, count: int = 200, max_leaves: int = 12, height: int = 3,
                  max_n: int = 3, exhaustive_upto: int = 8) -> RunReport:
    rep = RunReport("suite amalgam", seed)
    with _Timer(rep):
        results = {"split": [0, None], "identity": [0, None], "restrict": [0, None], "chains": [0, None]}
        restricted = 0

        def note(key, s, msg):
            results[key][0] += 1
            if results[key][1] is None:
                results[key][1] = {"seed": s, "detail": msg}

        for i in range(count):
            s = (seed + i) & SEED_MASK
            n = random.Random(s).randint(1, max_n)
            m = gen_tmodel(s, n, max_leaves, height)
            sp = split_from_tmodel(m)
            r = verify_split(sp.graph, sp.gamma, sp.N, sp.h, sp.witnesses)
            if not r.ok:
                note("split", s, [str(f) for f in r.failures])
            g = sp.graph
            a = amalgam_build(g, sp)
            if sbuild(a) != g:
                note("identity", s, "sbuild differs from the source graph")
            if len(g.vertices) <= exhaustive_upto:
                restricted += 1
                for w in iter_subsets(vsorted(g.vertices)):
                    if sbuild(amalgam_restrict(a, w)) != induced_subgraph(g, w):
                        note("restrict", s, vsorted(w))
                        break
            cv = chain_violations(coupling_view(a))
            if cv:
                note("chains", s, cv[:3])
        names = {"split": "split_from_tmodel passes verify_split",
                 "identity": "sbuild . amalgam_build = identity",
                 "restrict": "restriction commutes with induced subgraphs",
                 "chains": "coupling order is a union of chains"}
        for k, (f, first) in results.items():
            rep.add(names[k], f == 0, f"{count - f}/{count}", first)
        rep.stats["instances restricted exhaustively"] = restricted
    return rep


# --------------------------------------------------------------------------
# poset encoding


def random_coupling(rng: random.Random, n: int, chains: bool = False, k22free: bool = False) -> RelStructure:
    dom = list(range(n))
    if chains:
        lt = set()
        pos = dom[:]
        rng.shuffle(pos)
        i = 0
        while i < n:
            ln = rng.randint(1, n - i)
            ch = pos[i:i + ln]
            i += ln
            lt |= {(ch[a], ch[b]) for a in range(ln) for b in range(a + 1, ln)}
    else:
        perm = dom[:]
        rng.shuffle(perm)
        lt = set(transitive_closure({(perm[a], perm[b]) for a in range(n) for b in range(a + 1, n)
                                     if rng.random() < 0.4}))
    e: set = set()
    for u, v in itertools.combinations(dom, 2):
        if rng.random() < 0.4:
            e |= {(u, v), (v, u)}
            if k22free and has_ktt_subgraph(Graph(dom, [p for p in e if p[0] < p[1]]), 2):
                e -= {(u, v), (v, u)}
    gr = [(u,) for u in dom if rng.random() < 0.8]
    return RelStructure(posetenc.COUPLING_SIG, dom, {"Lt": lt, "E": e, "Gr": gr})


def poset_suite(seed: int = 0, count: int = 500, max_elements: int = 6, sparse_count: int = 300) -> RunReport:
    rep = RunReport("suite posetenc", seed)
    with _Timer(rep):
        def one(s):
            rng = random.Random(s)
            m = random_coupling(rng, rng.randint(0, max_elements))
            p = posetenc.encode_poset(m)
            probs = posetenc.validate_cps(p)
            if probs:
                return probs[:3]
            if posetenc.decode_poset(p) != m.induced(m.unary("Gr")):
                return "decode . encode differs from the input"
            return None
        fails, first = _first_failure(seed, count, one)
        rep.add("decode . encode = identity", fails == 0, f"{count - fails}/{count}", first)

        def sparse(s):
            rng = random.Random(s)
            m = random_coupling(rng, rng.randint(1, max_elements), chains=True, k22free=True)
            if not posetenc.weak_sparseness_probe(posetenc.encode_poset(m), 3):
                return "cover graph contains K_{3,3}"
            return None
        fails, first = _first_failure(seed + count, sparse_count, sparse)
        rep.add("no K33 in cover graphs (chain order, K22-free E)", fails == 0,
                f"{sparse_count - fails}/{sparse_count}", first)
    return rep


# --------------------------------------------------------------------------
# anchors and covers


def anchor_suite(seed: int = 0, count: int = 100, max_leaves: int = 10, cot_height: int = 5,
                 bic_height: int = 3, cover_count: int = 40, cover_ground: int = 10) -> RunReport:
    rep = RunReport("suite anchors", seed)
    with _Timer(rep):
        sizes = {"cotree": 0, "bicotree": 0, "amalgam": 0}
        checked = [0]

        def cot(s):
            t = gen_clean_cotree(s, max_leaves, cot_height)
            F = cotree_anchor(t)
            sizes["cotree"] = max(sizes["cotree"], F.size)
            if F.size > t.height():
                return f"anchor size {F.size} > h = {t.height()}"
            ok, n, bad = verify_anchor_all(t, F)
            checked[0] += n
            return None if ok else bad[:3]

        def bic(s):
            t = gen_clean_bicotree(s, max_leaves, bic_height)
            F = bicotree_anchor(t)
            sizes["bicotree"] = max(sizes["bicotree"], F.size)
            if F.size >= 5 ** (t.height() + 1):
                return f"anchor size {F.size} >= 5^(h+1)"
            ok, n, bad = verify_anchor_all(t, F)
            checked[0] += n
            return None if ok else bad[:3]

        fails, first = _first_failure(seed, count, cot)
        rep.add("cotree anchors: size <= h, anchoring exhaustive", fails == 0, f"{count - fails}/{count}", first)
        fails, first = _first_failure(seed, count, bic)
        rep.add("bicotree anchors: size < 5^(h+1), anchoring exhaustive", fails == 0,
                f"{count - fails}/{count}", first)

        covered = [0]

        def amal(s):
            rng = random.Random(s)
            n = rng.randint(1, 3)
            m = gen_tmodel(s, n, cover_ground, bic_height)
            sp = split_from_tmodel(m)
            a = amalgam_build(sp.graph, sp)
            aa = amalgam_anchors(a)
            F = aa.anchor
            sizes["amalgam"] = max(sizes["amalgam"], F.size)
            if F.problems():
                return F.problems()[:3]
            zeta = {v: rng.randint(1, 4) for v in a.ground}
            cov = build_cover(a, zeta, 2)
            ok, k, bad = check_cover(a, cov, vsorted(coupling_view(a).domain), 2)
            covered[0] += k
            return None if ok else [list(b) for b in bad[:3]]

        fails, first = _first_failure(seed, cover_count, amal)
        rep.add("amalgam anchor bound and cover guarantee (|X| <= 2)", fails == 0,
                f"{cover_count - fails}/{cover_count}", first)
        rep.stats["max anchor size"] = sizes
        rep.stats["restrictions compared"] = checked[0]
        rep.stats["cover sets checked"] = covered[0]
    return rep


# --------------------------------------------------------------------------
# formula oracles


def _rand_formula(rng: random.Random, depth: int, vs: list, sig: dict):
    if depth == 0 or rng.random() < 0.25:
        if rng.random() < 0.2:
            return folang.Eq(rng.choice(vs), rng.choice(vs))
        name = rng.choice(sorted(sig))
        return folang.Atom(name, tuple(rng.choice(vs) for _ in range(sig[name])))
    k = rng.randrange(6)
    sub = lambda: _rand_formula(rng, depth - 1, vs, sig)  # noqa: E731
    if k == 0:
        return folang.Not(sub())
    if k == 1:
        return folang.And((sub(), sub()))
    if k == 2:
        return folang.Or((sub(), sub()))
    if k == 3:
        return folang.Implies(sub(), sub())
    v = rng.choice(["x", "y", "z", "w"])
    body = _rand_formula(rng, depth - 1, vs if v in vs else vs + [v], sig)
    return (folang.Exists if k == 4 else folang.Forall)(v, body)


def random_structure(rng: random.Random, sig: dict, n: int) -> RelStructure:
    dom = list(range(n))
    rels = {r: [t for t in itertools.product(dom, repeat=ar) if rng.random() < 0.4] for r, ar in sig.items()}
    return RelStructure(sig, dom, rels)


def lambda_matches_build(m: TModel) -> list:
    """Leaf pairs where the edge formula and build() disagree."""
    f = folang.builtin_formulas(m.n)["edge"].formula
    st = model_structure(m)
    g = build(m)
    leaves = vsorted(m.ground)
    return [(x, y) for i, x in enumerate(leaves) for y in leaves[i + 1:]
            if folang.eval_formula(st, f, {"x": x, "y": y}) != g.has_edge(x, y)]


def rho_pipeline(m: RelStructure) -> RelStructure:
    """Copy(4), mark the copies P1..P4, interpret Gr and < by the rho formulas."""
    fs = folang.builtin_formulas()
    c = folang.copy_structure(m, 4)
    c = folang.color_structure(c, {f"P{k}": [x for x in c.domain if x[1] == k] for k in range(1, 5)})
    it = folang.Interpretation(folang.Const(True), {"Gr": (("u",), fs["rho_Gr"].formula),
                                                    "Lt": (("u", "v"), fs["rho_Lt"].formula)})
    return folang.interpret(c, it)


def inverse_rho(p: posetenc.ColoredPosetStructure, which: str = "inv_rho_E") -> frozenset:
    """Source pairs (u, v) of Gr elements satisfying an inverse formula."""
    fs = folang.builtin_formulas()
    gr = p.marks["Gr"]
    got = folang.satisfying(p.as_structure(), fs[which].formula, ("u", "v"))
    return frozenset((p.clone_of[a], p.clone_of[b]) for a, b in got if a in gr and b in gr)


def oracle_suite(seed: int = 0, models: int = 200, couplings: int = 100, formulas: int = 1000) -> RunReport:
    rep = RunReport("suite oracles", seed)
    with _Timer(rep):
        def lam(s):
            rng = random.Random(s)
            m = gen_tmodel(s, rng.randint(1, 3), 8, 3)
            bad = lambda_matches_build(m)
            return bad[:3] or None
        fails, first = _first_failure(seed, models, lam)
        rep.add("lambda formula = build", fails == 0, f"{models - fails}/{models}", first)

        def rho(s):
            rng = random.Random(s)
            m = random_coupling(rng, rng.randint(0, 4))
            out = rho_pipeline(m)
            if set(out.relations["Lt"]) != set(posetenc.generators(m)):
                return "rho_Lt differs from the generating pairs"
            if {x for (x,) in out.relations["Gr"]} != {(u, 1) for u in m.unary("Gr")}:
                return "rho_Gr differs from the encoding"
            p = posetenc.encode_poset(m)
            d = posetenc.decode_poset(p)
            if inverse_rho(p, "inv_rho_Lt") != set(d.relations["Lt"]):
                return "inverse Lt formula differs from decode_poset"
            if inverse_rho(p, "inv_rho_E") != set(d.relations["E"]):
                return "inverse E formula differs from decode_poset"
            return None
        fails, first = _first_failure(seed, couplings, rho)
        rep.add("rho formulas = encode/decode", fails == 0, f"{couplings - fails}/{couplings}", first)

        sig = {"E": 2, "P": 1, "T": 3}

        def ev(s):
            rng = random.Random(s)
            st = random_structure(rng, sig, rng.randint(1, 4))
            f = _rand_formula(rng, 4, ["x", "y"], sig)
            env = {"x": rng.choice(list(st.domain)), "y": rng.choice(list(st.domain))}
            if folang.eval_formula(st, f, env) != folang.reference_eval(st, f, env):
                return folang.to_text(f)
            return None
        fails, first = _first_failure(seed, formulas, ev)
        rep.add("eval = reference evaluator", fails == 0, f"{formulas - fails}/{formulas}", first)
    return rep


# --------------------------------------------------------------------------
# negative controls and mutations


def path_graph(k: int) -> Graph:
    return Graph(range(k), [(i, i + 1) for i in range(k - 1)])


def cycle_bipartite(k: int) -> BipartiteGraph:
    g = Graph(range(k), [(i, (i + 1) % k) for i in range(k)])
    return BipartiteGraph(g, {i: 1 + i % 2 for i in range(k)})


def path_bipartite(k: int) -> BipartiteGraph:
    return BipartiteGraph(path_graph(k), {i: 1 + i % 2 for i in range(k)})


def _raises(fn, exc):
    try:
        fn()
    except exc as e:
        return e
    return None


def _flip_kappa(m: TModel, rng: random.Random) -> TModel | None:
    """Flip one kappa entry so that build() changes; None if impossible."""
    g = build(m)
    cells = [(u, i, j) for u, tab in m.kappa.items() for i in range(m.n) for j in range(m.n)]
    rng.shuffle(cells)
    for u, i, j in cells:
        tab = [list(r) for r in m.kappa[u]]
        tab[i][j] = not tab[i][j]
        kappa = dict(m.kappa)
        kappa[u] = tuple(tuple(r) for r in tab)
        m2 = TModel(m.tree, m.n, m.gamma, kappa)
        if not validate(m2) and build(m2) != g:
            return m2
    return None


def mutation_checks(seed: int = 0, per_kind: tuple = (7, 7, 6)) -> list[tuple[str, bool, str]]:
    """Mutate valid objects and confirm the advertised validator rejects
    each one: verify_split for corrupted kappa in a split witness,
    injection_problems/sbuild for broken injections, check_cover for a
    dropped cover member."""
    out = []
    rng = random.Random(seed)
    s = seed
    # corrupted kappa in a pair witness
    made = 0
    while made < per_kind[0]:
        s += 1
        m = gen_tmodel(s, 2, 8, 3)
        sp = split_from_tmodel(m)
        if (1, 2) not in sp.witnesses:
            continue
        bad = _flip_kappa(sp.witnesses[(1, 2)], rng)
        if bad is None:
            continue
        w = dict(sp.witnesses)
        w[(1, 2)] = bad
        rep = verify_split(sp.graph, sp.gamma, sp.N, sp.h, w)
        out.append((f"kappa seed={s}", not rep.ok, "verify_split"))
        made += 1
    # broken injection: swap two ground vertices of one cell map
    made = 0
    while made < per_kind[1]:
        s += 1
        m = gen_tmodel(s, 2, 8, 3)
        sp = split_from_tmodel(m)
        a = amalgam_build(sp.graph, sp)
        key = rng.choice(sorted(a.iota_pair)) if a.iota_pair else None
        if key is None:
            continue
        inj = dict(a.iota_pair[key])
        vs = vsorted(inj)
        x = rng.choice(vs)
        inj[x] = "missing-leaf"
        iota_pair = dict(a.iota_pair)
        iota_pair[key] = inj
        broken = Amalgam(a.ground, a.gamma, a.N, a.cell_trees, a.pair_trees, a.iota_cell, iota_pair,
                         a.attachments)
        caught = bool(injection_problems(broken)) and _raises(lambda: sbuild(broken), BrokenInjection) is not None
        out.append((f"injection seed={s}", caught, "injection_problems"))
        made += 1
    # dropped cover member
    made = 0
    while made < per_kind[2]:
        s += 1
        r2 = random.Random(s)
        m = gen_tmodel(s, 2, 8, 3)
        sp = split_from_tmodel(m)
        a = amalgam_build(sp.graph, sp)
        zeta = {v: r2.randint(1, 3) for v in a.ground}
        cov = build_cover(a, zeta, 2)
        els = vsorted(coupling_view(a).domain)
        ok, _, _ = check_cover(a, cov, els, 1)
        if not ok:
            continue
        aa = amalgam_anchors(a)
        needed = {frozenset(zeta[v] for v in aa.anchor.F[u]) for u in a.ground}
        candidates = sorted(needed & set(cov.members), key=sorted)
        if not candidates:
            continue
        victim = rng.choice(candidates)
        del cov.members[victim]
        ok, _, _ = check_cover(a, cov, els, 1)
        out.append((f"cover seed={s}", not ok, "check_cover"))
        made += 1
    return out


def negative_suite(seed: int = 0) -> RunReport:
    rep = RunReport("suite negatives", seed)
    with _Timer(rep):
        e = _raises(lambda: cograph_decompose(path_graph(4)), NotCograph)
        rep.add("P4 -> NotCograph", e is not None and len(e.witness) == 4, "", getattr(e, "witness", None))
        e = _raises(lambda: sob_decompose(path_bipartite(7)), NotSob)
        rep.add("P7 -> NotSob", e is not None and bool(e.witness), "", getattr(e, "witness", None))
        e = _raises(lambda: o_partition(cycle_bipartite(6)), NoOPartition)
        rep.add("C6 -> NoOPartition", e is not None and bool(e.blocks), "", getattr(e, "blocks", None))
        muts = mutation_checks(seed)
        missed = [name for name, ok, _ in muts if not ok]
        rep.add("mutations caught", not missed and len(muts) == 20, f"{len(muts) - len(missed)}/{len(muts)}",
                missed or None)
    return rep


# --------------------------------------------------------------------------
# single-input round trips (the CLI's ``roundtrip`` command)


def _reject_check(rep: RunReport, name: str, exc: Exception, expect_reject: bool, witness) -> RunReport:
    if expect_reject:
        rep.add(f"{name} rejected as expected", True, type(exc).__name__, witness)
    else:
        rep.add(name, False, f"{type(exc).__name__}: {exc}", witness)
    return rep


def _unexpected_accept(rep: RunReport, name: str, expect_reject: bool) -> bool:
    if expect_reject:
        rep.add(f"{name} rejected as expected", False, "input was accepted")
        return True
    return False


def roundtrip_cograph(g: Graph, seed: int = 0, expect_reject: bool = False) -> RunReport:
    rep = RunReport("roundtrip cograph", seed)
    with _Timer(rep):
        try:
            t = cograph_decompose(g)
        except NotCograph as e:
            return _reject_check(rep, "cograph_decompose", e, expect_reject, e.witness)
        if _unexpected_accept(rep, "cograph_decompose", expect_reject):
            return rep
        rep.add("build(cograph_decompose(G)) = G", build(t) == Graph(g.vertices, g.edges))
        rep.add("decomposition is clean", is_clean_cotree(t))
        rep.stats["height"] = t.height()
        rep.stats["vertices"] = len(g.vertices)
    return rep


def roundtrip_sob(b: BipartiteGraph, seed: int = 0, expect_reject: bool = False) -> RunReport:
    rep = RunReport("roundtrip sob", seed)
    with _Timer(rep):
        try:
            t = sob_decompose(b)
        except NotSob as e:
            return _reject_check(rep, "sob_decompose", e, expect_reject, e.witness)
        if _unexpected_accept(rep, "sob_decompose", expect_reject):
            return rep
        rep.add("build(sob_decompose(B)) = B", bipartite_of(t) == b)
        rep.add("decomposition is clean", is_clean_bicotree(t))
        rep.stats["height"] = t.height()
        rep.stats["vertices"] = len(b.vertices)
    return rep


def roundtrip_amalgam(split, seed: int = 0, expect_reject: bool = False) -> RunReport:
    from .splitdec import SplitError
    rep = RunReport("roundtrip amalgam", seed)
    with _Timer(rep):
        g = split.graph
        try:
            a = amalgam_build(g, split)
        except SplitError as e:
            return _reject_check(rep, "amalgam_build", e, expect_reject,
                                 [str(f) for f in e.report.failures])
        if _unexpected_accept(rep, "amalgam_build", expect_reject):
            return rep
        rep.add("sbuild(amalgam_build(G)) = G", sbuild(a) == Graph(g.vertices, g.edges))
        rep.add("injections consistent", not injection_problems(a))
        rep.add("coupling order is a union of chains", not chain_violations(coupling_view(a)))
        rep.stats["vertices"] = len(g.vertices)
    return rep


def roundtrip_poset(m: RelStructure, seed: int = 0, expect_reject: bool = False) -> RunReport:
    rep = RunReport("roundtrip poset", seed)
    with _Timer(rep):
        try:
            p = posetenc.encode_poset(m)
        except posetenc.NotACoupling as e:
            return _reject_check(rep, "encode_poset", e, expect_reject, None)
        if _unexpected_accept(rep, "encode_poset", expect_reject):
            return rep
        rep.add("encoding is a valid colored poset", not posetenc.validate_cps(p))
        rep.add("decode(encode(M)) = M on Gr", posetenc.decode_poset(p) == m.induced(m.unary("Gr")))
        rep.stats["elements"] = len(p.poset.elements)
    return rep


def anchor_report(m: TModel, F=None, seed: int = 0, label: str = "") -> RunReport:
    """Check an anchor (computed if not given) of a clean cotree or bicotree."""
    rep = RunReport(f"anchor verify {label}".strip(), seed)
    with _Timer(rep):
        if F is None:
            F = cotree_anchor(m) if m.n == 1 else bicotree_anchor(m)
        probs = F.problems()
        rep.add("anchor well formed (u in F(u), size bound)", not probs, "", probs[:3] or None)
        ok, n, bad = verify_anchor_all(m, F)
        rep.add("anchoring holds for every L' and X", ok, f"{n} restrictions compared", bad[:3] or None)
        rep.stats["anchor size"] = F.size
        rep.stats["size bound"] = F.size_bound
    return rep


def cover_report(a: Amalgam, zeta, p: int, seed: int = 0, label: str = "") -> RunReport:
    rep = RunReport(f"anchor cover {label}".strip(), seed)
    with _Timer(rep):
        cov = build_cover(a, zeta, p)
        els = vsorted(coupling_view(a).domain)
        ok, n, bad = check_cover(a, cov, els, p)
        rep.add(f"cover guarantee for |X| <= {p}", ok, f"{n} sets X", [list(b) for b in bad[:3]] or None)
        rep.stats["members"] = len(cov.members)
        rep.stats["q (anchor size)"] = cov.q
    return rep


SUITES: dict[str, Callable[..., RunReport]] = {
    "cograph": cograph_suite,
    "sob": sob_suite,
    "amalgam": amalgam_suite,
    "posetenc": poset_suite,
    "anchors": anchor_suite,
    "oracles": oracle_suite,
    "negatives": negative_suite,
}
GROUPS = {"roundtrips": ("cograph", "sob", "amalgam")}


def run_suite(name: str, seed: int = 0) -> RunReport:
    if name in GROUPS:
        rep = RunReport(f"suite {name}", seed)
        for part in GROUPS[name]:
            rep.merge(SUITES[part](seed))
        return rep
    if name == "all":
        rep = RunReport("suite all", seed)
        for part in SUITES:
            rep.merge(SUITES[part](seed))
        return rep
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name](seed)


def suite_names() -> list[str]:
    return sorted(set(SUITES) | set(GROUPS) | {"all"})
