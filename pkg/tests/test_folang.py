import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import half_graph, random_graph, to_nx
from lcwmodel import folang
from lcwmodel.folang import (
    SOB_SIG,
    And,
    Atom,
    Color,
    Copy,
    Exists,
    FormulaSyntaxError,
    Not,
    SignatureError,
    UnboundVariable,
    builtin_formulas,
    copy_structure,
    eval_formula,
    free_vars,
    interpretation,
    parse_formula,
    reference_eval,
    run_steps,
    satisfying,
    to_text,
)
from lcwmodel.gen import gen_clean_bicotree, gen_tmodel
from lcwmodel.bicotree import bipartite_of
from lcwmodel.posetenc import encode_poset, generators
from lcwmodel.structure import RelStructure
from lcwmodel.suites import _rand_formula, inverse_rho, lambda_matches_build, random_coupling, random_structure, rho_pipeline
from lcwmodel.posetenc import decode_poset
from lcwmodel.tmodel import from_nested, node_type

FORMULAS = builtin_formulas()


def graph_structure(g):
    e = [(x, y) for a, b in (tuple(e) for e in g.edges) for x, y in ((a, b), (b, a))]
    return RelStructure({"E": 2}, g.vertices, {"E": e})


def o_structure(b, part_of):
    """A sob with K1..K3 marking part index mod 3."""
    e = [(x, y) for a, c in (tuple(e) for e in b.graph.edges) for x, y in ((a, c), (c, a))]
    rel = {"E": e, "Col1": [(v,) for v in b.part(1)], "Col2": [(v,) for v in b.part(2)]}
    for k in (1, 2, 3):
        rel[f"K{k}"] = [(v,) for v in b.vertices if part_of[v] % 3 == k - 1]
    return RelStructure(SOB_SIG, b.vertices, rel)


def test_parse_shapes():
    f = parse_formula("E(x,y) & !E(y,z)")
    assert f == And((Atom("E", ("x", "y")), Not(Atom("E", ("y", "z")))))
    g = parse_formula("exists z (E(x,z) & !E(z,y))")
    assert isinstance(g, Exists) and g.var == "z"
    assert free_vars(g) == {"x", "y"}


def test_parse_error_offset():
    with pytest.raises(FormulaSyntaxError) as exc:
        parse_formula("E(x")
    assert exc.value.pos == 3


def test_signature_checks():
    with pytest.raises(SignatureError):
        parse_formula("R(x)", {"E": 2})
    with pytest.raises(SignatureError):
        parse_formula("E(x)", {"E": 2})


def test_precedence_and_comments():
    f = parse_formula("a = b | a = c & !true -> false  # trailing")
    s = RelStructure({}, [1, 2], {})
    assert eval_formula(s, f, {"a": 1, "b": 1, "c": 2}) is False
    assert eval_formula(s, f, {"a": 1, "b": 2, "c": 2}) is True
    assert parse_formula("forall x, y. x = y") == parse_formula("forall x forall y (x = y)")


def test_singleton_equality():
    s = RelStructure({}, ["only"], {})
    assert eval_formula(s, parse_formula("x = x"), {"x": "only"})
    assert eval_formula(s, parse_formula("forall x, y. x = y"))


def test_unbound_variable():
    with pytest.raises(UnboundVariable):
        eval_formula(RelStructure({}, [1], {}), parse_formula("x = y"), {"x": 1})


def test_copy_k1():
    s = copy_structure(RelStructure({}, ["v"], {}), 2)
    assert len(s.domain) == 2
    assert s.relations["F"] == {(("v", 1), ("v", 2)), (("v", 2), ("v", 1))}
    assert s.relations["M1"] == {(("v", 1),)}


def test_interpret_false_domain_is_empty():
    s = graph_structure(half_graph(2).graph)
    out = run_steps(s, [interpretation("false", {"E": (["x", "y"], "E(x,y)")})])
    assert not out.domain and not out.relations["E"]


def test_steps_compose():
    s = graph_structure(half_graph(2).graph)
    out = run_steps(s, [Copy(2), Color({"P": [x for x in copy_structure(s, 2).domain if x[1] == 1]}),
                        interpretation("P(x)", {"E": (["x", "y"], "E(x,y)")})])
    assert len(out.domain) == 4 and len(out.relations["E"]) == 6


def test_library_size():
    assert len(FORMULAS) >= 6
    for nf in FORMULAS.values():
        assert free_vars(nf.formula) <= set(nf.variables)
        assert parse_formula(to_text(nf.formula)) == nf.formula


def test_chi2_and_chi3_on_half_graph():
    b = half_graph(3)
    part = {v: int(v[1]) - 1 for v in b.vertices}
    s = o_structure(b, part)
    chi2 = satisfying(s, FORMULAS["chi2"].formula, ("x", "y"))
    chi3 = satisfying(s, FORMULAS["chi3"].formula, ("x", "y"))
    # two parts apart: chi2 sees color 1 on the left, chi3 sees it on the right
    assert ("a1", "b3") in chi2 and ("b3", "a1") in chi2
    assert ("a1", "b3") not in chi3
    assert ("a3", "b1") in chi3 and ("b1", "a3") in chi3
    assert ("a3", "b1") not in chi2


@pytest.mark.parametrize("k", [3, 4, 5])
def test_sim_o_on_half_graphs(k):
    b = half_graph(k)
    part = {v: int(v[1:]) - 1 for v in b.vertices}
    s = o_structure(b, part)
    got = satisfying(s, FORMULAS["sim_O"].formula, ("x", "y"))
    assert got == {(x, y) for x in b.vertices for y in b.vertices if part[x] == part[y]}


def _o_instances(limit):
    out = []
    for seed in range(4000):
        t = gen_clean_bicotree(seed, 10, 3)
        if node_type(t, t.root) == "O":
            out.append((seed, t))
        if len(out) == limit:
            break
    return out


def _parts(t):
    return {v: i for i, c in enumerate(t.tree.children[t.root]) for v in t.tree.leaves_under(c)}


@pytest.mark.parametrize("seed,t", _o_instances(25), ids=lambda v: str(v) if isinstance(v, int) else "")
def test_sim_o_matches_children(seed, t):
    part = _parts(t)
    s = o_structure(bipartite_of(t), part)
    got = satisfying(s, FORMULAS["sim_O"].formula, ("x", "y"))
    assert got == {(x, y) for x in t.ground for y in t.ground if part[x] == part[y]}


def test_literal_sim_o_merges_far_parts():
    spec = ("O", [("B", ["a0", "b0"]), ("U", ["a1", "b1"]), ("B", ["a2", "b2"]), ("U", ["a3", "b3"])])
    t = from_nested(spec, 2, {v: 1 if v[0] == "a" else 2 for v in _leaves(spec)})
    part = _parts(t)
    s = o_structure(bipartite_of(t), part)
    lit = satisfying(s, FORMULAS["sim_O_literal"].formula, ("x", "y"))
    fixed = satisfying(s, FORMULAS["sim_O"].formula, ("x", "y"))
    truth = {(x, y) for x in t.ground for y in t.ground if part[x] == part[y]}
    assert fixed == truth
    # a color-1 vertex three children right of a color-2 vertex
    assert lit - truth == {("a3", "b0"), ("b0", "a3")}


def _leaves(spec):
    return [v for c in spec[1] for v in (_leaves(c) if isinstance(c, tuple) else [c])]


@pytest.mark.parametrize("seed", range(100))
def test_dist_formula_against_bfs(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 9)
    g = random_graph(rng, n, rng.uniform(0.1, 0.4))
    s = graph_structure(g)
    got = satisfying(s, FORMULAS["dist_le_6"].formula, ("x", "y"))
    lengths = dict(nx.all_pairs_shortest_path_length(to_nx(g), cutoff=6))
    assert got == {(x, y) for x in g.vertices for y in lengths[x]}


@pytest.mark.parametrize("seed", range(20))
def test_edge_formula_matches_build(seed):
    m = gen_tmodel(seed, 1 + seed % 3, 7, 4)
    assert lambda_matches_build(m) == []


@pytest.mark.parametrize("seed", range(15))
def test_rho_pipeline_and_inverse(seed):
    rng = random.Random(seed)
    m = random_coupling(rng, rng.randint(1, 4))
    got = rho_pipeline(m)
    assert got.relations["Lt"] == generators(m)
    assert {x for (x,) in got.relations["Gr"]} == {(u, 1) for (u,) in m.relations["Gr"]}
    p = encode_poset(m)
    d = decode_poset(p)
    assert inverse_rho(p, "inv_rho_E") == d.relations["E"]
    assert inverse_rho(p, "inv_rho_Lt") == d.relations["Lt"]


@settings(max_examples=150)
@given(st.integers(0, 2**32))
def test_evaluators_agree(seed):
    rng = random.Random(seed)
    sig = {"E": 2, "P": 1}
    s = random_structure(rng, sig, rng.randint(1, 4))
    f = _rand_formula(rng, 4, ["x", "y", "z"], sig)
    env = {v: rng.choice(list(s.domain)) for v in ("x", "y", "z")}
    assert eval_formula(s, f, env) == reference_eval(s, f, env)
    assert parse_formula(to_text(f)) == f


def test_module_exports():
    assert set(folang.__all__) >= {"parse_formula", "eval_formula", "run_steps", "builtin_formulas"}
