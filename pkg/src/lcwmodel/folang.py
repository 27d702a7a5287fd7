"""A small first-order language over RelStructure: parser, evaluator, a
second (bottom-up) reference evaluator, and atomic transduction steps.

Grammar (lowest to highest precedence)::

    formula := disj ( '->' formula )?            right associative
    disj    := conj ( '|' conj )*
    conj    := unary ( '&' unary )*
    unary   := '!' unary
             | ('exists' | 'forall') var (',' var)* ( '.' formula | unary )
             | '(' formula ')' | 'true' | 'false'
             | Rel '(' var (',' var)* ')'
             | var '=' var | var '!=' var

Identifiers are ``[A-Za-z_][A-Za-z0-9_']*``; ``#`` starts a comment.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Mapping

from .structure import RelStructure, vsorted


class FormulaSyntaxError(ValueError):
    def __init__(self, msg: str, pos: int, text: str = ""):
        super().__init__(f"{msg} at offset {pos}")
        self.pos = pos
        self.text = text


class SignatureError(ValueError):
    pass


class UnboundVariable(KeyError):
    pass


# --------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Const:
    value: bool


@dataclass(frozen=True)
class Atom:
    rel: str
    args: tuple


@dataclass(frozen=True)
class Eq:
    left: str
    right: str


@dataclass(frozen=True)
class Not:
    body: object


@dataclass(frozen=True)
class And:
    parts: tuple


@dataclass(frozen=True)
class Or:
    parts: tuple


@dataclass(frozen=True)
class Implies:
    left: object
    right: object


@dataclass(frozen=True)
class Exists:
    var: str
    body: object


@dataclass(frozen=True)
class Forall:
    var: str
    body: object


Formula = object


def free_vars(f) -> frozenset:
    if isinstance(f, Const):
        return frozenset()
    if isinstance(f, Atom):
        return frozenset(f.args)
    if isinstance(f, Eq):
        return frozenset((f.left, f.right))
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, (And, Or)):
        return frozenset().union(*(free_vars(p) for p in f.parts))
    if isinstance(f, Implies):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, (Exists, Forall)):
        return free_vars(f.body) - {f.var}
    raise TypeError(f"not a formula: {f!r}")


def relations_used(f) -> dict:
    out: dict = {}

    def walk(g):
        if isinstance(g, Atom):
            out[g.rel] = len(g.args)
        elif isinstance(g, Not):
            walk(g.body)
        elif isinstance(g, (And, Or)):
            for p in g.parts:
                walk(p)
        elif isinstance(g, Implies):
            walk(g.left)
            walk(g.right)
        elif isinstance(g, (Exists, Forall)):
            walk(g.body)

    walk(f)
    return out


def to_text(f) -> str:
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, Atom):
        return f"{f.rel}({','.join(f.args)})"
    if isinstance(f, Eq):
        return f"{f.left} = {f.right}"
    if isinstance(f, Not):
        return f"!{_wrap(f.body)}"
    if isinstance(f, And):
        return " & ".join(_wrap(p) for p in f.parts)
    if isinstance(f, Or):
        return " | ".join(_wrap(p) for p in f.parts)
    if isinstance(f, Implies):
        return f"{_wrap(f.left)} -> {_wrap(f.right)}"
    if isinstance(f, Exists):
        return f"exists {f.var} {_wrap(f.body)}"
    if isinstance(f, Forall):
        return f"forall {f.var} {_wrap(f.body)}"
    raise TypeError(f"not a formula: {f!r}")


def _wrap(f) -> str:
    s = to_text(f)
    return s if isinstance(f, (Const, Atom, Not)) else f"({s})"


# --------------------------------------------------------------------------
# parser

_TOKEN = re.compile(r"\s*(?:(#[^\n]*)|(->|!=|[!&|().,=])|([A-Za-z_][A-Za-z0-9_']*))")
KEYWORDS = {"exists", "forall", "true", "false"}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        if m.group(1) is not None:
            pos = m.end()
            continue
        start = m.start(2) if m.group(2) else m.start(3)
        if m.group(2):
            out.append(("op", m.group(2), start))
        else:
            out.append(("id", m.group(3), start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, sig: Mapping[str, int] | None):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.sig = sig

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, op: str):
        t = self.take()
        if t[1] != op or t[0] == "id":
            raise FormulaSyntaxError(f"expected {op!r}, found {t[1] or 'end of input'!r}", t[2], self.text)
        return t

    def error(self, msg: str):
        raise FormulaSyntaxError(msg, self.peek()[2], self.text)

    def formula(self):
        left = self.disj()
        if self.peek()[1] == "->" and self.peek()[0] == "op":
            self.take()
            return Implies(left, self.formula())
        return left

    def disj(self):
        parts = [self.conj()]
        while self.peek()[:2] == ("op", "|"):
            self.take()
            parts.append(self.conj())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def conj(self):
        parts = [self.unary()]
        while self.peek()[:2] == ("op", "&"):
            self.take()
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def var(self) -> str:
        t = self.take()
        if t[0] != "id" or t[1] in KEYWORDS:
            raise FormulaSyntaxError(f"expected a variable, found {t[1] or 'end of input'!r}", t[2], self.text)
        return t[1]

    def unary(self):
        kind, val, pos = self.peek()
        if kind == "op" and val == "!":
            self.take()
            return Not(self.unary())
        if kind == "op" and val == "(":
            self.take()
            f = self.formula()
            self.expect(")")
            return f
        if kind == "id" and val in ("exists", "forall"):
            self.take()
            vs = [self.var()]
            while self.peek()[:2] == ("op", ","):
                self.take()
                vs.append(self.var())
            if self.peek()[:2] == ("op", "."):
                self.take()
                body = self.formula()
            else:
                body = self.unary()
            q = Exists if val == "exists" else Forall
            for v in reversed(vs):
                body = q(v, body)
            return body
        if kind == "id" and val in ("true", "false"):
            self.take()
            return Const(val == "true")
        if kind == "id":
            self.take()
            nxt = self.peek()
            if nxt[:2] == ("op", "("):
                self.take()
                args = [self.var()]
                while self.peek()[:2] == ("op", ","):
                    self.take()
                    args.append(self.var())
                self.expect(")")
                if self.sig is not None:
                    if val not in self.sig:
                        raise SignatureError(f"unknown relation {val!r} at offset {pos}")
                    if self.sig[val] != len(args):
                        raise SignatureError(
                            f"{val} has arity {self.sig[val]}, used with {len(args)} at offset {pos}")
                return Atom(val, tuple(args))
            if nxt[:2] in (("op", "="), ("op", "!=")):
                self.take()
                right = self.var()
                eq = Eq(val, right)
                return eq if nxt[1] == "=" else Not(eq)
            raise FormulaSyntaxError(f"expected '(' or '=' after {val!r}", nxt[2], self.text)
        self.error(f"unexpected {val or 'end of input'!r}")


def parse_formula(text: str, sig: Mapping[str, int] | None = None):
    p = _Parser(text, sig)
    f = p.formula()
    if p.peek()[0] != "end":
        p.error(f"unexpected {p.peek()[1]!r}")
    return f


# --------------------------------------------------------------------------
# evaluation


def _check_sig(s: RelStructure, f) -> None:
    for r, ar in relations_used(f).items():
        if s.signature.get(r) != ar:
            raise SignatureError(f"relation {r}/{ar} not in the structure's signature")


def eval_formula(s: RelStructure, f, env: Mapping | None = None) -> bool:
    """Naive semantics: quantifiers enumerate the domain."""
    env = dict(env or {})
    missing = free_vars(f) - set(env)
    if missing:
        raise UnboundVariable(sorted(missing)[0])
    _check_sig(s, f)
    dom = vsorted(s.domain)
    rels = s.relations

    def ev(g, e) -> bool:
        if isinstance(g, Atom):
            return tuple(e[a] for a in g.args) in rels[g.rel]
        if isinstance(g, Eq):
            return e[g.left] == e[g.right]
        if isinstance(g, Not):
            return not ev(g.body, e)
        if isinstance(g, And):
            return all(ev(p, e) for p in g.parts)
        if isinstance(g, Or):
            return any(ev(p, e) for p in g.parts)
        if isinstance(g, Implies):
            return (not ev(g.left, e)) or ev(g.right, e)
        if isinstance(g, Exists):
            old = e.get(g.var, _MISSING)
            try:
                for d in dom:
                    e[g.var] = d
                    if ev(g.body, e):
                        return True
                return False
            finally:
                _restore(e, g.var, old)
        if isinstance(g, Forall):
            old = e.get(g.var, _MISSING)
            try:
                for d in dom:
                    e[g.var] = d
                    if not ev(g.body, e):
                        return False
                return True
            finally:
                _restore(e, g.var, old)
        if isinstance(g, Const):
            return g.value
        raise TypeError(f"not a formula: {g!r}")

    return ev(f, env)


_MISSING = object()


def _restore(e: dict, var: str, old) -> None:
    if old is _MISSING:
        e.pop(var, None)
    else:
        e[var] = old


def satisfying(s: RelStructure, f, variables: Iterable[str]) -> frozenset:
    """phi(M): tuples over ``variables`` (which must cover the free ones)."""
    variables = list(variables)
    if not free_vars(f) <= set(variables):
        raise UnboundVariable(sorted(free_vars(f) - set(variables))[0])
    dom = vsorted(s.domain)
    out = set()
    for tup in itertools.product(dom, repeat=len(variables)):
        if eval_formula(s, f, dict(zip(variables, tup))):
            out.add(tup)
    return frozenset(out)


# reference evaluator: relational algebra over satisfying-assignment tables


@dataclass(frozen=True)
class _Table:
    vars: tuple
    rows: frozenset


def _extend(t: _Table, vs: tuple, dom: list) -> _Table:
    extra = [v for v in vs if v not in t.vars]
    if not extra:
        idx = [t.vars.index(v) for v in vs]
        return _Table(vs, frozenset(tuple(r[i] for i in idx) for r in t.rows))
    allv = t.vars + tuple(extra)
    rows = {r + rest for r in t.rows for rest in itertools.product(dom, repeat=len(extra))}
    return _extend(_Table(allv, frozenset(rows)), vs, dom)


def _ref(s: RelStructure, g, dom: list) -> _Table:
    if isinstance(g, Const):
        return _Table((), frozenset({()}) if g.value else frozenset())
    if isinstance(g, Atom):
        vs = tuple(dict.fromkeys(g.args))
        rows = set()
        for tup in s.relations[g.rel]:
            bind: dict = {}
            ok = True
            for a, x in zip(g.args, tup):
                if bind.setdefault(a, x) != x:
                    ok = False
                    break
            if ok:
                rows.add(tuple(bind[v] for v in vs))
        return _Table(vs, frozenset(rows))
    if isinstance(g, Eq):
        if g.left == g.right:
            return _Table((g.left,), frozenset((d,) for d in dom))
        return _Table((g.left, g.right), frozenset((d, d) for d in dom))
    if isinstance(g, Not):
        t = _ref(s, g.body, dom)
        full = set(itertools.product(dom, repeat=len(t.vars)))
        return _Table(t.vars, frozenset(full - t.rows))
    if isinstance(g, (And, Or)):
        tabs = [_ref(s, p, dom) for p in g.parts]
        vs = tuple(sorted(set().union(*(t.vars for t in tabs))))
        ext = [_extend(t, vs, dom).rows for t in tabs]
        rows = frozenset.intersection(*ext) if isinstance(g, And) else frozenset.union(*ext)
        return _Table(vs, rows)
    if isinstance(g, Implies):
        return _ref(s, Or((Not(g.left), g.right)), dom)
    if isinstance(g, Exists):
        t = _ref(s, g.body, dom)
        if g.var not in t.vars:
            return t if dom else _Table(t.vars, frozenset())
        k = t.vars.index(g.var)
        vs = t.vars[:k] + t.vars[k + 1:]
        return _Table(vs, frozenset(r[:k] + r[k + 1:] for r in t.rows))
    if isinstance(g, Forall):
        return _ref(s, Not(Exists(g.var, Not(g.body))), dom)
    raise TypeError(f"not a formula: {g!r}")


def reference_eval(s: RelStructure, f, env: Mapping | None = None) -> bool:
    env = dict(env or {})
    missing = free_vars(f) - set(env)
    if missing:
        raise UnboundVariable(sorted(missing)[0])
    _check_sig(s, f)
    t = _ref(s, f, vsorted(s.domain))
    return tuple(env[v] for v in t.vars) in t.rows


# --------------------------------------------------------------------------
# transduction steps


@dataclass(frozen=True)
class Copy:
    k: int


@dataclass(frozen=True)
class Color:
    valuation: Mapping  # predicate name -> iterable of elements


@dataclass(frozen=True)
class Interpretation:
    nu: object
    rho: Mapping  # relation name -> (variables, formula)
    nu_var: str = "x"


def interpretation(nu: str, rho: Mapping[str, tuple[list, str]], sig: Mapping | None = None,
                   nu_var: str = "x") -> Interpretation:
    """Build an Interpretation from formula text."""
    return Interpretation(parse_formula(nu, sig), {
        r: (tuple(vs), parse_formula(txt, sig)) for r, (vs, txt) in rho.items()}, nu_var)


def copy_structure(s: RelStructure, k: int) -> RelStructure:
    """k disjoint copies (elements (e, c)), each carrying all relations;
    F links distinct clones of one element; M<c> marks copy c."""
    if k < 1:
        raise ValueError("k must be >= 1")
    for name in ["F"] + [f"M{c}" for c in range(1, k + 1)]:
        if name in s.signature:
            raise SignatureError(f"copying would clash with relation {name!r}")
    dom = [(e, c) for e in s.domain for c in range(1, k + 1)]
    sig = dict(s.signature)
    sig["F"] = 2
    rels = {r: [tuple((x, c) for x in t) for t in ts for c in range(1, k + 1)]
            for r, ts in s.relations.items()}
    rels["F"] = [((e, a), (e, b)) for e in s.domain for a in range(1, k + 1) for b in range(1, k + 1) if a != b]
    for c in range(1, k + 1):
        sig[f"M{c}"] = 1
        rels[f"M{c}"] = [((e, c),) for e in s.domain]
    return RelStructure(sig, dom, rels)


def color_structure(s: RelStructure, valuation: Mapping) -> RelStructure:
    sig = dict(s.signature)
    rels = dict(s.relations)
    for name, xs in valuation.items():
        if name in sig:
            raise SignatureError(f"coloring would clash with relation {name!r}")
        sig[name] = 1
        rels[name] = [(x,) for x in xs]
    return RelStructure(sig, s.domain, rels)


def interpret(s: RelStructure, it: Interpretation) -> RelStructure:
    dom = [d for d in vsorted(s.domain) if eval_formula(s, it.nu, {it.nu_var: d})]
    sub = s.induced(dom)
    sig, rels = {}, {}
    for r, (vs, f) in it.rho.items():
        sig[r] = len(vs)
        rels[r] = satisfying(sub, f, vs)
    return RelStructure(sig, dom, rels)


def apply_step(s: RelStructure, step) -> RelStructure:
    if isinstance(step, Copy):
        return copy_structure(s, step.k)
    if isinstance(step, Color):
        return color_structure(s, step.valuation)
    if isinstance(step, Interpretation):
        return interpret(s, step)
    raise TypeError(f"unknown step {step!r}")


def run_steps(s: RelStructure, steps: Iterable) -> RelStructure:
    for st in steps:
        s = apply_step(s, st)
    return s


# --------------------------------------------------------------------------
# formula library


def lambda_text(n: int, x: str = "x", y: str = "y") -> str:
    """lambda(x, y) over the model view: the infimum z decides, reading the
    kappa marks of z at the colors of x and y."""
    kap = " | ".join(f"(Col{i}({x}) & Col{j}({y}) & K{i}_{j}(z))"
                     for i in range(1, n + 1) for j in range(1, n + 1))
    return f"exists z (Inf({x},{y},z) & ((A(z) & {x} != {y}) | (C(z) & Lt({x},{y}))) & ({kap}))"


def model_sig(n: int) -> dict:
    sig = {"L": 1, "A": 1, "C": 1, "Inf": 3, "Lt": 2}
    for i in range(1, n + 1):
        sig[f"Col{i}"] = 1
        for j in range(1, n + 1):
            sig[f"K{i}_{j}"] = 1
    return sig


def _dist_text(k: int, x: str = "x", y: str = "y") -> str:
    """dist(x, y) <= k as nested existentials."""
    def walk(cur: str, left: int, depth: int) -> str:
        if left == 1:
            return f"E({cur},{y})"
        z = f"z{depth}"
        return f"E({cur},{y}) | exists {z} (E({cur},{z}) & ({walk(z, left - 1, depth + 1)}))"
    if k == 0:
        return f"{x} = {y}"
    return f"{x} = {y} | {walk(x, k, 1)}"


SOB_SIG = {"E": 2, "Col1": 1, "Col2": 1, "K1": 1, "K2": 1, "K3": 1}
_SAMEK = "((K1({a}) & K1({b})) | (K2({a}) & K2({b})) | (K3({a}) & K3({b})))"


def _samek(a: str, b: str) -> str:
    return _SAMEK.format(a=a, b=b)


def _samecol(a: str, b: str) -> str:
    return f"((Col1({a}) & Col1({b})) | (Col2({a}) & Col2({b})))"


def chi1_text(x="x", y="y") -> str:
    return f"exists z (!{_samek('z', x)} & E({x},z) & !E(z,{y}))"


def chi2_text(x="x", y="y") -> str:
    return (f"exists z1, z2 (!{_samek(x, 'z1')} & !{_samek(x, 'z2')} & "
            f"E({x},z1) & !E(z1,z2) & E(z2,{y}))")


def chi3_text(x="x", y="y") -> str:
    """Mirror of chi2: the parts of z2 and z1 lie strictly between those of
    y and x, in that order.  Non-edges say nothing between equal colors, so
    the colors of z1 and z2 are pinned explicitly."""
    return (f"exists z1, z2 (!{_samek(x, 'z1')} & !{_samek(x, 'z2')} & !{_samecol(x, 'z1')} & "
            f"{_samecol(x, 'z2')} & !E({x},z1) & E(z1,z2) & !E(z2,{y}))")


def sim_o_text(literal: bool = False) -> str:
    """Same-child relation below an O-node whose children carry K1..K3 by
    index mod 3.  ``literal=True`` drops the chi3 disjuncts; that version
    merges a color-1 vertex with a color-2 vertex three or more children to
    its left."""
    diff = f"!({chi2_text('x', 'y')}) & !({chi2_text('y', 'x')})"
    if not literal:
        diff += f" & !({chi3_text('x', 'y')}) & !({chi3_text('y', 'x')})"
    return (f"{_samek('x', 'y')} & (({_samecol('x', 'y')} & !({chi1_text('x', 'y')}) & !({chi1_text('y', 'x')}))"
            f" | (!{_samecol('x', 'y')} & {diff}))")


COPY_SIG = {"Lt": 2, "E": 2, "Gr": 1, "F": 2, "P1": 1, "P2": 1, "P3": 1, "P4": 1}
CPS_SIG = {"Lt": 2, "F": 2, "Gr": 1, "P1": 1, "P2": 1, "P3": 1, "P4": 1}

RHO_GR = "P1(u) & Gr(u)"
RHO_LT = ("(P4(u) & P4(v) & Lt(u,v))"
          " | (F(u,v) & P1(v) & (P2(u) | P3(u) | P4(u)))"
          " | (P2(u) & (P3(v) | P1(v)) & exists w (P2(w) & F(v,w) & E(u,w)))")
INV_LT = "exists a, b (P4(a) & P4(b) & F(u,a) & F(v,b) & Lt(a,b))"
INV_E = "exists a, b (P2(a) & P3(b) & F(u,a) & F(v,b) & Lt(a,b))"
# the "below" reading of the inverse; not a correct inverse (see tests)
INV_E_BELOW = "exists a, b (P2(a) & P3(b) & Lt(a,u) & Lt(b,v) & Lt(a,b))"


@dataclass(frozen=True)
class NamedFormula:
    name: str
    variables: tuple
    signature: Mapping
    text: str
    formula: object


def builtin_formulas(n: int = 2) -> dict[str, NamedFormula]:
    """Parsed, arity-checked formulas; signatures are documented per entry."""
    graph_sig = {"E": 2}
    table = {
        "lambda": (("x", "y"), model_sig(n), lambda_text(n)),
        "edge": (("x", "y"), model_sig(n), _edge_text(n)),
        "dist_le_6": (("x", "y"), graph_sig, _dist_text(6)),
        "chi1": (("x", "y"), SOB_SIG, chi1_text()),
        "chi2": (("x", "y"), SOB_SIG, chi2_text()),
        "chi3": (("x", "y"), SOB_SIG, chi3_text()),
        "sim_O": (("x", "y"), SOB_SIG, sim_o_text()),
        "sim_O_literal": (("x", "y"), SOB_SIG, sim_o_text(literal=True)),
        "rho_Gr": (("u",), COPY_SIG, RHO_GR),
        "rho_Lt": (("u", "v"), COPY_SIG, RHO_LT),
        "inv_rho_Lt": (("u", "v"), CPS_SIG, INV_LT),
        "inv_rho_E": (("u", "v"), CPS_SIG, INV_E),
        "inv_rho_E_below": (("u", "v"), CPS_SIG, INV_E_BELOW),
    }
    return {k: NamedFormula(k, vs, sig, txt, parse_formula(txt, sig)) for k, (vs, sig, txt) in table.items()}


def _edge_text(n: int) -> str:
    return f"L(x) & L(y) & (({lambda_text(n)}) | ({lambda_text(n, 'y', 'x')}))"


__all__ = [
    "COPY_SIG", "CPS_SIG", "SOB_SIG", "model_sig", "lambda_text", "And", "Atom", "Color", "Const", "Copy", "Eq", "Exists", "Forall", "FormulaSyntaxError", "Implies",
    "Interpretation", "NamedFormula", "Not", "Or", "SignatureError", "UnboundVariable", "apply_step",
    "builtin_formulas", "color_structure", "copy_structure", "eval_formula", "free_vars", "interpret",
    "interpretation", "parse_formula", "reference_eval", "run_steps", "satisfying", "to_text",
]
