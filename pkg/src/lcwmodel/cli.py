"""Command-line front end.  Every command is a thin wrapper over library calls.

Exit codes: 0 pass, 1 check failure, 2 input or usage error.
"""

from __future__ import annotations

import argparse
import itertools
import json
import random
import sys
from pathlib import Path

from . import anchor, bicotree, cotree, folang, gen, posetenc, splitdec, suites, tmodel
from .structure import (
    RelStructure,
    dumps,
    format_edge_list,
    parse_bipartite,
    parse_edge_list,
    relstructure_from_json,
    relstructure_to_json,
    to_dot,
    vsorted,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


# --------------------------------------------------------------------------
# I/O helpers


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from e


def _json(path: str):
    try:
        return json.loads(_read(path))
    except json.JSONDecodeError as e:
        raise UsageError(f"{path}: invalid JSON ({e.msg} at line {e.lineno})") from e


def _emit(args, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_json(args, obj) -> None:
    _emit(args, dumps(obj))


def _report(args, rep: suites.RunReport) -> int:
    if args.format == "json":
        _emit_json(args, rep.to_json())
    else:
        _emit(args, rep.to_text())
    return EXIT_OK if rep.ok else EXIT_FAIL


def _model(path: str) -> tmodel.TModel:
    d = _json(path)
    try:
        m = tmodel.from_json(d)
    except (KeyError, TypeError, ValueError) as e:
        raise UsageError(f"{path}: not a T-model ({e})") from e
    problems = tmodel.validate(m)
    if problems:
        raise UsageError(f"{path}: malformed T-model: {problems[0]}")
    return m


def _emit_model(args, m: tmodel.TModel) -> None:
    if args.format == "text":
        _emit(args, json.dumps(tmodel.to_nested(m)))
    else:
        _emit_json(args, tmodel.to_json(m))


def _graph(path: str):
    try:
        return parse_edge_list(_read(path))
    except ValueError as e:
        raise UsageError(f"{path}: {e}") from e


def _bipartite(path: str):
    try:
        return parse_bipartite(_read(path))
    except ValueError as e:
        raise UsageError(f"{path}: {e}") from e


def _structure(path: str) -> RelStructure:
    try:
        return relstructure_from_json(_json(path))
    except (KeyError, TypeError, ValueError) as e:
        raise UsageError(f"{path}: not a relational structure ({e})") from e


def _amalgam(path: str) -> splitdec.Amalgam:
    try:
        return splitdec.amalgam_from_json(_json(path))
    except (KeyError, TypeError, ValueError) as e:
        raise UsageError(f"{path}: not an amalgam ({e})") from e


def _split(args, g):
    if not args.split:
        raise UsageError("--split <file> is required")
    try:
        return splitdec.split_from_json(_json(args.split), g)
    except (KeyError, TypeError, ValueError) as e:
        raise UsageError(f"{args.split}: not a split ({e})") from e


def _fail(msg: str, witness=None) -> int:
    sys.stderr.write(msg + (f"\nwitness: {witness}" if witness is not None else "") + "\n")
    return EXIT_FAIL


# --------------------------------------------------------------------------
# commands


def cmd_cotree(args) -> int:
    try:
        t = cotree.cograph_decompose(_graph(args.graph))
    except cotree.NotCograph as e:
        return _fail("not a cograph (induced P4)", e.witness)
    _emit_model(args, t)
    return EXIT_OK


def cmd_sob(args) -> int:
    try:
        t = bicotree.sob_decompose(_bipartite(args.graph))
    except bicotree.NotSob as e:
        return _fail(str(e), e.witness)
    _emit_model(args, t)
    return EXIT_OK


def cmd_build(args) -> int:
    m = _model(args.model)
    g = tmodel.build(m)
    if args.format == "dot":
        palette = ["black", "red", "blue", "darkgreen", "orange", "purple"]
        _emit(args, to_dot(g, "G", {v: palette[(m.gamma[v] - 1) % len(palette)] for v in m.ground}))
    else:
        _emit(args, format_edge_list(g))
    return EXIT_OK


def cmd_amalgam(args) -> int:
    if args.action == "build":
        g = _graph(args.input)
        try:
            a = splitdec.amalgam_build(g, _split(args, g))
        except splitdec.SplitError as e:
            return _fail("split rejected", [str(f) for f in e.report.failures])
        _emit_json(args, splitdec.amalgam_to_json(a))
        return EXIT_OK
    a = _amalgam(args.input)
    try:
        if args.action == "sbuild":
            _emit(args, format_edge_list(splitdec.sbuild(a)))
        elif args.action == "restrict":
            keep = [v for v in (args.keep or "").split(",") if v]
            names = {str(v): v for v in a.ground}
            missing = [v for v in keep if v not in names]
            if missing:
                raise UsageError(f"unknown vertices: {', '.join(missing)}")
            _emit_json(args, splitdec.amalgam_to_json(splitdec.amalgam_restrict(a, [names[v] for v in keep])))
        else:
            _emit_json(args, relstructure_to_json(splitdec.coupling_view(a)))
    except splitdec.BrokenInjection as e:
        return _fail(f"broken injection: {e}")
    return EXIT_OK


def cmd_posetenc(args) -> int:
    if args.action == "encode":
        try:
            p = posetenc.encode_poset(_structure(args.input))
        except posetenc.NotACoupling as e:
            return _fail(f"not a coupling: {e}")
        if args.format == "dot":
            _emit(args, posetenc.cps_to_dot(p))
        else:
            _emit_json(args, posetenc.cps_to_json(p))
        return EXIT_OK
    try:
        p = posetenc.cps_from_json(_json(args.input))
    except (KeyError, TypeError, ValueError) as e:
        raise UsageError(f"{args.input}: not a colored poset ({e})") from e
    problems = posetenc.validate_cps(p)
    if problems:
        return _fail("invalid colored poset", problems)
    if args.action == "decode":
        _emit_json(args, relstructure_to_json(posetenc.decode_poset(p)))
        return EXIT_OK
    ok = posetenc.weak_sparseness_probe(p, args.t)
    _emit(args, f"K_{{{args.t},{args.t}}}-free cover graph: {'yes' if ok else 'no'}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_anchor(args) -> int:
    try:
        if args.action == "cotree":
            _emit_json(args, anchor.cotree_anchor(_model(args.input)).to_json())
        elif args.action == "bicotree":
            _emit_json(args, anchor.bicotree_anchor(_model(args.input)).to_json())
        elif args.action == "amalgam":
            _emit_json(args, anchor.amalgam_anchor(_amalgam(args.input)).to_json())
        elif args.action == "verify":
            return _report(args, _verify_anchor(args))
        else:
            return _report(args, _cover(args))
    except anchor.NotClean as e:
        return _fail(f"model is not clean: {e}")
    return EXIT_OK


def _verify_anchor(args) -> suites.RunReport:
    m = _model(args.input)
    F = anchor.Anchor.from_json(_json(args.anchor), m.ground) if args.anchor else None
    return suites.anchor_report(m, F, args.seed, label=args.input)


def _cover(args) -> suites.RunReport:
    a = _amalgam(args.input)
    if args.zeta:
        names = {str(v): v for v in a.ground}
        zeta = {names.get(str(k), k): int(c) for k, c in _json(args.zeta).items()}
    else:
        rng = random.Random(args.seed)
        zeta = {v: rng.randint(1, args.colors) for v in vsorted(a.ground)}
    try:
        return suites.cover_report(a, zeta, args.p, args.seed, label=args.input)
    except ValueError as e:
        raise UsageError(str(e)) from e


def cmd_folang(args) -> int:
    s = _structure(args.structure)
    try:
        f = folang.parse_formula(args.formula, s.signature)
    except (folang.FormulaSyntaxError, folang.SignatureError) as e:
        raise UsageError(f"formula: {e}") from e
    env = {}
    names = {str(v): v for v in s.domain}
    for b in args.bind or []:
        var, _, val = b.partition("=")
        if val not in names:
            raise UsageError(f"--bind {b}: {val!r} is not in the domain")
        env[var] = names[val]
    free = sorted(folang.free_vars(f) - set(env))
    if not free:
        val = folang.eval_formula(s, f, env)
        _emit(args, json.dumps(val) if args.format == "json" else ("true" if val else "false"))
        return EXIT_OK
    dom = vsorted(s.domain)
    rows = [tup for tup in itertools.product(dom, repeat=len(free))
            if folang.eval_formula(s, f, dict(env, **dict(zip(free, tup))))]
    if args.format == "json":
        _emit_json(args, {"variables": free, "tuples": [list(r) for r in rows]})
    else:
        _emit(args, "\n".join(" ".join(str(x) for x in r) for r in rows) or "(none)")
    return EXIT_OK


def cmd_roundtrip(args) -> int:
    kind = args.kind
    rng_seed = args.seed
    if kind == "cograph":
        g = _graph(args.input) if args.input else tmodel.build(
            gen.gen_clean_cotree(rng_seed, args.max_leaves, args.height))
        return _report(args, suites.roundtrip_cograph(g, rng_seed, args.expect_reject))
    if kind == "sob":
        b = _bipartite(args.input) if args.input else bicotree.bipartite_of(
            gen.gen_clean_bicotree(rng_seed, args.max_leaves, args.height))
        return _report(args, suites.roundtrip_sob(b, rng_seed, args.expect_reject))
    if kind == "amalgam":
        if args.input:
            g = _graph(args.input)
            sp = _split(args, g)
        else:
            n = random.Random(rng_seed).randint(1, 3)
            sp = splitdec.split_from_tmodel(gen.gen_tmodel(rng_seed, n, args.max_leaves, args.height))
        return _report(args, suites.roundtrip_amalgam(sp, rng_seed, args.expect_reject))
    if args.input:
        m = _structure(args.input)
    else:
        rng = random.Random(rng_seed)
        m = suites.random_coupling(rng, rng.randint(0, args.max_leaves))
    return _report(args, suites.roundtrip_poset(m, rng_seed, args.expect_reject))


def cmd_suite(args) -> int:
    try:
        rep = suites.run_suite(args.name, args.seed)
    except KeyError as e:
        raise UsageError(f"unknown suite {args.name!r}; choose from {', '.join(suites.suite_names())}") from e
    return _report(args, rep)


def cmd_gen(args) -> int:
    try:
        if args.kind == "cotree":
            m = gen.gen_clean_cotree(args.seed, args.max_leaves, args.height)
        elif args.kind == "bicotree":
            m = gen.gen_clean_bicotree(args.seed, args.max_leaves, args.height)
        elif args.kind == "raw-bicotree":
            m = gen.gen_bicotree(args.seed, args.max_leaves, args.height)
        else:
            m = gen.gen_tmodel(args.seed, args.n, args.max_leaves, args.height)
    except gen.InfeasibleBounds as e:
        raise UsageError(str(e)) from e
    _emit_model(args, m)
    return EXIT_OK


# --------------------------------------------------------------------------
# argument parsing


def _common(p: argparse.ArgumentParser, formats=("json", "text")) -> None:
    p.add_argument("--seed", type=lambda s: int(s, 0) & suites.SEED_MASK, default=0,
                   help="64-bit base seed (default 0)")
    p.add_argument("--max-leaves", type=int, default=10)
    p.add_argument("--height", type=int, default=3)
    p.add_argument("--format", choices=formats, default=formats[0])
    p.add_argument("--out", help="write output to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="lcwmodel", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("cotree", help="cotree of a cograph (edge-list file)")
    p.add_argument("graph")
    _common(p)
    p.set_defaults(func=cmd_cotree)

    p = sub.add_parser("sob", help="clean bicotree of a bipartite graph (edge list with '# label v 1|2')")
    p.add_argument("graph")
    _common(p)
    p.set_defaults(func=cmd_sob)

    p = sub.add_parser("build", help="graph of a T-model")
    p.add_argument("model")
    _common(p, ("edges", "dot"))
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("amalgam", help="amalgam models")
    p.add_argument("action", choices=["build", "sbuild", "restrict", "coupling"])
    p.add_argument("input", help="edge-list graph (build) or amalgam JSON")
    p.add_argument("--split", help="split JSON {N, h, gamma} (build)")
    p.add_argument("--keep", help="comma-separated ground vertices (restrict)")
    _common(p)
    p.set_defaults(func=cmd_amalgam)

    p = sub.add_parser("posetenc", help="colored-poset encoding of couplings")
    p.add_argument("action", choices=["encode", "decode", "probe"])
    p.add_argument("input")
    p.add_argument("--t", type=int, default=3, help="biclique size for probe")
    _common(p, ("json", "dot"))
    p.set_defaults(func=cmd_posetenc)

    p = sub.add_parser("anchor", help="anchors and covers")
    p.add_argument("action", choices=["cotree", "bicotree", "amalgam", "verify", "cover"])
    p.add_argument("input", help="T-model JSON or amalgam JSON (amalgam, cover)")
    p.add_argument("--anchor", help="anchor JSON to verify instead of the computed one")
    p.add_argument("--zeta", help="coloring JSON {vertex: color} for cover")
    p.add_argument("--colors", type=int, default=4, help="random coloring size when --zeta is absent")
    p.add_argument("--p", type=int, default=2)
    _common(p)
    p.set_defaults(func=cmd_anchor)

    p = sub.add_parser("folang", help="first-order formulas")
    p.add_argument("action", choices=["eval"])
    p.add_argument("structure")
    p.add_argument("formula")
    p.add_argument("--bind", action="append", help="var=element (repeatable)")
    _common(p)
    p.set_defaults(func=cmd_folang)

    p = sub.add_parser("roundtrip", help="decompose/build or encode/decode one instance")
    p.add_argument("kind", choices=["cograph", "sob", "amalgam", "poset"])
    p.add_argument("input", nargs="?", help="input file; a seeded random instance if omitted")
    p.add_argument("--split", help="split JSON for amalgam inputs")
    p.add_argument("--expect-reject", action="store_true", help="pass iff the input is rejected")
    _common(p, ("text", "json"))
    p.set_defaults(func=cmd_roundtrip)

    p = sub.add_parser("suite", help="property suites: " + ", ".join(suites.suite_names()))
    p.add_argument("name")
    _common(p, ("text", "json"))
    p.set_defaults(func=cmd_suite)

    p = sub.add_parser("gen", help="seeded random models")
    p.add_argument("kind", choices=["cotree", "bicotree", "raw-bicotree", "tmodel"])
    p.add_argument("--n", type=int, default=2, help="number of colors (tmodel)")
    _common(p)
    p.set_defaults(func=cmd_gen)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        if getattr(args, "max_leaves", 1) < 1 or getattr(args, "height", 1) < 1:
            raise UsageError("--max-leaves and --height must be >= 1")
        return args.func(args)
    except UsageError as e:
        sys.stderr.write(f"lcwmodel: error: {e}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
