import json
import subprocess
import sys

import pytest

from lcwmodel import suites
from lcwmodel.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main
from lcwmodel.gen import gen_tmodel
from lcwmodel.structure import RelStructure, dumps, format_edge_list, parse_edge_list, relstructure_to_json
from lcwmodel.tmodel import build, from_json, to_json


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text if isinstance(text, str) else json.dumps(text))
        return p
    return write


def test_cotree_of_p3(capsys, files):
    code, out, _ = run(capsys, "cotree", files("p3.txt", "a b\nb c\n"))
    assert code == EXIT_OK
    m = from_json(json.loads(out))
    assert build(m) == parse_edge_list("a b\nb c\n")


def test_cotree_of_p4_fails_with_witness(capsys, files):
    code, _, err = run(capsys, "cotree", files("p4.txt", "a b\nb c\nc d\n"))
    assert code == EXIT_FAIL and "witness" in err


def test_usage_errors(capsys, files, tmp_path):
    assert run(capsys, "cotree", tmp_path / "missing.txt")[0] == EXIT_USAGE
    assert run(capsys, "nosuchcommand")[0] == EXIT_USAGE
    assert run(capsys, "gen", "cotree", "--max-leaves", "0")[0] == EXIT_USAGE
    assert run(capsys, "build", files("bad.json", "{not json"))[0] == EXIT_USAGE
    assert run(capsys, "suite", "nosuchsuite")[0] == EXIT_USAGE


def test_roundtrip_examples(capsys, files):
    code, out, _ = run(capsys, "roundtrip", "cograph", files("p3.txt", "a b\nb c\n"))
    assert code == EXIT_OK and "PASS" in out
    p7 = "".join(f"{i} {i + 1}\n" for i in range(6)) + "".join(
        f"# label {i} {1 + i % 2}\n" for i in range(7))
    code, out, _ = run(capsys, "roundtrip", "sob", files("p7.txt", p7), "--expect-reject")
    assert code == EXIT_OK
    assert run(capsys, "roundtrip", "sob", files("p7b.txt", p7))[0] == EXIT_FAIL
    k2 = RelStructure({"Lt": 2, "E": 2, "Gr": 1}, ["u", "v"],
                      {"Lt": [], "E": [("u", "v"), ("v", "u")], "Gr": [("u",), ("v",)]})
    code, out, _ = run(capsys, "roundtrip", "poset", files("k2.json", relstructure_to_json(k2)))
    assert code == EXIT_OK


@pytest.mark.parametrize("kind", ["cograph", "sob", "amalgam", "poset"])
def test_seeded_roundtrips(capsys, kind):
    code, out, _ = run(capsys, "roundtrip", kind, "--seed", "0x2a", "--format", "json")
    assert code == EXIT_OK
    assert json.loads(out)["seed"] == 42


def test_model_json_is_bit_exact(capsys, files, tmp_path):
    m = gen_tmodel(5, 3, 9, 4)
    text = json.dumps(to_json(m), indent=2)
    src = files("m.json", text)
    out = tmp_path / "again.json"
    assert run(capsys, "gen", "tmodel", "--n", 3, "--seed", 5, "--max-leaves", 9, "--height", 4,
               "--out", out)[0] == EXIT_OK
    assert out.read_text() == dumps(to_json(m)) + "\n"
    assert from_json(json.loads(out.read_text())) == m
    code, edges, _ = run(capsys, "build", src)
    assert code == EXIT_OK and edges == format_edge_list(build(m))
    code, dot, _ = run(capsys, "build", src, "--format", "dot")
    assert dot.startswith("graph G {")


def test_amalgam_commands(capsys, files, tmp_path):
    g = "0 1\n1 2\n2 3\n3 0\n"
    gfile = files("c4.txt", g)
    split = files("split.json", {"N": 2, "h": 3, "gamma": {"0": 1, "2": 1, "1": 2, "3": 2}})
    am = tmp_path / "am.json"
    assert run(capsys, "amalgam", "build", gfile, "--split", split, "--out", am)[0] == EXIT_OK
    code, out, _ = run(capsys, "amalgam", "sbuild", am)
    assert code == EXIT_OK and parse_edge_list(out) == parse_edge_list(g)
    code, out, _ = run(capsys, "amalgam", "restrict", am, "--keep", "0,1")
    assert code == EXIT_OK and sorted(json.loads(out)["ground"]) == ["0", "1"]
    assert run(capsys, "amalgam", "restrict", am, "--keep", "9")[0] == EXIT_USAGE
    code, out, _ = run(capsys, "amalgam", "coupling", am)
    assert code == EXIT_OK and "E" in json.loads(out)["signature"]
    assert run(capsys, "anchor", "amalgam", am)[0] == EXIT_OK
    assert run(capsys, "anchor", "cover", am, "--p", 1)[0] == EXIT_OK
    assert run(capsys, "amalgam", "build", gfile)[0] == EXIT_USAGE


def test_anchor_commands(capsys, tmp_path):
    m = tmp_path / "t.json"
    assert run(capsys, "gen", "bicotree", "--seed", 3, "--max-leaves", 8, "--out", m)[0] == EXIT_OK
    code, out, _ = run(capsys, "anchor", "bicotree", m)
    assert code == EXIT_OK
    an = tmp_path / "an.json"
    an.write_text(out)
    assert run(capsys, "anchor", "verify", m, "--anchor", an)[0] == EXIT_OK
    assert run(capsys, "anchor", "cotree", m)[0] == EXIT_FAIL


def test_posetenc_commands(capsys, files, tmp_path):
    k2 = RelStructure({"Lt": 2, "E": 2, "Gr": 1}, ["u", "v"],
                      {"Lt": [], "E": [("u", "v"), ("v", "u")], "Gr": [("u",), ("v",)]})
    src = files("k2.json", relstructure_to_json(k2))
    enc = tmp_path / "enc.json"
    assert run(capsys, "posetenc", "encode", src, "--out", enc)[0] == EXIT_OK
    code, out, _ = run(capsys, "posetenc", "decode", enc)
    d = json.loads(out)
    assert code == EXIT_OK and len(d["relations"]["E"]) == 2
    assert run(capsys, "posetenc", "probe", enc, "--t", 2)[0] == EXIT_OK
    code, out, _ = run(capsys, "posetenc", "encode", src, "--format", "dot")
    assert out.startswith("graph cover {")


def test_folang_eval(capsys, files):
    s = RelStructure({"E": 2}, ["a", "b", "c"], {"E": [("a", "b"), ("b", "a")]})
    src = files("s.json", relstructure_to_json(s))
    code, out, _ = run(capsys, "folang", "eval", src, "exists x, y. E(x,y)")
    assert (code, out.strip()) == (EXIT_OK, "true")
    code, out, _ = run(capsys, "folang", "eval", src, "E(x,y)", "--bind", "x=a", "--format", "text")
    assert out.split() == ["b"]
    code, out, _ = run(capsys, "folang", "eval", src, "!E(x,x)", "--format", "json")
    assert json.loads(out)["tuples"] == [["a"], ["b"], ["c"]]
    assert run(capsys, "folang", "eval", src, "E(x")[0] == EXIT_USAGE
    assert run(capsys, "folang", "eval", src, "R(x)")[0] == EXIT_USAGE
    assert run(capsys, "folang", "eval", src, "E(x,y)", "--bind", "x=zz")[0] == EXIT_USAGE


def test_sob_output_format(capsys, files):
    text = "a b\n# label a 1\n# label b 2\n"
    code, out, _ = run(capsys, "sob", files("e.txt", text), "--format", "text")
    assert code == EXIT_OK and json.loads(out)[0] == "B"


@pytest.mark.parametrize("name", ["negatives", "posetenc"])
def test_suite_is_thin_shell(capsys, name):
    code, out, _ = run(capsys, "suite", name, "--format", "json", "--seed", 7)
    lib = suites.run_suite(name, 7).to_json()
    got = json.loads(out)
    assert code == (EXIT_OK if lib["ok"] else EXIT_FAIL)
    for d in (got, lib):
        d.pop("seconds")
    assert got == json.loads(json.dumps(lib))


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "lcwmodel.cli", "gen", "cotree", "--format", "text"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.strip()
