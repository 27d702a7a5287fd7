"""Acceptance criteria A1-A7 at their stated sizes and time limits.

Each test records one PASS/FAIL line; the lines are printed together at the
end of the pytest run.
"""

from collections import Counter

import pytest

from helpers import ACCEPTANCE_LINES
from lcwmodel import suites

SEED = 0


def _record(label, rep, limit=None, extra=()):
    fails = [c for c in rep.checks if not c.ok]
    slow = limit is not None and rep.seconds >= limit
    ok = not fails and not slow and all(ok for ok, _ in extra)
    notes = [f"{rep.seconds:.1f}s" + (f" (limit {limit}s)" if limit else "")]
    notes += [f"{c.name}: {c.detail}" for c in rep.checks if c.detail]
    notes += [msg for _, msg in extra]
    line = f"{label} {'PASS' if ok else 'FAIL'}  " + "; ".join(notes)
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert not fails, [f"{c.name}: {c.detail} {c.witness}" for c in fails]
    assert not slow, f"took {rep.seconds:.1f}s, limit {limit}s"
    assert ok, line


@pytest.mark.acceptance
def test_a1_cograph_round_trip():
    rep = suites.cograph_suite(SEED, count=500, max_leaves=10, height=5)
    _record("A1 cograph round trip", rep, 30)


@pytest.mark.acceptance
def test_a2_sob_pipeline():
    rep = suites.sob_suite(SEED, count=500, max_leaves=12, height=4)
    _record("A2 sob pipeline", rep, 120)


@pytest.mark.acceptance
def test_a3_amalgam_pairing():
    rep = suites.amalgam_suite(SEED, count=200, height=3, max_n=3, exhaustive_upto=8)
    _record("A3 amalgam pairing", rep, 120)


@pytest.mark.acceptance
def test_a4_poset_encoding():
    rep = suites.poset_suite(SEED, count=500, max_elements=6)
    _record("A4 poset encoding", rep, 60)


@pytest.mark.acceptance
def test_a5_anchors():
    rep = suites.anchor_suite(SEED, count=100, max_leaves=10, cover_ground=10)
    _record("A5 anchors", rep, 300)


@pytest.mark.acceptance
def test_a6_oracle_coherence():
    rep = suites.oracle_suite(SEED, models=200, formulas=1000)
    _record("A6 oracle coherence", rep, 60)


@pytest.mark.acceptance
def test_a7_negative_controls():
    rep = suites.negative_suite(SEED)
    muts = suites.mutation_checks(SEED)
    by_validator = Counter(v for _, _, v in muts)
    caught = Counter(v for _, ok, v in muts if ok)
    extra = [
        (len(muts) == 20, f"{len(muts)} mutations"),
        (caught == by_validator, ", ".join(f"{v} {caught[v]}/{n}" for v, n in sorted(by_validator.items()))),
        (set(by_validator) == {"verify_split", "injection_problems", "check_cover"}, "three validators"),
    ]
    _record("A7 negative controls", rep, extra=extra)
