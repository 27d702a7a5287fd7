"""Seed-deterministic random instances: cotrees, bicotrees, T-models."""

from __future__ import annotations

import random
from itertools import count

from .structure import bipartite_complement, is_connected
from .tmodel import A, C, TModel, from_nested, rename_internal


class InfeasibleBounds(ValueError):
    pass


def _rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def _sizes(rng: random.Random, total: int, k: int) -> list[int]:
    """Random composition of ``total`` into ``k`` positive parts."""
    cuts = sorted(rng.sample(range(1, total), k - 1))
    return [b - a for a, b in zip([0] + cuts, cuts + [total])]


# --------------------------------------------------------------------------
# cotrees


def gen_clean_cotree(seed, max_leaves: int, max_height: int) -> TModel:
    """A clean cotree (alternating U/J, at least two children everywhere)."""
    if max_leaves < 1 or max_height < 1:
        raise InfeasibleBounds("bounds must be >= 1")
    rng = _rng(seed)
    ids = count()
    total = rng.randint(1, max_leaves) if max_height > 1 else 1

    def make(size, h, avoid):
        if size == 1 or h == 1:
            return next(ids)
        label = "J" if avoid == "U" else "U" if avoid == "J" else rng.choice("UJ")
        k = size if h == 2 else rng.randint(2, min(size, 4))
        return (label, [make(s, h - 1, label) for s in _sizes(rng, size, k)])

    return rename_internal(from_nested(make(total, max_height, None), 1))


# --------------------------------------------------------------------------
# bicotrees


def _bip_ok(spec, gamma, label) -> bool:
    from .bicotree import bipartite_of

    if not isinstance(spec, tuple):
        return label != "O"
    m = from_nested(spec, 2, {v: gamma[v] for v in _leaves(spec)})
    if label == "O":
        return len(set(m.gamma.values())) == 2
    b = bipartite_of(m)
    if label == "U":
        return is_connected(b.graph)
    return is_connected(bipartite_complement(b).graph)


def _leaves(spec) -> list:
    if isinstance(spec, tuple):
        return [v for c in spec[1] for v in _leaves(c)]
    return [spec]


def gen_clean_bicotree(seed, max_leaves: int, max_height: int, tries: int = 25) -> TModel:
    """A clean bicotree, built top-down; children failing the clean condition
    of their parent are redrawn (a two-leaf fallback always qualifies)."""
    if max_leaves < 1 or max_height < 1:
        raise InfeasibleBounds("bounds must be >= 1")
    rng = _rng(seed)
    ids = count()
    gamma: dict = {}

    def leaf():
        v = next(ids)
        gamma[v] = rng.choice((1, 2))
        return v

    def pair(label):
        a, b = next(ids), next(ids)
        gamma[a], gamma[b] = 1, 2
        # a cross edge is connected; a cross non-edge is co-connected
        return ("U" if label == "B" else "B", [a, b])

    def make(size, h):
        if size == 1 or h == 1:
            return leaf()
        labels = ["U", "B"] + (["O"] if size >= 4 and h >= 3 else [])
        label = rng.choice(labels)
        k = rng.randint(2, min(size // 2 if label == "O" else size, 4))
        kids = []
        for s in _sizes(rng, size, k) if label != "O" else _sizes_min(rng, size, k, 2):
            for _ in range(tries):
                c = make(s, h - 1)
                if _bip_ok(c, gamma, label):
                    break
            else:
                c = pair(label) if h >= 3 or label == "O" else leaf()
            kids.append(c)
        return (label, kids)

    total = rng.randint(1, max_leaves)
    spec = make(total, max_height)
    return rename_internal(from_nested(spec, 2, {v: gamma[v] for v in _leaves(spec)}))


def _sizes_min(rng, total, k, lo) -> list[int]:
    return [s + lo - 1 for s in _sizes(rng, total - k * (lo - 1), k)]


def gen_bicotree(seed, max_leaves: int, max_height: int) -> TModel:
    """A valid but generally non-clean bicotree (unary nodes allowed)."""
    if max_leaves < 1 or max_height < 1:
        raise InfeasibleBounds("bounds must be >= 1")
    rng = _rng(seed)
    ids = count()
    gamma: dict = {}

    def make(size, h):
        if h == 1 or (size == 1 and rng.random() < 0.6):
            v = next(ids)
            gamma[v] = rng.choice((1, 2))
            return v
        k = rng.randint(1, min(size, 4)) if h > 2 else size
        return (rng.choice("UBO"), [make(s, h - 1) for s in _sizes(rng, size, k)])

    total = rng.randint(1, max_leaves) if max_height > 1 else 1
    spec = make(total, max_height)
    return rename_internal(from_nested(spec, 2, {v: gamma[v] for v in _leaves(spec)}))


# --------------------------------------------------------------------------
# T-models


def gen_tmodel(seed, n: int, max_leaves: int, max_height: int, p_true: float = 0.5) -> TModel:
    """Random T-model of complexity (n, max_height): A/C kinds and tables drawn
    uniformly, tables symmetric at A-nodes."""
    if n < 1 or max_leaves < 1 or max_height < 1:
        raise InfeasibleBounds("bounds must be >= 1")
    rng = _rng(seed)
    ids = count()
    gamma: dict = {}

    def table(kind):
        t = [[rng.random() < p_true for _ in range(n)] for _ in range(n)]
        if kind == A:
            for i in range(n):
                for j in range(i):
                    t[i][j] = t[j][i]
        return tuple(tuple(r) for r in t)

    def make(size, h):
        if h == 1 or size == 1:
            v = next(ids)
            gamma[v] = rng.randint(1, n)
            return v
        kind = rng.choice((A, C))
        k = rng.randint(2, min(size, 4)) if h > 2 else size
        return ((kind, table(kind)), [make(s, h - 1) for s in _sizes(rng, size, k)])

    total = rng.randint(1, max_leaves) if max_height > 1 else 1
    spec = make(total, max_height)
    return rename_internal(from_nested(spec, n, {v: gamma[v] for v in _leaves(spec)}))


__all__ = ["InfeasibleBounds", "gen_bicotree", "gen_clean_bicotree", "gen_clean_cotree", "gen_tmodel"]
