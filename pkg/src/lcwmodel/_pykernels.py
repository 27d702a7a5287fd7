"""Pure-Python kernels; same interface as the compiled ``_ckernels``.

A model is passed flattened in preorder as six ``array('q')`` buffers:
leaf bitmask under each node, parent index (-1 at the root), label id,
C-kind flag, and the children in CSR form (``childptr``, ``child``).

Restricting to a leaf set X and listing one row per restricted node gives
a canonical description of the restricted model up to isomorphisms fixing
X: a node is named by its cluster (mask & X) and its rank in the chain of
nodes sharing that cluster, and a C-node adds one row per restricted child.
"""

from __future__ import annotations

O_FLAG = 1 << 31


def records(flat, x: int) -> list:
    mask, parent, label, isc, cptr, child = flat
    n = len(mask)
    clus = [0] * n
    rank = [0] * n
    rows = []
    for u in range(n):
        c = mask[u] & x
        clus[u] = c
        if not c:
            continue
        p = parent[u]
        r = rank[p] + 1 if p >= 0 and clus[p] == c else 0
        rank[u] = r
        rows.append((c, (r << 32) | label[u], 0))
        if isc[u]:
            kids = [mask[child[k]] & x for k in range(cptr[u], cptr[u + 1])]
            kids = [k for k in kids if k]
            if len(kids) >= 2:
                for pos, k in enumerate(kids):
                    rows.append((c, (r << 32) | O_FLAG | pos, k))
    rows.sort()
    return rows


def same_restriction(fa, fb, x: int) -> bool:
    return records(fa, x) == records(fb, x)


def scan_submasks(fa, fb, q: int) -> tuple[int, int, int]:
    """Compare the two models on every nonempty X within mask ``q``.

    Returns (checked, failures, first failing X or -1).
    """
    checked = fails = 0
    first = -1
    x = q
    while x:
        checked += 1
        if records(fa, x) != records(fb, x):
            fails += 1
            if first < 0:
                first = x
        x = (x - 1) & q
    return checked, fails, first


BACKEND = "python"
