"""Kernel backend chosen at import: compiled if available, else pure Python.

Set ``LCWMODEL_PURE=1`` to force the pure-Python backend.
"""

from __future__ import annotations

import os
from array import array

from . import _pykernels

if os.environ.get("LCWMODEL_PURE"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]
    except ImportError:  # extension not built
        _impl = _pykernels

BACKEND: str = _impl.BACKEND
records = _impl.records
same_restriction = _impl.same_restriction
scan_submasks = _impl.scan_submasks

MAX_BITS = 62


def flatten(m, index: dict, labels: dict) -> tuple:
    """Flat preorder form of a model for the kernels.

    ``index`` maps leaves to bit positions (shared by the models being
    compared); ``labels`` interns node labels and is extended in place.
    """
    from .tmodel import LEAF, C, _label

    t = m.tree
    if t.root is None:
        return (array("Q"), array("q"), array("q"), array("q"), array("q", [0]), array("q"))
    order = t.preorder()
    pos = {u: k for k, u in enumerate(order)}
    masks = {}
    for u in reversed(order):
        if t.kind[u] == LEAF:
            b = index[u]
            if b >= MAX_BITS:
                raise ValueError(f"kernels handle at most {MAX_BITS} leaves")
            masks[u] = 1 << b
        else:
            acc = 0
            for c in t.children[u]:
                acc |= masks[c]
            masks[u] = acc
    mask = array("Q", (masks[u] for u in order))
    parent = array("q", (-1 if t.parent[u] == u else pos[t.parent[u]] for u in order))
    label = array("q", (labels.setdefault(_label(m, u), len(labels)) for u in order))
    isc = array("q", (1 if t.kind[u] == C else 0 for u in order))
    cptr, child = array("q", [0]), array("q")
    for u in order:
        child.extend(pos[c] for c in t.children.get(u, ()))
        cptr.append(len(child))
    return (mask, parent, label, isc, cptr, child)


__all__ = ["BACKEND", "MAX_BITS", "flatten", "records", "same_restriction", "scan_submasks"]
