"""Compare the compiled and pure-Python restriction kernels.

Each case flattens a random clean cotree and the model obtained by
restricting it to all its leaves, then scans every nonempty leaf subset
with both backends and checks they agree.

    python3 benchmarks/bench_kernels.py [--sizes 8 10 12 14] [--seed 0]
"""

import argparse
import time

from lcwmodel import _pykernels
from lcwmodel.gen import gen_clean_bicotree, gen_clean_cotree
from lcwmodel.kernels import flatten
from lcwmodel.tmodel import restrict

try:
    from lcwmodel import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def _case(kind, seed, leaves):
    gen = gen_clean_cotree if kind == "cotree" else gen_clean_bicotree
    # keep drawing until the instance has exactly the requested size
    for s in range(seed, seed + 10_000):
        t = gen(s, leaves, 4)
        if len(t.ground) == leaves:
            break
    other = restrict(t, t.ground)
    index = {v: k for k, v in enumerate(sorted(t.ground, key=str))}
    labels = {}
    return flatten(t, index, labels), flatten(other, index, labels), (1 << leaves) - 1


def _time(fn, *args, repeat=3):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[8, 10, 12, 14])
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled kernels not built; only the Python backend is available")
    print(f"{'model':<9}{'leaves':>7}{'subsets':>10}{'python s':>11}{'cython s':>11}{'speedup':>9}")
    for kind in ("cotree", "bicotree"):
        for n in args.sizes:
            fa, fb, q = _case(kind, args.seed, n)
            tp, rp = _time(_pykernels.scan_submasks, fa, fb, q, repeat=1)
            if _ckernels is not None:
                tc, rc = _time(_ckernels.scan_submasks, fa, fb, q)
                assert rc == rp, (rc, rp)
                print(f"{kind:<9}{n:>7}{rp[0]:>10}{tp:>11.4f}{tc:>11.4f}{tp / tc:>8.1f}x")
            else:
                print(f"{kind:<9}{n:>7}{rp[0]:>10}{tp:>11.4f}{'-':>11}{'-':>9}")


if __name__ == "__main__":
    main()
