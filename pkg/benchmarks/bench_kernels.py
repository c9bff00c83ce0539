"""Compiled vs pure-Python kernel timings.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Both kernels run the same problems; node counts must match, so the ratio is
a per-node speedup.
"""

import argparse
import time

import numpy as np

from zerosum import kernels
from zerosum.groups import make_group
from zerosum.search import _problem, spec_for

PROBLEMS = [
    ("2,4", "egz"),
    ("3,3", "egz"),
    ("2,2,4", "eta"),
    ("5,5", "eta"),
    ("4,4", "egz"),
    ("2,2,2,2", "davenport"),
]


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_search(impl, G, name, repeat):
    L = spec_for(G, name)
    prob = _problem(G, L, 4 * G.exponent + 8, True, 2)
    args = (prob["sub_table"], prob["lmask"], prob["cap"], prob["allowed"])
    return _time(lambda: impl.avoider_search(*args, canon=prob["canon"], sigma_bound=prob["sigma_bound"]), repeat)


def bench_dp(impl, G, repeat, rows=2000, k=12):
    seqs = np.sort(np.random.default_rng(0).integers(0, G.order, size=(rows, k)), axis=1)
    return _time(lambda: impl.zero_sum_lengths_batch(G.sub_table, seqs), repeat)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    py = kernels.get("python")
    try:
        cy = kernels.get("cython")
    except ImportError:
        raise SystemExit("compiled extension not built; run `python3 setup.py build_ext --inplace`")

    print(f"{'problem':<22}{'nodes':>10}{'cython s':>12}{'python s':>12}{'speedup':>10}")
    for gs, name in PROBLEMS:
        G = make_group([int(x) for x in gs.split(",")])
        tc, rc = bench_search(cy, G, name, args.repeat)
        tp, rp = bench_search(py, G, name, args.repeat)
        assert rc["nodes"] == rp["nodes"] and rc["best_len"] == rp["best_len"]
        print(f"{gs + ' ' + name:<22}{rc['nodes']:>10}{tc:>12.4f}{tp:>12.4f}{tp / tc:>9.1f}x")
    for gs in ("2,4", "4,4", "2,8"):
        G = make_group([int(x) for x in gs.split(",")])
        tc, oc = bench_dp(cy, G, args.repeat)
        tp, op = bench_dp(py, G, args.repeat)
        assert list(oc) == list(op)
        print(f"{gs + ' dp batch':<22}{2000:>10}{tc:>12.4f}{tp:>12.4f}{tp / tc:>9.1f}x")


if __name__ == "__main__":
    main()
