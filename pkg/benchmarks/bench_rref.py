"""Compare the compiled and numpy row-reduction kernels.

    python3 benchmarks/bench_rref.py [--sizes 16 32 64 128] [--repeat 5]

Both kernels run on identical random matrices modulo the default prime; the
reduced forms are checked for equality before timings are reported.
"""

from __future__ import annotations

import argparse
import json
import time

import numpy as np

from modvar.exactlin import DEFAULT_PRIME, KERNEL
from modvar.exactlin import kernel


def _time(fn, mat, p, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        work = mat.copy()
        t0 = time.perf_counter()
        piv = fn(work, p)
        best = min(best, time.perf_counter() - t0)
        out = (work, list(piv))
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[16, 32, 64, 128, 256])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)
    rng = np.random.default_rng(args.seed)
    p = DEFAULT_PRIME
    rows = []
    for n in args.sizes:
        # rank-deficient square input exercises pivot search
        a = rng.integers(0, p, size=(n, n // 2), dtype=np.int64)
        b = rng.integers(0, p, size=(n // 2, n), dtype=np.int64)
        mat = np.ascontiguousarray((a @ (b % 2)) % p)
        t_py, r_py = _time(kernel.python_rref_modp, mat, p, args.repeat)
        row = {"n": n, "python_s": t_py}
        if KERNEL == "cython":
            t_c, r_c = _time(kernel.rref_modp, mat, p, args.repeat)
            if not (np.array_equal(r_py[0], r_c[0]) and r_py[1] == r_c[1]):
                raise SystemExit(f"kernels disagree at n={n}")
            row.update({"cython_s": t_c, "speedup": t_py / t_c})
        rows.append(row)
    if args.json:
        print(json.dumps({"kernel": KERNEL, "results": rows}, indent=2))
        return
    print(f"active kernel: {KERNEL}")
    print(f"{'n':>6} {'numpy (s)':>12} {'cython (s)':>12} {'speedup':>8}")
    for r in rows:
        c = f"{r['cython_s']:12.5f} {r['speedup']:8.1f}" if "cython_s" in r else f"{'-':>12} {'-':>8}"
        print(f"{r['n']:>6} {r['python_s']:12.5f} {c}")


if __name__ == "__main__":
    main()
