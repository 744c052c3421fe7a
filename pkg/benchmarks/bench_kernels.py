"""Timing comparison of the numba kernels against the pure-numpy fallback.

The kernel path is chosen at import time by ``STABTOP_PURE_NUMPY``, so the
script re-runs itself in a subprocess per variant and prints a table.

Usage:  python benchmarks/bench_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time


def workload(repeat: int) -> dict:
    import numpy as np

    from stabtop import _kernels
    from stabtop.lattice import Charge
    from stabtop.objects import parse_object
    from stabtop import oracle

    timings = {"variant": "numba" if _kernels.USING_NUMBA else "numpy"}

    # warm up (compiles the kernels on the numba path)
    bases, dims = oracle._padded_bases(3, 2)
    rep = oracle.matrix_rep(parse_object("P(1) + R([1:0],1)"), 2)
    _kernels.subrep_scan(bases, dims, bases, dims, *(np.zeros((3, 3), np.int64),) * 2, 2)
    _kernels.rank_mod_p(np.eye(4, dtype=np.int64), 3)

    rng = np.random.default_rng(0)
    mats = [rng.integers(0, 5, size=(12, 12)).astype(np.int64) for _ in range(200)]
    t0 = time.perf_counter()
    for _ in range(repeat):
        for m in mats:
            _kernels.rank_mod_p(m, 5)
    timings["rank_mod_p_ms"] = (time.perf_counter() - t0) * 1000 / repeat

    bases4, dims4 = oracle._padded_bases(4, 3)
    A = rng.integers(0, 3, size=(4, 4)).astype(np.int64)
    B = rng.integers(0, 3, size=(4, 4)).astype(np.int64)
    t0 = time.perf_counter()
    for _ in range(repeat):
        _kernels.subrep_scan(bases4, dims4, bases4, dims4, A, B, 3)
    timings["subrep_scan_f3_d4_ms"] = (time.perf_counter() - t0) * 1000 / repeat

    # end-to-end oracle HN across charges, subrep cache cleared per run
    charges = [
        Charge.of(-1, 0, 0, 1),
        Charge.of(0, 1, -1, 0),
        Charge.of(-3, 2, 1, 5),
        Charge.of("1/2", 3, -2, "1/3"),
    ]
    objs = [parse_object(s) for s in ("P(2)", "I(1) + R([1:1],1)", "R([1:0],2) + P(0)")]
    t0 = time.perf_counter()
    for _ in range(repeat):
        oracle._scan_cache.clear()
        for Z in charges:
            for x in objs:
                oracle.oracle_hn(Z, oracle.matrix_rep(x, 3))
    timings["oracle_hn_f3_ms"] = (time.perf_counter() - t0) * 1000 / repeat
    return timings


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args()

    if args.worker:
        print(json.dumps(workload(args.repeat)))
        return 0

    results = []
    for pure in ("0", "1"):
        env = dict(os.environ, STABTOP_PURE_NUMPY=pure)
        out = subprocess.run(
            [sys.executable, __file__, "--worker", "--repeat", str(args.repeat)],
            env=env,
            capture_output=True,
            text=True,
            check=True,
        )
        results.append(json.loads(out.stdout.strip().splitlines()[-1]))

    keys = [k for k in results[0] if k != "variant"]
    width = max(len(k) for k in keys) + 2
    print(f"{'kernel':<{width}}{results[0]['variant']:>12}{results[1]['variant']:>12}{'speedup':>10}")
    for k in keys:
        fast, slow = results[0][k], results[1][k]
        ratio = slow / fast if fast > 0 else float("inf")
        print(f"{k:<{width}}{fast:>10.2f}ms{slow:>10.2f}ms{ratio:>9.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
