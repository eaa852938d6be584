"""Time the numba kernels against the numpy fallback.

Usage::

    python3 benchmarks/bench_kernels.py [--rows 200000] [--classes 2,4,8] [--repeat 5]

Each kernel runs on the same smoothed Dirichlet rows; the best of
``--repeat`` runs is reported after one warm-up call (which also triggers
JIT compilation). A second mode, ``--end-to-end``, times a full property
check under each backend in a subprocess, since the backend is fixed at
import time by ``QUANTAXIOMS_DISABLE_NUMBA``.
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from quantaxioms import _kernels
from quantaxioms.distributions import smooth_values


def bench_kernels(rows: int, classes: list[int], repeat: int) -> None:
    if not _kernels.NUMBA_KERNELS:
        print("numba unavailable or disabled; only the numpy path exists")
        return
    rng = np.random.default_rng(42)
    print(f"{'kernel':<12} {'n':>3} {'numpy ms':>10} {'numba ms':>10} {'speedup':>8} {'max |diff|':>11}")
    for n in classes:
        P = smooth_values(rng.dirichlet(np.ones(n), size=rows), 5e-7)
        Q = smooth_values(rng.dirichlet(np.ones(n), size=rows), 5e-7)
        for name, np_fn in _kernels.NUMPY_KERNELS.items():
            nb_fn = _kernels.NUMBA_KERNELS[name]
            diff = float(np.max(np.abs(np_fn(P, Q) - nb_fn(P, Q))))
            t_np = min(timeit.repeat(lambda: np_fn(P, Q), number=1, repeat=repeat))
            t_nb = min(timeit.repeat(lambda: nb_fn(P, Q), number=1, repeat=repeat))
            print(f"{name:<12} {n:>3} {t_np * 1e3:>10.2f} {t_nb * 1e3:>10.2f} {t_np / t_nb:>7.1f}x {diff:>11.1e}")


_SNIPPET = """
import time
from quantaxioms.axioms import check_property
from quantaxioms import _kernels
check_property("KLD", "MON", 512, seed=99)  # warm-up and JIT
start = time.perf_counter()
for m in ("AE", "RAE", "KLD", "PD"):
    check_property(m, "MON", {budget}, seed=1)
print(_kernels.BACKEND, time.perf_counter() - start)
"""


def bench_end_to_end(budget: int) -> None:
    for disabled in ("0", "1"):
        env = dict(os.environ, QUANTAXIOMS_DISABLE_NUMBA=disabled)
        out = subprocess.run(
            [sys.executable, "-c", _SNIPPET.format(budget=budget)],
            env=env, capture_output=True, text=True, check=True,
        ).stdout.split()
        print(f"MON check, 4 measures, budget {budget}: backend {out[0]:<6} {float(out[1]):.2f} s")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--rows", type=int, default=200_000)
    parser.add_argument("--classes", default="2,4,8")
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--end-to-end", action="store_true", help="also time a full property check per backend")
    parser.add_argument("--budget", type=int, default=20_000)
    args = parser.parse_args()
    bench_kernels(args.rows, [int(c) for c in args.classes.split(",")], args.repeat)
    if args.end_to_end:
        print()
        bench_end_to_end(args.budget)


if __name__ == "__main__":
    main()
