"""Compare the compiled kernels with the pure-Python fallback.

Usage::

    python benchmarks/bench_kernels.py [--repeat 5] [--n 4]

Times three workloads on both implementations and checks that they return
identical results:

* ``field``: 20 000 evaluations of the flow field;
* ``segment``: one integration segment from 50 random starts;
* ``batch``: a 20-trial seeded batch through ``run_trial``.
"""
from __future__ import annotations

import argparse
import importlib
import os
import subprocess
import sys
import time

from ricci_stiefel import _fallback
from ricci_stiefel.rng import SplitMix64


def _starts(k: int, seed: int = 1) -> list:
    rng = SplitMix64(seed)
    return [tuple(rng.log_uniform(1e-2, 1e2) for _ in range(3)) for _ in range(k)]


def bench_field(mod, n: int) -> tuple:
    pts = _starts(20_000)
    t0 = time.perf_counter()
    out = [mod.field(n, *x) for x in pts]
    return time.perf_counter() - t0, out


def bench_segment(mod, n: int) -> tuple:
    outs = []
    t0 = time.perf_counter()
    for x in _starts(50, 2):
        y = mod.lift(*x)
        h = mod.initial_step(n, 1.0, y, 1e-9, 1e-12, 50.0)
        st, ts, ys, *_ = mod.run_segment(n, 1.0, 0.0, y, h, 50.0, 1e-9, 1e-12, 100_000, 1e15)
        outs.append((st, len(ts), tuple(ys[-1])))
    return time.perf_counter() - t0, outs


def bench_batch(pure: bool, n: int) -> float:
    # a subprocess so the kernel choice is made fresh at import
    code = ("import time;from ricci_stiefel.integrate import run_batch,IntegratorConfig;"
            f"t=time.perf_counter();run_batch({n},20,7,IntegratorConfig(t_max=200.0),workers=1);"
            "print(time.perf_counter()-t)")
    env = dict(os.environ, RICCI_STIEFEL_PURE="1" if pure else "0")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                         check=True)
    return float(out.stdout.strip())


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--n", type=int, default=4)
    args = ap.parse_args()
    try:
        compiled = importlib.import_module("ricci_stiefel._kernels")
    except ImportError:
        print("compiled kernels not built; only the fallback is available")
        return 1
    rows = []
    for name, fn in (("field", bench_field), ("segment", bench_segment)):
        tp = tc = float("inf")
        for _ in range(args.repeat):
            dp, op = fn(_fallback, args.n)
            dc, oc = fn(compiled, args.n)
            tp, tc = min(tp, dp), min(tc, dc)
        rows.append((name, tp, tc, "yes" if op == oc else "NO"))
    tp = min(bench_batch(True, args.n) for _ in range(args.repeat))
    tc = min(bench_batch(False, args.n) for _ in range(args.repeat))
    rows.append(("batch", tp, tc, "-"))
    print(f"n = {args.n}, best of {args.repeat}")
    print(f"{'workload':<10}{'python [s]':>12}{'cython [s]':>12}{'speedup':>10}{'identical':>11}")
    for name, a, b, same in rows:
        print(f"{name:<10}{a:>12.4f}{b:>12.4f}{a / b:>10.1f}{same:>11}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
