#!/usr/bin/env python3
"""Compare the compiled kernels with the numpy fallback.

Times full scans (no early exit) of the heap axioms on GH(I_3) and of
associativity on I_3 and I_4, for each available backend and thread count.

Usage:
    python3 benchmarks/bench_kernels.py [--repeat 3] [--threads 1 4]
"""
from __future__ import annotations

import argparse
import timeit

from heapmorita import _accel
from heapmorita.finsemi import symmetric_inverse_monoid
from heapmorita.heap import gh_of


def cases():
    I3 = symmetric_inverse_monoid(3)[0]
    I4 = symmetric_inverse_monoid(4)[0]
    X = gh_of(I3)
    out = [(f"assoc I_3 (n={I3.n})", lambda b, t: _accel.assoc_first(I3.mul, threads=t, backend=b))]
    out.append((f"assoc I_4 (n={I4.n})", lambda b, t: _accel.assoc_first(I4.mul, threads=t, backend=b)))
    for axiom in ("A1", "A2", "A3", "A4"):
        out.append(
            (f"{axiom} GH(I_3) (n={X.n})", lambda b, t, ax=axiom: _accel.heap_first(X.ter, ax, threads=t, backend=b))
        )
    return out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--threads", type=int, nargs="+", default=[1, 4])
    args = ap.parse_args(argv)

    backends = _accel.available_backends()
    print(f"backends: {', '.join(backends)} (default {_accel.BACKEND})")
    header = f"{'case':<24} {'backend':<8} {'threads':>7} {'best s':>10}"
    print(header)
    print("-" * len(header))
    for name, fn in cases():
        best = {}
        for backend in backends:
            for t in args.threads:
                result = fn(backend, t)
                assert result == -1, f"{name} failed on {backend}"
                secs = min(timeit.repeat(lambda: fn(backend, t), number=1, repeat=args.repeat))
                best[backend, t] = secs
                print(f"{name:<24} {backend:<8} {t:>7} {secs:>10.4f}")
        if "cython" in backends:
            ratio = min(v for (b, _), v in best.items() if b == "numpy") / min(
                v for (b, _), v in best.items() if b == "cython"
            )
            print(f"{'':<24} speedup {ratio:.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
