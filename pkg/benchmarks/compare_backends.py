#!/usr/bin/env python3
"""Time the numba kernels against the pure-numpy fallback.

Both implementations are imported directly, bypassing the LAGEXPM_BACKEND
dispatcher, so one process measures both. The numba side is warmed up first
so JIT compilation does not pollute the timings. Each cell reports the best
of --repeats runs and the max relative disagreement between the backends.

Usage: python3 benchmarks/compare_backends.py [--repeats 5] [--count 300]
"""

import argparse
import time

import numpy as np

from lagexpm._kernels import numpy_impl
from lagexpm.generators import SpectrumSampleConfig, sample_spectrum

try:
    from lagexpm._kernels import numba_impl
except ImportError:
    numba_impl = None


def best_of(fn, repeats):
    best = float("inf")
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def rel_diff(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    scale = np.maximum(np.abs(a), np.abs(b))
    scale[scale == 0.0] = 1.0
    return float(np.max(np.abs(a - b) / scale))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--count", type=int, default=300, help="spectrum size")
    args = ap.parse_args()

    if numba_impl is None:
        print("numba is not importable; nothing to compare")
        return 1

    lam = sample_spectrum(SpectrumSampleConfig(count=args.count, seed=7))
    lam_re = np.ascontiguousarray(lam.real)
    lam_im = np.ascontiguousarray(lam.imag)
    tau, alpha, nmax = 8.0, 0.3, 30
    tail_cap = 4 * nmax + 200
    ts = np.linspace(0.01, 20.0, 512)

    cases = [
        ("s_table(N=30, M=%d)" % args.count,
         lambda impl: impl.s_table(nmax, tau, alpha, lam_re, lam_im)),
        ("s_table(N=50, alpha=2.7)",
         lambda impl: impl.s_table(50, tau, 2.7, lam_re, lam_im)),
        ("zeta_general(N=30)",
         lambda impl: impl.zeta_general(nmax, tau, alpha, lam_re, lam_im, tail_cap)),
        ("zeta_alpha0(N=30)",
         lambda impl: impl.zeta_alpha0(nmax, tau, lam_re, lam_im)),
        ("dzeta_alpha0(N=30)",
         lambda impl: impl.dzeta_alpha0(nmax, tau, lam_re, lam_im)),
        ("laguerre_fn_table(N=30, 512 pts)",
         lambda impl: impl.laguerre_fn_table(nmax, tau, alpha, ts)),
    ]

    print("warming up numba JIT ...")
    t0 = time.perf_counter()
    for _, fn in cases:
        fn(numba_impl)
    print("  compile + first call: %.2f s" % (time.perf_counter() - t0))
    print()
    print("%-34s %10s %10s %8s %10s" % ("kernel", "numpy ms", "numba ms", "speedup", "max rel"))
    print("-" * 76)

    for name, fn in cases:
        t_np, out_np = best_of(lambda: fn(numpy_impl), args.repeats)
        t_nb, out_nb = best_of(lambda: fn(numba_impl), args.repeats)
        # kernels return either an array or a tuple of arrays
        if isinstance(out_np, tuple):
            worst = max(rel_diff(a, b) for a, b in zip(out_np, out_nb))
        else:
            worst = rel_diff(out_np, out_nb)
        print("%-34s %10.3f %10.3f %7.1fx %10.2e"
              % (name, 1e3 * t_np, 1e3 * t_nb, t_np / t_nb, worst))

    return 0


if __name__ == "__main__":
    raise SystemExit(main())
