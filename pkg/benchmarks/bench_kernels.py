"""Compare the compiled and numpy kernel backends.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]

Prints per-kernel timings for synthetic sieve data and the end-to-end time of
a unit-group computation under each backend (run in a subprocess so the
backend choice is made fresh at import).
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from systolab import _kernels_py

try:
    from systolab import _kernels
except ImportError:
    _kernels = None

END_TO_END = (
    "import time;from systolab.poly import IntPoly;from systolab.order import maximal_order;"
    "from systolab.units import unit_group;from systolab import kernels;"
    "p=1223;o=maximal_order(IntPoly((p,p*p-2,-2*p,1)));t=time.perf_counter();unit_group(o);"
    "print(kernels.BACKEND, f'{time.perf_counter()-t:.3f}')"
)


def synthetic(n_primes: int = 400, length: int = 4000, seed: int = 0):
    rng = np.random.default_rng(seed)
    primes = np.array(sorted(rng.choice(np.arange(3, 20000), n_primes, replace=False)), dtype=np.int64)
    roots = (rng.integers(0, 1 << 30, n_primes) % primes).astype(np.int64)
    logs = np.log(primes.astype(np.float64)).astype(np.float32)
    images = (rng.integers(0, 1 << 30, (n_primes, 2)) % primes[:, None]).astype(np.int64)
    return primes, roots, logs, images, length


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=200)
    args = ap.parse_args()
    primes, roots, logs, images, length = synthetic()
    base = np.zeros_like(primes)
    coeffs = np.array([3, -7], dtype=np.int64)
    impls = [("python", _kernels_py)] + ([("cython", _kernels)] if _kernels else [])
    ref_s = _kernels_py.sieve_line(length, -length // 2, primes, roots, logs)
    ref_r = _kernels_py.line_roots(base, images, coeffs, primes)
    print(f"{'backend':<8}{'sieve_line us':>15}{'line_roots us':>15}  agree")
    for name, mod in impls:
        ts = timeit.timeit(lambda: mod.sieve_line(length, -length // 2, primes, roots, logs), number=args.repeat)
        tr = timeit.timeit(lambda: mod.line_roots(base, images, coeffs, primes), number=args.repeat)
        same = np.allclose(mod.sieve_line(length, -length // 2, primes, roots, logs), ref_s) and np.array_equal(
            mod.line_roots(base, images, coeffs, primes), ref_r
        )
        print(f"{name:<8}{1e6 * ts / args.repeat:>15.1f}{1e6 * tr / args.repeat:>15.1f}  {same}")
    print("end-to-end unit group of the p = 1223 centralizer field (seconds):")
    for force in ("1", ""):
        env = dict(os.environ)
        env.pop("SYSTOLAB_PURE_PYTHON", None)
        if force:
            env["SYSTOLAB_PURE_PYTHON"] = force
        out = subprocess.run([sys.executable, "-c", END_TO_END], env=env, capture_output=True, text=True, check=True)
        print("  " + out.stdout.strip())


if __name__ == "__main__":
    main()
