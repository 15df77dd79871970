"""Pure-Python/numpy implementations of the hot kernels.

Same signatures as the compiled ``_kernels`` extension; ``systolab.kernels``
picks whichever is available.
"""

from __future__ import annotations

import numpy as np


def sieve_line(length: int, start: int, primes: np.ndarray, roots: np.ndarray, logs: np.ndarray) -> np.ndarray:
    """Accumulate log(ell) at every a in [start, start+length) with a = root mod ell."""
    acc = np.zeros(length, dtype=np.float32)
    for ell, r, lg in zip(primes.tolist(), roots.tolist(), logs.tolist()):
        first = (r - start) % ell
        acc[first::ell] += lg
    return acc


def line_roots(base: np.ndarray, images: np.ndarray, coeffs: np.ndarray, primes: np.ndarray) -> np.ndarray:
    """Root a0 = -(base + sum_i coeffs[i] * images[:, i]) mod ell for each prime ideal."""
    acc = base.astype(np.int64).copy()
    for i, c in enumerate(coeffs.tolist()):
        acc = (acc + c * images[:, i]) % primes
    return (-acc) % primes

