# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels for the relation sieve.

Same signatures and results as ``systolab._kernels_py``.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def sieve_line(Py_ssize_t length, long long start, cnp.int64_t[::1] primes, cnp.int64_t[::1] roots, cnp.float32_t[::1] logs):
    """Accumulate log(ell) at every a in [start, start+length) with a = root mod ell."""
    acc_arr = np.zeros(length, dtype=np.float32)
    cdef cnp.float32_t[::1] acc = acc_arr
    cdef Py_ssize_t k, i, n = primes.shape[0]
    cdef long long ell, first
    cdef cnp.float32_t lg
    for k in range(n):
        ell = primes[k]
        lg = logs[k]
        first = (roots[k] - start) % ell
        if first < 0:
            first += ell
        i = first
        while i < length:
            acc[i] += lg
            i += ell
    return acc_arr


def line_roots(cnp.int64_t[::1] base, cnp.int64_t[:, :] images, cnp.int64_t[::1] coeffs, cnp.int64_t[::1] primes):
    """Root a0 = -(base + sum_i coeffs[i] * images[:, i]) mod ell for each prime ideal."""
    cdef Py_ssize_t n = primes.shape[0], m = coeffs.shape[0], k, i
    out_arr = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[::1] out = out_arr
    cdef long long ell, acc
    for k in range(n):
        ell = primes[k]
        acc = base[k] % ell
        for i in range(m):
            acc = (acc + (coeffs[i] % ell) * images[k, i]) % ell
        if acc < 0:
            acc += ell
        out[k] = (ell - acc) % ell
    return out_arr
