import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from systolab import _kernels_py, kernels

compiled = pytest.importorskip("systolab._kernels", reason="compiled extension not built")

PRIMES = np.array([3, 5, 7, 11, 13, 17, 19, 23, 29, 31], dtype=np.int64)


@given(st.integers(-10_000, 10_000), st.lists(st.integers(0, 10**6), min_size=10, max_size=10))
def test_sieve_line_backends_agree(start, raw):
    roots = np.array([r % p for r, p in zip(raw, PRIMES)], dtype=np.int64)
    logs = np.log(PRIMES).astype(np.float32)
    a = compiled.sieve_line(500, start, PRIMES, roots, logs)
    b = _kernels_py.sieve_line(500, start, PRIMES, roots, logs)
    np.testing.assert_allclose(a, b, rtol=1e-6)


def test_sieve_line_brute_force():
    roots = np.array([1, 2, 3, 4, 5, 6, 7, 8, 9, 10], dtype=np.int64) % PRIMES
    logs = np.ones(10, dtype=np.float32)
    acc = kernels.sieve_line(100, -37, PRIMES, roots, logs)
    for i in range(100):
        a = -37 + i
        assert acc[i] == sum(1 for p, r in zip(PRIMES, roots) if a % p == r)


@given(st.lists(st.integers(-10**6, 10**6), min_size=3, max_size=3))
def test_line_roots_backends_agree(coeffs):
    rng = np.random.default_rng(abs(sum(coeffs)))
    base = rng.integers(0, 1000, size=10).astype(np.int64) % PRIMES
    images = (rng.integers(0, 1000, size=(10, 3)) % PRIMES[:, None]).astype(np.int64)
    c = np.array(coeffs, dtype=np.int64)
    a = compiled.line_roots(base, images, c, PRIMES)
    b = _kernels_py.line_roots(base, images, c, PRIMES)
    assert np.array_equal(a, b)


def test_backend_selected():
    assert kernels.BACKEND in ("cython", "python")
