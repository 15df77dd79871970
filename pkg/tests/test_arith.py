import math
import random

from hypothesis import given
from hypothesis import strategies as st

from systolab import arith


def test_small_primes_matches_trial_division():
    expect = [n for n in range(2, 500) if all(n % d for d in range(2, math.isqrt(n) + 1))]
    assert list(arith.small_primes(500)) == expect


def test_first_primes_count_and_last():
    ps = arith.first_primes(200)
    assert len(ps) == 200 and ps[0] == 2 and ps[-1] == 1223


@given(st.integers(min_value=2, max_value=10**12))
def test_factorint_reconstructs(n):
    fac = arith.factorint(n)
    assert math.prod(q**e for q, e in fac.items()) == n
    assert all(arith.is_prime(q) for q in fac)


def test_factorint_semiprime_needs_rho():
    n = 1000003 * 998244353
    assert arith.factorint(n) == {1000003: 1, 998244353: 1}


@given(st.integers(min_value=-10**9, max_value=10**9), st.integers(min_value=-10**9, max_value=10**9))
def test_xgcd_bezout(a, b):
    g, x, y = arith.xgcd(a, b)
    assert g == math.gcd(a, b) and a * x + b * y == g


def test_roots_mod_p_brute_force():
    rng = random.Random(5)
    for _ in range(40):
        p = rng.choice([3, 5, 7, 11, 13, 101])
        f = [rng.randrange(p) for _ in range(3)] + [1]
        expect = sorted(x for x in range(p) if sum(c * x**i for i, c in enumerate(f)) % p == 0)
        assert sorted(arith.roots_mod_p(f, p)) == expect


def test_factor_degrees_of_cyclotomic_cubic():
    # x^3 + x^2 - 2x - 1 splits mod 13 (13 = 1 mod 7) and is inert mod 2
    f = [-1, -2, 1, 1]
    assert sorted(arith.factor_mod_p_degrees(f, 13)) == [(1, 1), (1, 1), (1, 1)]
    assert arith.factor_mod_p_degrees(f, 2) == [(3, 1)]
