"""Elementary integer arithmetic: primality, factorization, modular polynomials."""

from __future__ import annotations

import math
import random
from functools import lru_cache

TRIAL_LIMIT = 10**6
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


class FactorizationError(ArithmeticError):
    """Raised when a number cannot be fully factored within the effort budget.

    The partial factorization found so far is kept in ``partial`` and the
    unfactored composite cofactor in ``cofactor``.
    """

    def __init__(self, n: int, partial: dict[int, int], cofactor: int):
        super().__init__(f"could not factor {cofactor} (from {n}) within budget")
        self.n = n
        self.partial = partial
        self.cofactor = cofactor


@lru_cache(maxsize=8)
def small_primes(limit: int) -> tuple[int, ...]:
    """All primes < limit by the sieve of Eratosthenes."""
    if limit < 3:
        return ()
    sieve = bytearray([1]) * limit
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(limit - 1) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, limit, i)))
    return tuple(i for i in range(limit) if sieve[i])


def first_primes(count: int) -> list[int]:
    """The first ``count`` primes."""
    if count <= 0:
        return []
    limit = 16
    if count > 6:
        c = float(count)
        limit = int(c * (math.log(c) + math.log(math.log(c)))) + 16
    while True:
        ps = small_primes(limit)
        if len(ps) >= count:
            return list(ps[:count])
        limit *= 2


def _miller_rabin(n: int, a: int, d: int, s: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int, rounds: int = 24) -> bool:
    """Miller-Rabin test.

    Deterministic below 3.3e24 (fixed prime bases); above that the fixed bases
    are supplemented by ``rounds`` random bases.
    """
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if not all(_miller_rabin(n, a, d, s) for a in _MR_BASES):
        return False
    if n < 3_317_044_064_679_887_385_961_981:
        return True
    rng = random.Random(n)
    return all(_miller_rabin(n, rng.randrange(2, n - 1), d, s) for _ in range(rounds))


def _pollard_brent(n: int, max_iter: int, seed: int) -> int | None:
    if n % 2 == 0:
        return 2
    rng = random.Random(seed)
    y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
    g = r = q = 1
    x = ys = y
    iters = 0
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = math.gcd(q, n)
            k += m
        r *= 2
        iters += r
        if iters > max_iter:
            return None
    if g == n:
        while True:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
            if g > 1:
                break
    return g if g != n else None


def factorint(n: int, effort: int = 2_000_000) -> dict[int, int]:
    """Factor ``|n|`` into primes.

    Trial division up to ``TRIAL_LIMIT``, then Pollard-Brent rho. ``effort``
    caps the total number of rho iterations; exceeding it raises
    :class:`FactorizationError`.
    """
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    out: dict[int, int] = {}
    for q in small_primes(TRIAL_LIMIT):
        if q * q > n:
            break
        if n % q == 0:
            e = 0
            while n % q == 0:
                n //= q
                e += 1
            out[q] = e
    if n == 1:
        return out
    stack = [n]
    spent = 0
    seed = 1
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if m < TRIAL_LIMIT**2 or is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        r = math.isqrt(m)
        if r * r == m:
            stack.extend((r, r))
            continue
        budget = max(effort - spent, 0)
        d = _pollard_brent(m, budget, seed)
        seed += 1
        spent += budget if d is None else min(budget, 4 * math.isqrt(math.isqrt(m)) + 1)
        if d is None:
            raise FactorizationError(n, out, m)
        stack.extend((d, m // d))
    return dict(sorted(out.items()))


def divisors(fac: dict[int, int]) -> list[int]:
    divs = [1]
    for q, e in fac.items():
        divs = [d * q**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


# --- polynomials over F_p, coefficient lists low-to-high -----------------


def _trim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def pmod_divmod(f: list[int], g: list[int], p: int) -> tuple[list[int], list[int]]:
    f = [c % p for c in f]
    g = _trim([c % p for c in g])
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    inv = pow(g[-1], -1, p)
    q = [0] * max(len(f) - len(g) + 1, 1)
    f = _trim(f)
    while len(f) >= len(g):
        c = f[-1] * inv % p
        k = len(f) - len(g)
        q[k] = c
        for i, gc in enumerate(g):
            f[k + i] = (f[k + i] - c * gc) % p
        _trim(f)
    return _trim(q), f


def pmod_mul(f: list[int], g: list[int], p: int) -> list[int]:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return _trim(out)


def pmod_gcd(f: list[int], g: list[int], p: int) -> list[int]:
    f = _trim([c % p for c in f])
    g = _trim([c % p for c in g])
    while g:
        f, g = g, pmod_divmod(f, g, p)[1]
    if f:
        inv = pow(f[-1], -1, p)
        f = [c * inv % p for c in f]
    return f


def pmod_powmod(base: list[int], e: int, mod: list[int], p: int) -> list[int]:
    result = [1]
    base = pmod_divmod(base, mod, p)[1]
    while e:
        if e & 1:
            result = pmod_divmod(pmod_mul(result, base, p), mod, p)[1]
        base = pmod_divmod(pmod_mul(base, base, p), mod, p)[1]
        e >>= 1
    return result


def roots_mod_p(f: list[int], p: int, rng: random.Random | None = None) -> list[int]:
    """Distinct roots in F_p of an integer polynomial (coefficients low-to-high)."""
    f = _trim([c % p for c in f])
    if len(f) <= 1:
        return []
    if p < 64:
        return [x for x in range(p) if sum(c * pow(x, i, p) for i, c in enumerate(f)) % p == 0]
    # split off the product of linear factors: gcd(f, x^p - x)
    xp = pmod_powmod([0, 1], p, f, p)
    h = pmod_gcd(f, _trim([(c - d) % p for c, d in zip(xp + [0] * 2, [0, 1] + [0] * len(xp))]), p)
    rng = rng or random.Random(p)
    return sorted(_equal_degree_roots(h, p, rng))


def _equal_degree_roots(h: list[int], p: int, rng: random.Random) -> list[int]:
    deg = len(h) - 1
    if deg <= 0:
        return []
    if deg == 1:
        return [(-h[0] * pow(h[1], -1, p)) % p]
    while True:
        a = rng.randrange(p)
        t = pmod_powmod([a, 1], (p - 1) // 2, h, p) or [0]
        t[0] = (t[0] - 1) % p
        d = pmod_gcd(h, _trim(t), p)
        if 0 < len(d) - 1 < deg:
            return _equal_degree_roots(d, p, rng) + _equal_degree_roots(pmod_divmod(h, d, p)[0], p, rng)


def factor_mod_p_degrees(f: list[int], p: int) -> list[tuple[int, int]]:
    """Distinct-degree factorization pattern of a monic polynomial mod p.

    Returns a list of (degree, multiplicity) for the irreducible factors,
    computed by squarefree decomposition then distinct-degree splitting.
    Intended for small degree (<= 4).
    """
    f = _trim([c % p for c in f])
    out: list[tuple[int, int]] = []
    for g, mult in _squarefree_parts(f, p):
        rest = g
        xpow = [0, 1]
        d = 0
        while len(rest) - 1 > 0:
            d += 1
            if 2 * d > len(rest) - 1:
                out.append((len(rest) - 1, mult))
                break
            xpow = pmod_powmod(xpow, p, rest, p)
            diff = _trim([(c - e) % p for c, e in zip(xpow + [0] * 2, [0, 1] + [0] * len(xpow))])
            h = pmod_gcd(rest, diff, p)
            k = len(h) - 1
            for _ in range(k // d):
                out.append((d, mult))
            if k:
                rest = pmod_divmod(rest, h, p)[0]
                xpow = pmod_divmod(xpow, rest, p)[1]
    return sorted(out)


def _squarefree_parts(f: list[int], p: int) -> list[tuple[list[int], int]]:
    df = _trim([(i * c) % p for i, c in enumerate(f)][1:])
    if not df:
        # f is a p-th power: f(x) = g(x^p)
        g = [f[i] for i in range(0, len(f), p)]
        return [(h, m * p) for h, m in _squarefree_parts(g, p)]
    out = []
    c = pmod_gcd(f, df, p)
    w = pmod_divmod(f, c, p)[0]
    i = 1
    while len(w) > 1:
        y = pmod_gcd(w, c, p)
        z = pmod_divmod(w, y, p)[0]
        if len(z) > 1:
            out.append((z, i))
        i += 1
        w = y
        c = pmod_divmod(c, y, p)[0]
    if len(c) > 1:
        g = [c[i] for i in range(0, len(c), p)]
        out.extend((h, m * p) for h, m in _squarefree_parts(g, p))
    return out
