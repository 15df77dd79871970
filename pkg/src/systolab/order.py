"""Orders in number fields of degree <= 4: arithmetic, embeddings, maximal order."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import lcm
from typing import Sequence

import mpmath

from . import arith
from .intlinalg import (
    det_bareiss,
    det_fraction,
    hnf_rows,
    inverse_fraction,
    kernel_mod_p,
    lll,
)
from .poly import IntPoly, complex_roots, is_squarefree, poly_discriminant, sturm_real_roots

log = logging.getLogger(__name__)

MAX_DEGREE = 4
Elt = tuple[int, ...]


class ReducibleError(ValueError):
    pass


def _polymulmod(a: Sequence[Fraction], b: Sequence[Fraction], f: IntPoly) -> list[Fraction]:
    n = f.degree
    prod = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    for k in range(len(prod) - 1, n - 1, -1):
        c = prod[k]
        if c:
            for i in range(n):
                prod[k - n + i] -= c * f.coeffs[i]
            prod[k] = Fraction(0)
    return (prod + [Fraction(0)] * n)[:n]


@dataclass(frozen=True, eq=False)
class NumberFieldOrder:
    """A full-rank order in Q[x]/(f) given by a basis in the power basis.

    ``basis[i]`` lists the power-basis coefficients of the i-th basis element.
    ``certified`` is False when the maximality computation was cut short by
    the factorization budget.
    """

    poly: IntPoly
    basis: tuple[tuple[Fraction, ...], ...]
    certified: bool = True
    status: str = ""
    _roots_cache: dict = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def equation_order(cls, f: IntPoly) -> "NumberFieldOrder":
        n = f.degree
        return cls(f, tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)))

    @property
    def degree(self) -> int:
        return self.poly.degree

    @cached_property
    def index(self) -> int:
        """[O : Z[theta]]."""
        d = det_fraction(self.basis)
        inv = 1 / abs(d)
        assert inv.denominator == 1
        return int(inv)

    @cached_property
    def disc_poly(self) -> int:
        return poly_discriminant(self.poly)

    @cached_property
    def disc(self) -> int:
        """Discriminant of this order (field discriminant when maximal)."""
        q, r = divmod(self.disc_poly, self.index**2)
        assert r == 0
        return q

    @property
    def disc_field(self) -> int:
        return self.disc

    @cached_property
    def _inv_basis(self) -> list[list[Fraction]]:
        return inverse_fraction(self.basis)

    @cached_property
    def mult_table(self) -> list[list[Elt]]:
        n = self.degree
        table = [[()] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                prod = _polymulmod(self.basis[i], self.basis[j], self.poly)
                c = self.from_power(prod)
                table[i][j] = table[j][i] = c
        return table

    def to_power(self, x: Sequence[int]) -> list[Fraction]:
        n = self.degree
        return [sum((x[i] * self.basis[i][j] for i in range(n)), Fraction(0)) for j in range(n)]

    def from_power(self, v: Sequence, integral: bool = True) -> Elt:
        n = self.degree
        c = [sum((Fraction(v[i]) * self._inv_basis[i][j] for i in range(n)), Fraction(0)) for j in range(n)]
        if integral:
            if any(x.denominator != 1 for x in c):
                raise ValueError("element does not lie in the order")
            return tuple(int(x) for x in c)
        return tuple(c)

    @property
    def one(self) -> Elt:
        return self.from_power([1] + [0] * (self.degree - 1))

    def mul(self, x: Sequence[int], y: Sequence[int]) -> Elt:
        n = self.degree
        out = [0] * n
        t = self.mult_table
        for i in range(n):
            xi = x[i]
            if not xi:
                continue
            for j in range(n):
                yj = y[j]
                if yj:
                    c = xi * yj
                    for k, v in enumerate(t[i][j]):
                        if v:
                            out[k] += c * v
        return tuple(out)

    def mul_mod(self, x: Sequence[int], y: Sequence[int], m: int) -> Elt:
        return tuple(c % m for c in self.mul(x, y))

    def pow_mod(self, x: Sequence[int], e: int, m: int) -> Elt:
        result = tuple(c % m for c in self.one)
        base = tuple(c % m for c in x)
        while e:
            if e & 1:
                result = self.mul_mod(result, base, m)
            base = self.mul_mod(base, base, m)
            e >>= 1
        return result

    def mul_matrix(self, x: Sequence[int]) -> list[list[int]]:
        """Row i holds the coordinates of x * omega_i."""
        n = self.degree
        return [list(self.mul(x, tuple(int(i == j) for j in range(n)))) for i in range(n)]

    def norm(self, x: Sequence[int]) -> int:
        return det_bareiss(self.mul_matrix(x))

    def trace(self, x: Sequence[int]) -> int:
        m = self.mul_matrix(x)
        return sum(m[i][i] for i in range(self.degree))

    def charpoly(self, x: Sequence[int]) -> IntPoly:
        """Characteristic polynomial det(tI - M_x) of multiplication by x."""
        m = self.mul_matrix(x)
        n = self.degree
        # Faddeev-LeVerrier with exact rationals
        coeffs = [Fraction(1)]
        mk = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        a = [[Fraction(v) for v in r] for r in m]
        for k in range(1, n + 1):
            am = [[sum(a[i][l] * mk[l][j] for l in range(n)) for j in range(n)] for i in range(n)]
            ck = -sum(am[i][i] for i in range(n)) / k
            coeffs.append(ck)
            mk = [[am[i][j] + (ck if i == j else 0) for j in range(n)] for i in range(n)]
        return IntPoly(tuple(int(c) for c in reversed(coeffs)))

    # --- embeddings -----------------------------------------------------

    @cached_property
    def signature(self) -> tuple[int, int]:
        r1 = sturm_real_roots(self.poly, 32).count
        return r1, (self.degree - r1) // 2

    def roots(self, prec: int) -> list:
        """Real roots ascending (mpf), then one root per complex pair (Im > 0)."""
        key = prec
        if key not in self._roots_cache:
            r1, r2 = self.signature
            real = sturm_real_roots(self.poly, 32).values(prec) if r1 else []
            cplx = []
            if r2:
                allr = complex_roots(self.poly, prec)
                cplx = sorted((z for z in allr if z.imag > 0), key=lambda z: float(z.imag))
                if len(cplx) != r2:
                    raise ArithmeticError("complex root separation failed")
            self._roots_cache[key] = real + cplx
        return self._roots_cache[key]

    def embedding_matrix(self, prec: int) -> list[list]:
        """E[k][i] = sigma_k(omega_i) for the r1 + r2 distinct embeddings."""
        key = ("E", prec)
        if key not in self._roots_cache:
            with mpmath.workprec(prec + 16):
                rows = []
                for z in self.roots(prec):
                    pw = [mpmath.mpf(1)]
                    for _ in range(self.degree - 1):
                        pw.append(pw[-1] * z)
                    rows.append([mpmath.fsum(mpmath.mpf(c.numerator) / c.denominator * pw[j] for j, c in enumerate(b)) for b in self.basis])
                self._roots_cache[key] = rows
        return self._roots_cache[key]

    def embed(self, x: Sequence[int], prec: int) -> list:
        e = self.embedding_matrix(prec)
        with mpmath.workprec(prec + 16):
            return [mpmath.fsum(c * v for c, v in zip(x, row) if c) for row in e]

    def log_embedding(self, x: Sequence[int], prec: int) -> list[mpmath.mpf]:
        """(log|sigma_k(x)|) with multiplicity 2 on complex places."""
        r1, _ = self.signature
        vals = self.embed(x, prec)
        with mpmath.workprec(prec + 16):
            return [(1 if k < r1 else 2) * mpmath.log(abs(v)) for k, v in enumerate(vals)]

    # --- reduced bases ----------------------------------------------------

    def change_basis(self, transform: Sequence[Sequence[int]]) -> "NumberFieldOrder":
        """Same order, new basis rows ``transform * basis`` (transform unimodular)."""
        assert abs(det_bareiss(transform)) == 1
        n = self.degree
        new = tuple(
            tuple(sum((transform[i][k] * self.basis[k][j] for k in range(n)), Fraction(0)) for j in range(n))
            for i in range(n)
        )
        return NumberFieldOrder(self.poly, new, self.certified, self.status)

    def lll_reduced(self, prec: int = 128) -> tuple["NumberFieldOrder", list[list[int]]]:
        """T2-reduced basis keeping 1 as first element; returns (order, transform).

        Requires ``basis[0] == 1``, which holds for every order built here.
        """
        n = self.degree
        if self.basis[0] != tuple(Fraction(int(j == 0)) for j in range(n)):
            raise ValueError("first basis element must be 1")
        ident = [[int(i == j) for j in range(n)] for i in range(n)]
        if n == 1:
            return self, ident
        r1, _ = self.signature
        scale = mpmath.mpf(2) ** 48
        vecs = []
        with mpmath.workprec(prec):
            emb = self.embedding_matrix(prec)
            for i in range(1, n):
                mean = mpmath.mpf(self.trace(tuple(ident[i]))) / n
                v = []
                for k, row in enumerate(emb):
                    z = row[i] - mean
                    if k < r1:
                        v.append(int(mpmath.nint(z * scale)))
                    else:
                        w = scale * mpmath.sqrt(2)
                        v.extend((int(mpmath.nint(mpmath.re(z) * w)), int(mpmath.nint(mpmath.im(z) * w))))
                vecs.append(v)
        _, u = lll(vecs)
        t = [list(r) for r in ident]
        for a in range(n - 1):
            t[a + 1] = [0] + u[a]
        red = self.change_basis(t)
        # size-reduce against 1
        for i in range(1, n):
            t[i][0] -= round(Fraction(red.trace(tuple(ident[i])), n))
        return self.change_basis(t), t

    def coords_in(self, other: "NumberFieldOrder", x: Sequence[int]) -> tuple[Fraction, ...]:
        """Coordinates of an element of this order with respect to another order's basis."""
        return other.from_power(self.to_power(x), integral=False)


# --- irreducibility and maximal order -------------------------------------


def check_irreducible(f: IntPoly) -> None:
    """Raise ReducibleError if the monic polynomial f (deg <= 4) factors over Q."""
    if not f.is_monic():
        raise ValueError("polynomial must be monic")
    n = f.degree
    if n > MAX_DEGREE:
        raise ValueError(f"degree {n} > {MAX_DEGREE} not supported")
    c0 = f.coeffs[0]
    if c0 == 0:
        raise ReducibleError(f"{f} has root 0")
    for d in arith.divisors(arith.factorint(c0)):
        for r in (d, -d):
            if f(r) == 0:
                raise ReducibleError(f"{f} has rational root {r}")
    if n == 4:
        f0, f1, f2, f3 = f.coeffs[:4]
        for b in arith.divisors(arith.factorint(f0)):
            for bs in (b, -b):
                d = f0 // bs
                if d != bs:
                    num = f1 - bs * f3
                    if num % (d - bs):
                        continue
                    a = num // (d - bs)
                    c = f3 - a
                    if bs + d + a * c == f2:
                        raise ReducibleError(f"{f} splits into quadratics")
                else:
                    if bs * f3 != f1:
                        continue
                    s, pr = f3, f2 - 2 * bs
                    disc = s * s - 4 * pr
                    if disc >= 0 and _is_square(disc):
                        raise ReducibleError(f"{f} splits into quadratics")


def _is_square(n: int) -> bool:
    from math import isqrt

    return n >= 0 and isqrt(n) ** 2 == n


def dedekind_criterion(f: IntPoly, p: int) -> bool:
    """True iff Z[theta] is p-maximal (Dedekind's criterion)."""
    fp = [c % p for c in f.coeffs]
    parts = arith._squarefree_parts(fp, p)
    g = [1]
    h = [1]
    for t, e in parts:
        g = arith.pmod_mul(g, t, p)
        for _ in range(e - 1):
            h = arith.pmod_mul(h, t, p)
    # lift and compute F = (g*h - f)/p over Z
    gh = _zmul(g, h)
    diff = [(a - b) for a, b in zip(gh + [0] * (len(f.coeffs) - len(gh)), f.coeffs)]
    assert all(x % p == 0 for x in diff)
    F = [x // p for x in diff]
    d = arith.pmod_gcd(arith.pmod_gcd(F, g, p), h, p)
    return len(d) <= 1


def _zmul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _normalize_basis(f: IntPoly, rows: list[list[Fraction]]) -> tuple[tuple[Fraction, ...], ...]:
    """Canonical basis: HNF with element i of degree i (so element 0 is 1)."""
    n = f.degree
    den = 1
    for r in rows:
        for c in r:
            den = lcm(den, c.denominator)
    ints = [[int(c * den) for c in reversed(r)] for r in rows]
    h = hnf_rows(ints)
    assert len(h) == n
    out = [tuple(Fraction(c, den) for c in reversed(r)) for r in h]
    out.sort(key=lambda r: max((i for i, c in enumerate(r) if c), default=0))
    return tuple(out)


def round2_step(order: NumberFieldOrder, p: int) -> NumberFieldOrder | None:
    """One p-enlargement via the ring of multipliers of the p-radical.

    Returns the strictly larger order, or None if ``order`` is p-maximal.
    """
    n = order.degree
    unit = [[int(i == j) for j in range(n)] for i in range(n)]
    q = p
    while q < n:
        q *= p
    frob = [list(order.pow_mod(tuple(unit[i]), q, p)) for i in range(n)]
    ker = kernel_mod_p(frob, p)
    rad = hnf_rows([list(v) for v in ker] + [[p * x for x in r] for r in unit])
    # coordinates w.r.t. the radical's basis
    rinv = inverse_fraction(rad)
    rows = []
    for k in range(n):
        row = []
        for beta in rad:
            prod = order.mul(tuple(unit[k]), tuple(beta))
            c = [sum((prod[i] * rinv[i][j] for i in range(n)), Fraction(0)) for j in range(n)]
            assert all(x.denominator == 1 for x in c)
            row.extend(int(x) for x in c)
        rows.append(row)
    ker2 = kernel_mod_p(rows, p)
    if not ker2:
        return None
    u = hnf_rows([list(v) for v in ker2] + [[p * x for x in r] for r in unit])
    new_rows = [[c / p for c in order.to_power(r)] for r in u]
    return NumberFieldOrder(order.poly, _normalize_basis(order.poly, new_rows))


def maximal_order(f: IntPoly, factor_effort: int = 2_000_000) -> NumberFieldOrder:
    """Ring of integers of Q[x]/(f) for monic irreducible f of degree <= 4.

    Primes whose square divides disc(f) are tested with Dedekind's criterion
    and enlarged by Round 2 until p-maximal. If disc(f) cannot be fully
    factored within ``factor_effort`` the largest order found is returned with
    ``certified=False``.
    """
    check_irreducible(f)
    if f.degree < 2:
        raise ValueError("degree must be >= 2")
    if not is_squarefree(f):
        raise ReducibleError("polynomial is not squarefree")
    disc = poly_discriminant(f)
    certified, status = True, ""
    try:
        fac = arith.factorint(disc, effort=factor_effort)
    except arith.FactorizationError as exc:
        fac = dict(exc.partial)
        certified = False
        status = f"disc cofactor {exc.cofactor} unfactored"
        log.warning("maximal_order(%s): %s", f, status)
    order = NumberFieldOrder.equation_order(f)
    for p, e in fac.items():
        if e < 2 or dedekind_criterion(f, p):
            continue
        while True:
            bigger = round2_step(order, p)
            if bigger is None:
                break
            order = bigger
    return NumberFieldOrder(f, order.basis, certified, status)
