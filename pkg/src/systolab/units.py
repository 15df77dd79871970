"""Unit groups, regulators and fundamentality certificates.

Units are found as multiplicative relations among smooth elements: elements
``a + t_1 w_1 + ... + t_{n-1} w_{n-1}`` of an LLL-reduced integral basis are
sieved for norms that factor over a base of degree-one prime ideals, the
integer kernel of their valuation vectors gives units in compact form, and an
LLL on the weighted log embeddings extracts a basis of the unit lattice.
Basis units are then rebuilt as explicit algebraic integers from their
embeddings and checked exactly (norm +-1). Saturation at every prime below
the index bound ``regulator / R_lower`` proves the system fundamental.
"""

from __future__ import annotations

import logging
import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import mpmath
import numpy as np

from . import arith, kernels
from .intlinalg import det_bareiss, hnf_with_transform, inverse_fraction, kernel_mod_p, lll
from .order import Elt, NumberFieldOrder
from .poly import poly_discriminant

log = logging.getLogger(__name__)

DEFAULT_PRECISION = 128
CUSICK_CONSTANT = Fraction(1, 16)
MAX_INDEX_BOUND = 10**6


class RankDeficientError(ArithmeticError):
    """Fewer independent units than the Dirichlet rank were found."""


class SingularUnitMatrixError(ArithmeticError):
    pass


class BadPrimeError(ValueError):
    pass


@dataclass(frozen=True)
class UnitSystem:
    """Independent units of an order with their log embeddings.

    ``units`` are coordinate vectors in ``order``'s basis. ``log_matrix`` has
    one row per unit and one column per archimedean place (complex places
    carry multiplicity 2, so each row sums to zero).
    """

    order: NumberFieldOrder
    units: tuple[Elt, ...]
    log_matrix: tuple[tuple[mpmath.mpf, ...], ...]
    regulator: mpmath.mpf
    error_bound: mpmath.mpf
    certified: bool
    signature: tuple[int, int]
    precision_bits: int
    torsion: int = 2
    torsion_generator: Elt | None = None
    status: str = ""
    index_bound: int | None = None

    @property
    def rank(self) -> int:
        return len(self.units)


@dataclass(frozen=True)
class CertificationReport:
    certified: bool
    status: str  # "certified", "not-saturated", "inconclusive"
    regulator_lower_bound: float
    index_bound: int | None
    primes_checked: int = 0
    failing_prime: int | None = None


def unit_rank(signature: tuple[int, int]) -> int:
    r1, r2 = signature
    return r1 + r2 - 1


# --------------------------------------------------------------------------
# regulators
# --------------------------------------------------------------------------


def log_matrix_of(order: NumberFieldOrder, units: Sequence[Elt], prec: int) -> list[list[mpmath.mpf]]:
    return [unit_logs(order, u, prec) for u in units]


def regulator_of_matrix(logs: Sequence[Sequence[mpmath.mpf]], delete: int | None = None, prec: int = DEFAULT_PRECISION) -> mpmath.mpf:
    """|det| of the rank x rank matrix left after deleting one place (column)."""
    r = len(logs)
    if r == 0:
        return mpmath.mpf(1)
    places = len(logs[0])
    delete = places - 1 if delete is None else delete
    if not 0 <= delete < places:
        raise IndexError("place index out of range")
    cols = [k for k in range(places) if k != delete]
    with mpmath.workprec(prec + 32):
        m = mpmath.matrix([[row[k] for k in cols] for row in logs])
        d = abs(mpmath.det(m))
    if d < mpmath.mpf(2) ** (-prec // 2):
        raise SingularUnitMatrixError("unit log matrix is singular; units are dependent")
    return d


def regulator(us: UnitSystem, delete: int | None = None) -> mpmath.mpf:
    """Regulator from the system's log matrix; ``delete`` picks the dropped place."""
    if us.rank != unit_rank(us.signature):
        raise RankDeficientError("unit system does not have full Dirichlet rank")
    return regulator_of_matrix(us.log_matrix, delete, us.precision_bits)


# --------------------------------------------------------------------------
# factor base of degree-one primes
# --------------------------------------------------------------------------


@dataclass
class _Ideal:
    ell: int
    root: int
    images: tuple[int, ...]  # phi(omega_i) mod ell, omega_0 = 1
    tau: Elt | None = None


class _FactorBase:
    """Degree-one prime ideals of norm <= bound described via a generator.

    For a prime ell not dividing [O : Z[omega]], the degree-one primes above
    ell are (ell, omega - r) for the simple roots... and also the multiple
    roots r of the characteristic polynomial of omega mod ell (Kummer-Dedekind).
    """

    def __init__(self, order: NumberFieldOrder, bound: int):
        self.order = order
        self.n = order.degree
        self.bound = bound
        self._choose_generator()
        self.ideals: list[_Ideal] = []
        self.by_prime: dict[int, list[int]] = {}
        for ell in arith.small_primes(bound + 1):
            if ell in self.bad:
                continue
            for r in arith.roots_mod_p(list(self.gen_poly.coeffs), ell):
                self.by_prime.setdefault(ell, []).append(len(self.ideals))
                self.ideals.append(self.make_ideal(ell, r))
        self.primes = sorted(self.by_prime)

    def _choose_generator(self) -> None:
        o, n = self.order, self.n
        best = None
        cands: list[Elt] = []
        for i in range(1, n):
            cands.append(tuple(int(j == i) for j in range(n)))
        for i in range(1, n):
            for j in range(i + 1, n):
                for s in (1, -1, 2, -2):
                    v = [0] * n
                    v[i], v[j] = 1, s
                    cands.append(tuple(v))
        for c in cands:
            cp = o.charpoly(c)
            d = poly_discriminant(cp)
            if d == 0:
                continue
            idx = math.isqrt(d // o.disc)
            if best is None or idx < best[0] or (idx == best[0] and max(map(abs, cp.coeffs)) < max(map(abs, best[2].coeffs))):
                best = (idx, c, cp)
            if idx == 1 and len(cands) > 4 and c == cands[0]:
                break
        assert best is not None, "no primitive element among small basis combinations"
        self.gen_index, self.gen, self.gen_poly = best
        self.bad = set(arith.factorint(self.gen_index)) if self.gen_index > 1 else set()
        # express omega_i = sum_j Q[i][j] omega^j
        pw = [o.one]
        for _ in range(n - 1):
            pw.append(o.mul(pw[-1], self.gen))
        self.q = inverse_fraction([list(v) for v in pw])  # row i: coords of omega_i in powers

    def images_at(self, ell: int, r: int) -> tuple[int, ...]:
        out = []
        for i in range(self.n):
            acc = 0
            for j, c in enumerate(self.q[i]):
                acc += c.numerator * pow(c.denominator, -1, ell) * pow(r, j, ell)
            out.append(acc % ell)
        return tuple(out)

    def make_ideal(self, ell: int, r: int) -> _Ideal:
        return _Ideal(ell, r, self.images_at(ell, r))

    def tau(self, ideal: _Ideal) -> Elt:
        if ideal.tau is None:
            o = self.order
            pi = tuple(g - (ideal.root if i == 0 else 0) for i, g in enumerate(self.gen))
            ker = kernel_mod_p(o.mul_matrix(pi), ideal.ell)
            ideal.tau = tuple(ker[0])
        return ideal.tau

    def phi(self, ideal: _Ideal, x: Sequence[int]) -> int:
        return sum(c * m for c, m in zip(x, ideal.images)) % ideal.ell

    def valuation(self, ideal: _Ideal, x: Sequence[int]) -> int:
        if self.phi(ideal, x) != 0:
            return 0
        tau = self.tau(ideal)
        ell = ideal.ell
        v = 0
        y = tuple(x)
        while True:
            z = self.order.mul(y, tau)
            if any(c % ell for c in z):
                return v
            y = tuple(c // ell for c in z)
            v += 1


# --------------------------------------------------------------------------
# relation collection
# --------------------------------------------------------------------------


@dataclass
class _Relations:
    elements: list[Elt] = field(default_factory=list)
    rels: list[tuple[dict[int, int], dict[int, int]]] = field(default_factory=list)


def _line_vectors(n: int) -> Iterator[tuple[int, ...]]:
    """Nonzero t in Z^(n-1), first nonzero entry positive, by increasing box radius."""
    radius = 1
    while True:
        for t in _box(n - 1, radius):
            if max(map(abs, t)) != radius:
                continue
            first = next(c for c in t if c)
            if first > 0:
                yield t
        radius += 1


def _box(dim: int, radius: int):
    if dim == 0:
        yield ()
        return
    for c in range(-radius, radius + 1):
        for rest in _box(dim - 1, radius):
            yield (c,) + rest


class _Sieve:
    def __init__(self, order: NumberFieldOrder, fb: _FactorBase, half_width: int, large_prime_bound: int):
        self.order = order
        self.fb = fb
        self.n = order.degree
        self.A = half_width
        self.lp = large_prime_bound
        self.r1, self.r2 = order.signature
        emb = order.embedding_matrix(64)
        self.emb = [[complex(v) for v in row] for row in emb]
        self.primes_arr = np.array([I.ell for I in fb.ideals], dtype=np.int64)
        self.logs_arr = np.log(self.primes_arr.astype(np.float64)).astype(np.float32) if len(fb.ideals) else np.zeros(0, np.float32)
        self.images_arr = np.array([I.images[1:] for I in fb.ideals], dtype=np.int64).reshape(len(fb.ideals), self.n - 1)
        self.zero_arr = np.zeros(len(fb.ideals), dtype=np.int64)
        self.partials: dict[tuple[int, int], tuple[dict[int, int], int]] = {}
        self.fb_primes = fb.primes
        self.large_roots: dict[int, list[int]] = {}

    def run_line(self, t: tuple[int, ...], store: _Relations) -> int:
        n, A = self.n, self.A
        y = (0,) + t
        # exact norm polynomial N(a + y) = (-1)^n charpoly_y(-a)
        cp = self.order.charpoly(y).coeffs
        normpoly = [c * (-1) ** (i + n) for i, c in enumerate(cp)]
        a = np.arange(-A, A, dtype=np.float64)
        approx = np.zeros_like(a)
        for k, row in enumerate(self.emb):
            s = sum(ti * row[i + 1] for i, ti in enumerate(t))
            if k < self.r1:
                approx += np.log(np.abs(a + s.real) + 1e-30)
            else:
                approx += np.log((a + s.real) ** 2 + s.imag**2 + 1e-30)
        if len(self.fb.ideals):
            roots = kernels.line_roots(self.zero_arr, self.images_arr, np.array(t, dtype=np.int64), self.primes_arr)
            acc = kernels.sieve_line(2 * A, -A, self.primes_arr, roots, self.logs_arr)
        else:
            acc = np.zeros(2 * A, dtype=np.float32)
        slack = math.log(self.lp) + 2.0
        cand = np.nonzero(approx - acc < slack)[0]
        g_t = 0
        for c in t:
            g_t = math.gcd(g_t, c)
        found = 0
        for idx in cand.tolist():
            av = idx - A
            if math.gcd(av, g_t) != 1:
                continue
            x = (av,) + t
            N = 0
            for c in reversed(normpoly):
                N = N * av + c
            if N == 0:
                continue
            found += self._try(x, N, store)
        return found

    def _try(self, x: Elt, N: int, store: _Relations) -> int:
        fb = self.fb
        m = abs(N)
        vec: dict[int, int] = {}
        for ell in self.fb_primes:
            if m == 1:
                break
            if m % ell:
                continue
            e = 0
            while m % ell == 0:
                m //= ell
                e += 1
            tot = 0
            for j in fb.by_prime[ell]:
                v = fb.valuation(fb.ideals[j], x)
                if v:
                    vec[j] = v
                    tot += v
            if tot != e:
                return 0
        if m != 1:
            # bad primes and primes <= bound without degree-1 primes land here too
            if m <= fb.bound or m > self.lp or not arith.is_prime(m) or m in fb.bad:
                return 0
            key = self._large_key(m, x)
            if key is None:
                return 0
            if key in self.partials:
                vec2, j2 = self.partials[key]
                store.elements.append(x)
                j1 = len(store.elements) - 1
                diff = dict(vec)
                for k, v in vec2.items():
                    diff[k] = diff.get(k, 0) - v
                    if diff[k] == 0:
                        del diff[k]
                store.rels.append((diff, {j1: 1, j2: -1}))
                return 1
            store.elements.append(x)
            self.partials[key] = (vec, len(store.elements) - 1)
            return 0
        store.elements.append(x)
        store.rels.append((vec, {len(store.elements) - 1: 1}))
        return 1

    def _large_key(self, ell: int, x: Elt) -> tuple[int, int] | None:
        fb = self.fb
        if ell not in self.large_roots:
            self.large_roots[ell] = arith.roots_mod_p(list(fb.gen_poly.coeffs), ell)
        for r in self.large_roots[ell]:
            if fb.phi(fb.make_ideal(ell, r), x) == 0:
                return (ell, r)
        return None


# --------------------------------------------------------------------------
# integer kernel of the valuation matrix
# --------------------------------------------------------------------------


def _kernel_combinations(rels: Sequence[tuple[dict[int, int], dict[int, int]]]) -> list[dict[int, int]]:
    """Integer kernel of the relation matrix, as combinations of relations.

    Gauss-Jordan with +-1 pivots first (lightest column first, lightest row
    within it), which keeps coefficients small; the leftover rows go through
    an extended-gcd triangular pass. Every step is unimodular, so the
    combinations generate the full kernel lattice.
    """
    rows = {i: (dict(v), dict(c)) for i, (v, c) in enumerate(rels)}
    cols: dict[int, set[int]] = {}
    kernel = []
    for i, (v, _) in list(rows.items()):
        if not v:
            kernel.append(rows.pop(i)[1])
            continue
        for k in v:
            cols.setdefault(k, set()).add(i)
    heap = [(len(rs), c) for c, rs in cols.items()]
    heapq.heapify(heap)
    while heap:
        n, c = heapq.heappop(heap)
        rs = cols.get(c)
        if rs is None:
            continue
        if len(rs) != n:
            heapq.heappush(heap, (len(rs), c))
            continue
        units_rows = [i for i in rs if abs(rows[i][0][c]) == 1]
        if not units_rows:
            continue  # left for the gcd pass
        i = min(units_rows, key=lambda j: len(rows[j][0]))
        pv, pc = rows.pop(i)
        for k in pv:
            cols[k].discard(i)
        sign = pv[c]
        for j in list(rs):
            v, cm = rows[j]
            q = v[c] * sign
            before = set(v)
            _axpy(v, -q, pv)
            _axpy(cm, -q, pc)
            for k in before - set(v):
                cols[k].discard(j)
            for k in set(v) - before:
                cols.setdefault(k, set()).add(j)
                heapq.heappush(heap, (len(cols[k]), k))
            if not v:
                kernel.append(rows.pop(j)[1])
        del cols[c]
    # extended-gcd pass on what is left (few rows, no +-1 entries)
    pivots: dict[int, tuple[dict[int, int], dict[int, int]]] = {}
    for vec, comb in rows.values():
        while vec:
            c = max(vec)
            if c not in pivots:
                pivots[c] = (vec, comb)
                break
            pv, pc = pivots[c]
            d, e = pv[c], vec[c]
            if e % d == 0:
                _axpy(vec, -(e // d), pv)
                _axpy(comb, -(e // d), pc)
                continue
            g, s_, t_ = arith.xgcd(d, e)
            nv, nc = {}, {}
            _axpy(nv, s_, pv)
            _axpy(nv, t_, vec)
            _axpy(nc, s_, pc)
            _axpy(nc, t_, comb)
            rv, rc = {}, {}
            _axpy(rv, e // g, pv)
            _axpy(rv, -(d // g), vec)
            _axpy(rc, e // g, pc)
            _axpy(rc, -(d // g), comb)
            pivots[c] = (nv, nc)
            vec, comb = rv, rc
        else:
            if comb:
                kernel.append(comb)
    return kernel


# --------------------------------------------------------------------------
# log lattice
# --------------------------------------------------------------------------


class _LogLattice:
    """Lattice of unit log vectors kept LLL-reduced.

    Each basis vector carries its exponent vector over atomic generators
    (a sparse dict), so the unit it represents is always prod atom^exp.
    """

    def __init__(self, rank: int, prec: int):
        self.rank = rank
        self.prec = prec
        self.basis: list[tuple[dict, list[mpmath.mpf]]] = []

    def add(self, exps: dict, logv: Sequence[mpmath.mpf]) -> bool:
        """Add a unit; True if the lattice grew (rank or covolume)."""
        r = self.rank
        with mpmath.workprec(self.prec):
            v = [mpmath.mpf(x) for x in logv[:r]]
            tiny = mpmath.mpf(2) ** (-self.prec // 3)
            vnorm = mpmath.sqrt(mpmath.fsum(x * x for x in v))
            if vnorm < tiny:
                return False
            if not self.basis:
                self.basis = [(dict(exps), v)]
                return True
            b = mpmath.matrix([bv for _, bv in self.basis])
            coords = mpmath.lu_solve(b * b.T, b * mpmath.matrix(v))
            k = len(self.basis)
            resid = [v[i] - mpmath.fsum(coords[j] * self.basis[j][1][i] for j in range(k)) for i in range(r)]
            if mpmath.sqrt(mpmath.fsum(x * x for x in resid)) > tiny * (1 + vnorm):
                if k == r:
                    raise ArithmeticError("more independent log vectors than the unit rank; raise precision")
                self.basis = _real_lll(self.basis + [(dict(exps), v)])
                return True
            cs = [coords[j] for j in range(k)]
        d, nums = _common_denominator(cs, self.prec)
        if d == 1:
            return False
        # generators d*b_1..d*b_k and d*v = sum nums_j b_j, in b-coordinates
        rows = [[d * int(i == j) for j in range(k)] for i in range(k)] + [nums]
        h, u = hnf_with_transform(rows)
        gens = self.basis + [(dict(exps), v)]
        new = []
        with mpmath.workprec(self.prec):
            for row_u, row_h in zip(u, h):
                if not any(row_h):
                    continue
                ex: dict = {}
                for c, (e, _) in zip(row_u, gens):
                    if c:
                        _axpy(ex, c, e)
                lv = [mpmath.fsum(c * g[1][i] for c, g in zip(row_u, gens) if c) for i in range(r)]
                new.append((ex, lv))
            self.basis = _real_lll(new)
        return True

    def covolume(self) -> mpmath.mpf | None:
        if len(self.basis) < self.rank:
            return None
        if self.rank == 0:
            return mpmath.mpf(1)
        with mpmath.workprec(self.prec):
            return abs(mpmath.det(mpmath.matrix([v for _, v in self.basis])))


def _axpy(exps: dict, c: int, other: dict) -> None:
    for key, v in other.items():
        w = exps.get(key, 0) + c * v
        if w:
            exps[key] = w
        else:
            exps.pop(key, None)


def _simplest_fraction(x: mpmath.mpf, tol, limit: int) -> Fraction | None:
    """First continued-fraction convergent of x within tol (denominator <= limit)."""
    h0, h1, k0, k1 = 0, 1, 1, 0
    y = x
    while True:
        a = int(mpmath.floor(y))
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        if k1 > limit:
            return None
        if abs(x - mpmath.mpf(h1) / k1) < tol:
            return Fraction(h1, k1)
        frac = y - a
        if frac == 0:
            return None
        y = 1 / frac


def _common_denominator(cs: Sequence[mpmath.mpf], prec: int) -> tuple[int, list[int]]:
    """Smallest-looking d with d*c_i all (nearly) integral; returns (d, [d*c_i])."""
    limit = 1 << max(prec // 4, 16)
    tol = mpmath.mpf(2) ** (-prec // 3)
    d = 1
    with mpmath.workprec(prec):
        for c in cs:
            x = c * d
            if abs(x - mpmath.nint(x)) < tol * (1 + abs(x)):
                continue
            fr = _simplest_fraction(x, tol * (1 + abs(x)), limit)
            if fr is None:
                raise ArithmeticError("log vectors not commensurate at this precision")
            d *= fr.denominator
            if d > limit:
                raise ArithmeticError("index of unit lattice enlargement too large for the precision")
        nums = [int(mpmath.nint(c * d)) for c in cs]
    return d, nums


def _real_lll(vecs: list) -> list:
    """LLL on linearly independent real vectors carrying exponent dicts.

    Runs at the caller's working precision.
    """
    vecs = [(dict(e), list(v)) for e, v in vecs]

    def dot(x, y):
        return mpmath.fsum(a * b for a, b in zip(x, y))

    def gso(upto):
        bstar, bb = [], []
        mu = [[mpmath.mpf(0)] * (upto + 1) for _ in range(upto + 1)]
        for i in range(upto + 1):
            v = list(vecs[i][1])
            for j in range(i):
                mu[i][j] = dot(vecs[i][1], bstar[j]) / bb[j]
                v = [a - mu[i][j] * b for a, b in zip(v, bstar[j])]
            bstar.append(v)
            bb.append(dot(v, v))
        return mu, bb

    k = 1
    while k < len(vecs):
        mu, bb = gso(k)
        for j in range(k - 1, -1, -1):
            c = int(mpmath.nint(mu[k][j]))
            if c:
                ek, vk = vecs[k]
                vecs[k] = (ek, [a - c * b for a, b in zip(vk, vecs[j][1])])
                _axpy(ek, -c, vecs[j][0])
                for i in range(j):
                    mu[k][i] -= c * mu[j][i]
                mu[k][j] -= c
        mu, bb = gso(k)
        if bb[k] >= (mpmath.mpf(3) / 4 - mu[k][k - 1] ** 2) * bb[k - 1]:
            k += 1
        else:
            vecs[k - 1], vecs[k] = vecs[k], vecs[k - 1]
            k = max(k - 1, 1)
    return vecs


# --------------------------------------------------------------------------
# explicit reconstruction
# --------------------------------------------------------------------------


def _reconstruct(order: NumberFieldOrder, target: Sequence, prec: int) -> Elt | None:
    """Integer coordinates of the element with embeddings ``target`` (one per place)."""
    r1, r2 = order.signature
    n = order.degree
    e = order.embedding_matrix(prec)
    with mpmath.workprec(prec + 16):
        rows, rhs = [], []
        for k in range(r1):
            rows.append([mpmath.re(v) for v in e[k]])
            rhs.append(mpmath.re(target[k]))
        for k in range(r1, r1 + r2):
            rows.append([mpmath.re(v) for v in e[k]])
            rhs.append(mpmath.re(target[k]))
            rows.append([mpmath.im(v) for v in e[k]])
            rhs.append(mpmath.im(target[k]))
        try:
            sol = mpmath.lu_solve(mpmath.matrix(rows), mpmath.matrix(rhs))
        except ZeroDivisionError:
            return None
        coords = []
        for i in range(n):
            c = sol[i]
            ci = int(mpmath.nint(c))
            if abs(c - ci) > mpmath.mpf("0.01"):
                return None
            coords.append(ci)
    return tuple(coords)


def _needed_bits(logv: Sequence[mpmath.mpf]) -> int:
    mx = max((abs(x) for x in logv), default=mpmath.mpf(0))
    return int(mpmath.ceil(mx / mpmath.log(2))) + 64


# --------------------------------------------------------------------------
# torsion
# --------------------------------------------------------------------------


def torsion_subgroup(order: NumberFieldOrder) -> tuple[int, Elt]:
    """(w, generator) for the roots of unity in the order."""
    r1, _ = order.signature
    n = order.degree
    minus_one = tuple(-c for c in order.one)
    if r1 > 0:
        return 2, minus_one
    red, t = order.lll_reduced()
    roots = []
    for v in _box(n, 2):
        if not any(v):
            continue
        # T2(x) == n with norm 1 characterises roots of unity
        x = tuple(sum(v[i] * t[i][j] for i in range(n)) for j in range(n))
        if abs(order.norm(x)) != 1:
            continue
        with mpmath.workprec(64):
            if all(abs(abs(z) - 1) < 1e-9 for z in order.embed(x, 64)):
                roots.append(x)
    w = len(roots)
    for x in roots:
        k, y = 1, x
        while y != order.one:
            y = order.mul(y, x)
            k += 1
        if k == w:
            return w, x
    return 2, minus_one


# --------------------------------------------------------------------------
# main entry point
# --------------------------------------------------------------------------


def _default_params(disc: int, n: int) -> tuple[int, int, int]:
    """(factor base bound, sieve half width, large prime bound).

    Small bases win here: relations are only needed for units, not for the
    class group, and the elimination cost grows quickly with the base.
    """
    ld = math.log(max(abs(disc), 3))
    bound = max(50, int(ld * ld / 2))
    return bound, max(200, 5 * bound), 40 * bound


def unit_group(
    order: NumberFieldOrder,
    precision_bits: int = DEFAULT_PRECISION,
    budget: int = 4000,
    lower_bound_constant: float | Fraction | None = None,
    saturate: bool = True,
) -> UnitSystem:
    """A maximal independent system of units of ``order``.

    ``budget`` caps the number of sieve lines. With ``saturate`` the system
    is saturated at every prime up to the index bound and certified.
    """
    sig = order.signature
    r = unit_rank(sig)
    w, zeta = torsion_subgroup(order)
    if r == 0:
        return UnitSystem(order, (), (), mpmath.mpf(1), mpmath.mpf(0), True, sig, precision_bits, w, zeta, "rank 0")

    red, t = order.lll_reduced()
    units_red, status = _find_units(red, r, max(precision_bits, 128), budget)
    if len(units_red) < r:
        raise RankDeficientError(f"found {len(units_red)} of {r} independent units ({status})")
    n = order.degree
    units = [tuple(sum(u[i] * t[i][j] for i in range(n)) for j in range(n)) for u in units_red]
    units = _reduce_units(order, units, precision_bits)
    us = _make_system(order, units, precision_bits, w, zeta, False, status)
    if saturate:
        us = saturate_and_certify(us, lower_bound_constant)
    return us


def change_unit_basis(us: UnitSystem, transform: Sequence[Sequence[int]]) -> UnitSystem:
    """System whose i-th unit is prod_j units[j]**transform[i][j] (transform in GL_r(Z))."""
    if abs(det_bareiss([list(r) for r in transform])) != 1:
        raise ValueError("transform is not unimodular")
    order = us.order
    new = []
    for row in transform:
        acc = order.one
        for j, c in enumerate(row):
            if c:
                acc = order.mul(acc, _elt_pow(order, us.units[j], c))
        new.append(acc)
    return _make_system(order, new, us.precision_bits, us.torsion, us.torsion_generator, us.certified, us.status, us.index_bound)


def _coeff_bits(x: Elt) -> int:
    return max((abs(c).bit_length() for c in x), default=0)


def unit_logs(order: NumberFieldOrder, u: Elt, prec: int) -> list[mpmath.mpf]:
    """Log embedding of a unit to about ``prec`` absolute bits.

    Large coordinates cancel in small embeddings, so the working precision
    grows with the coefficient size and is doubled until the log row sums to
    zero, which holds exactly for a unit.

    Raises:
        ArithmeticError: if the row sum does not vanish even at high precision.
    """
    extra = 2 * _coeff_bits(u) + 32
    tol = mpmath.mpf(2) ** (-prec + 4)
    for _ in range(8):
        lv = order.log_embedding(u, prec + extra)
        with mpmath.workprec(prec + extra):
            if all(mpmath.isfinite(x) for x in lv) and abs(mpmath.fsum(lv)) <= tol:
                return lv
        extra *= 2
    raise ArithmeticError("log embedding of a unit does not sum to zero; is it a unit?")


def _make_system(order, units, prec, w, zeta, certified, status, index_bound=None) -> UnitSystem:
    with mpmath.workprec(prec):
        logs = [[+x for x in unit_logs(order, u, prec)] for u in units]
    reg = regulator_of_matrix(logs, None, prec)
    with mpmath.workprec(prec):
        mx = max((abs(x) for row in logs for x in row), default=mpmath.mpf(1))
        err = reg * len(units) * (mx + 1) * mpmath.mpf(2) ** (-prec + 8)
    return UnitSystem(
        order, tuple(units), tuple(tuple(r) for r in logs), reg, err, certified, order.signature, prec, w, zeta, status, index_bound
    )


def _reduce_units(order: NumberFieldOrder, units: list[Elt], prec: int) -> list[Elt]:
    """LLL the log lattice of explicit units and return the reduced explicit basis."""
    r = len(units)
    logs = [unit_logs(order, u, 64) for u in units]
    with mpmath.workprec(64):
        scale = mpmath.mpf(2) ** 40
        rows = [[int(mpmath.nint(x * scale)) for x in row[:r]] for row in logs]
    _, u = lll(rows)
    return [_product(order, units, dict(enumerate(row))) for row in u]


def _product(order: NumberFieldOrder, atoms: Sequence[Elt], exps: dict[int, int]) -> Elt:
    acc = order.one
    for j, c in exps.items():
        if c:
            acc = order.mul(acc, _elt_pow(order, atoms[j], c))
    return acc


def _elt_inverse(order: NumberFieldOrder, u: Elt) -> Elt:
    """Inverse of a unit, exact."""
    m = order.mul_matrix(u)
    n = order.degree
    inv = inverse_fraction(m)
    one = order.one
    # coords(x * u) = x . M_u, so x = one . M_u^-1
    coords = [sum(Fraction(one[i]) * inv[i][j] for i in range(n)) for j in range(n)]
    if any(c.denominator != 1 for c in coords):
        raise ValueError("not a unit")
    return tuple(int(c) for c in coords)


def _elt_pow(order: NumberFieldOrder, u: Elt, e: int) -> Elt:
    if e < 0:
        u, e = _elt_inverse(order, u), -e
    result, base = order.one, u
    while e:
        if e & 1:
            result = order.mul(result, base)
        e >>= 1
        if e:
            base = order.mul(base, base)
    return result


def _find_units(order: NumberFieldOrder, r: int, prec: int, budget: int) -> tuple[list[Elt], str]:
    """Relation search on a reduced order; returns explicit independent units.

    A lattice whose covolume clearly exceeds the analytic estimate of hR
    (h >= 1) is a proper sublattice, so more relations are collected.
    """
    disc = order.disc
    bound, half, lp = _default_params(disc, order.degree)
    fb = _FactorBase(order, bound)
    sieve = _Sieve(order, fb, half, lp)
    store = _Relations()
    logs = _ElementLogs(order, store.elements)
    lines = _line_vectors(order.degree)
    target = len(fb.ideals) + r + 8
    used_lines = 0
    est = hR_estimate(order)
    rounds = 0
    while used_lines < budget:
        while len(store.rels) < target and used_lines < budget:
            sieve.run_line(next(lines), store)
            used_lines += 1
        kernel = _kernel_combinations(store.rels)
        lat = _lattice_from_kernel(kernel, r, prec, logs)
        if lat is not None:
            cov = lat.covolume()
            status = f"fb={len(fb.ideals)} rels={len(store.rels)} lines={used_lines} kernel={len(kernel)}"
            if cov > HR_SLACK * est and rounds < MAX_EXTRA_ROUNDS and used_lines < budget:
                rounds += 1
                log.debug("covolume %s exceeds hR estimate %.4g (%s); collecting more relations", mpmath.nstr(cov, 6), est, status)
                target = len(store.rels) + max(20, len(fb.ideals) // 2)
                continue
            units = _explicit_units(order, logs, lat)
            log.debug("unit search on disc %s: %s", disc, status)
            return units, status
        target = len(store.rels) + max(10, len(fb.ideals) // 10)
    return [], f"budget exhausted after {used_lines} lines"


HR_SLACK = 1.5
MAX_EXTRA_ROUNDS = 12
EULER_BOUND = 5000


def hR_estimate(order: NumberFieldOrder, bound: int = EULER_BOUND) -> float:
    """Heuristic class number times regulator from a truncated Euler product.

    Uses hR = w sqrt|D| res / (2^r1 (2 pi)^r2) with the residue of the Dedekind
    zeta function approximated over primes below ``bound``. Only used to
    detect unit lattices of large index, never as a certificate.
    """
    f = list(order.poly.coeffs)
    dpoly = order.disc_poly
    r1, r2 = order.signature
    logres = 0.0
    for ell in arith.small_primes(bound):
        if dpoly % ell == 0:
            continue
        logres += math.log1p(-1.0 / ell)
        for deg, mult in arith.factor_mod_p_degrees(f, ell):
            logres -= mult * math.log1p(-float(ell) ** (-deg))
    w = 2 if r1 else torsion_subgroup(order)[0]
    return w * math.sqrt(abs(order.disc)) * math.exp(logres) / (2**r1 * (2 * math.pi) ** r2)


def _lattice_from_kernel(kernel, r: int, prec: int, logs: "_ElementLogs") -> "_LogLattice | None":
    """Log lattice of the kernel units, or None if it has not stabilised at full rank."""
    lat: _LogLattice | None = None
    stable = 0
    for k in sorted(kernel, key=lambda k: sum(abs(e) for e in k.values())):
        bits = sum(abs(e) for e in k.values()).bit_length()
        if bits > MAX_KERNEL_BITS:
            break
        if lat is None or lat.prec < prec + bits + 32:
            lat = _rebuild_lattice(lat, r, prec + bits + 64, logs)
        grew = None
        while grew is None:
            lv, _ = logs.combine(k, lat.prec)
            try:
                grew = lat.add(k, lv)
            except ArithmeticError:
                # large enlargement index: more bits resolve the denominators
                if 2 * lat.prec > MAX_LATTICE_PREC:
                    grew = False
                else:
                    lat = _rebuild_lattice(lat, r, 2 * lat.prec, logs)
        stable = 0 if grew else stable + 1
        if len(lat.basis) == r and stable >= KERNEL_STABLE:
            return lat
    return None


KERNEL_STABLE = 6
MAX_KERNEL_BITS = 2048
MAX_LATTICE_PREC = 8192


def _rebuild_lattice(old: "_LogLattice | None", r: int, prec: int, logs: "_ElementLogs") -> "_LogLattice":
    """A lattice at higher precision holding the same generators."""
    prec = -(-prec // 64) * 64
    lat = _LogLattice(r, prec)
    if old is not None:
        for exps, _ in old.basis:
            lv, _ = logs.combine(exps, prec)
            lat.add(exps, lv)
    return lat


class _ElementLogs:
    """log|sigma_k| and sign/argument data of sieve elements, cached per precision."""

    def __init__(self, order: NumberFieldOrder, elements: list[Elt]):
        self.order = order
        self.elements = elements
        self.r1 = order.signature[0]
        self.data: dict[int, tuple[int, list, list]] = {}

    def get(self, j: int, prec: int) -> tuple[list, list]:
        cur = self.data.get(j)
        if cur is None or cur[0] < prec:
            prec = -(-prec // 256) * 256
            vals = self.order.embed(self.elements[j], prec)
            with mpmath.workprec(prec + 16):
                lg = [(1 if k < self.r1 else 2) * mpmath.log(abs(v)) for k, v in enumerate(vals)]
                ar = [bool(v < 0) if k < self.r1 else mpmath.arg(v) for k, v in enumerate(vals)]
            cur = (prec, lg, ar)
            self.data[j] = cur
        return cur[1], cur[2]

    def combine(self, exps: dict[int, int], prec: int) -> tuple[list, list]:
        """Log vector and embeddings of prod elements[j]**exps[j], ``prec`` absolute bits."""
        r1 = self.r1
        places = r1 + self.order.signature[1]
        size = sum(abs(e) for e in exps.values())
        p = prec + size.bit_length() + 16
        parts = {j: self.get(j, p) for j in exps}
        with mpmath.workprec(p):
            lv = [mpmath.fsum(e * parts[j][0][k] for j, e in exps.items()) for k in range(places)]
        with mpmath.workprec(prec + 16):
            vals = []
            for k in range(places):
                if k < r1:
                    neg = sum(e for j, e in exps.items() if parts[j][1][k]) % 2
                    vals.append((-1 if neg else 1) * mpmath.exp(lv[k]))
                else:
                    with mpmath.workprec(p):
                        ang = mpmath.fsum(e * parts[j][1][k] for j, e in exps.items())
                    vals.append(mpmath.exp(lv[k] / 2) * mpmath.expj(ang))
        return lv, vals


def _explicit_units(order: NumberFieldOrder, logs: _ElementLogs, lat: "_LogLattice") -> list[Elt]:
    out = []
    for exps, lv in lat.basis:
        need = _needed_bits(lv)
        u = None
        for _ in range(4):
            _, vals = logs.combine(exps, need)
            cand = _reconstruct(order, vals, need)
            if cand is not None and abs(order.norm(cand)) == 1:
                u = cand
                break
            need *= 2
        if u is None:
            raise ArithmeticError("explicit unit reconstruction failed")
        out.append(u)
    return out


# --------------------------------------------------------------------------
# saturation / certification
# --------------------------------------------------------------------------


SMYTH_LOG = 0.28119957432296  # log of the real root of x^3 - x - 1
FRIEDMAN_BOUND = 0.2052


def regulator_lower_bound(disc: int, signature: tuple[int, int], constant: float | Fraction | None = None) -> float:
    """Unconditional lower bound for the regulator of the maximal order.

    Totally real cubic: ``constant * log(D/4)**2`` (Cusick, constant 1/16).
    Complex cubic: ``log((|D| - 24)/4) / 3`` (Artin), never below the log
    of the smallest Pisot number (Smyth). Real quadratic:
    ``log((sqrt(D-4) + sqrt(D))/2)``. Every other field: 0.2052 (Friedman).
    The constant rescales the non-Cusick bounds relative to the default
    1/16; a constant <= 0 disables certification (returns 0).
    """
    c = CUSICK_CONSTANT if constant is None else Fraction(constant).limit_denominator(10**9)
    if c <= 0:
        return 0.0
    D = abs(disc)
    rel = float(c / CUSICK_CONSTANT)
    if signature == (3, 0):
        cusick = float(c) * math.log(D / 4) ** 2 if D > 4 else 0.0
        return max(cusick, rel * FRIEDMAN_BOUND)
    if signature == (1, 1):
        artin = math.log((D - 24) / 4) / 3 if D > 28 else 0.0
        return rel * max(artin, SMYTH_LOG)
    if signature == (2, 0):
        return rel * math.log((math.sqrt(D - 4) + math.sqrt(D)) / 2) if D > 4 else 0.0
    return rel * FRIEDMAN_BOUND


def _mu_dlog(x: int, zeta: int, q: int, ell: int) -> int | None:
    """Discrete log of x to base zeta (order q) mod ell by baby-step giant-step."""
    m = math.isqrt(q) + 1
    table = {}
    cur = 1
    for j in range(m):
        table.setdefault(cur, j)
        cur = cur * zeta % ell
    giant = pow(zeta, -m, ell)
    y = x
    for i in range(m + 1):
        if y in table:
            return (i * m + table[y]) % q
        y = y * giant % ell
    return None


def _character_rows(order: NumberFieldOrder, gens: Sequence[Elt], q: int, fb: _FactorBase, start: int, count: int):
    """Yield dlog rows of the q-th power residue symbol at degree-1 primes ell = 1 mod q."""
    k = max(start // q, 1)
    produced = 0
    while produced < count:
        ell = k * q + 1
        k += 1
        if ell <= start or ell in fb.bad or not arith.is_prime(ell):
            continue
        for r in arith.roots_mod_p(list(fb.gen_poly.coeffs), ell):
            ideal = fb.make_ideal(ell, r)
            e = (ell - 1) // q
            g = 2
            while pow(g, e, ell) == 1:
                g += 1
            zeta = pow(g, e, ell)
            row = []
            for u in gens:
                val = fb.phi(ideal, u)
                if val == 0:
                    row = None
                    break
                row.append(_mu_dlog(pow(val, e, ell), zeta, q, ell))
            if row is not None:
                produced += 1
                yield row
                break


def _q_saturated(order, fb, gens, q, start, extra=8) -> list[int] | None:
    """None if the characters prove q-saturation, else a candidate kernel vector."""
    rows: list[list[int]] = []
    rank = 0
    stale = 0
    for row in _character_rows(order, gens, q, fb, start, 10**9):
        rows.append(row)
        new_rank = len(gens) - len(kernel_mod_p([list(c) for c in zip(*rows)], q))
        if new_rank == len(gens):
            return None
        stale = stale + 1 if new_rank == rank else 0
        rank = new_rank
        if stale >= extra:
            break
    ker = kernel_mod_p([list(c) for c in zip(*rows)], q)
    return ker[0]


def _try_root(order: NumberFieldOrder, gens: list[Elt], exps: list[int], q: int, max_branches: int = 4096) -> Elt | None:
    """A q-th root of prod gens**exps (times a unit power), or None.

    The exponents are shifted to (-q/2, q/2] by whole multiples of q, the
    root is rebuilt from its embeddings and accepted only if it is an
    algebraic integer of norm +-1.
    """
    r1, r2 = order.signature
    places = r1 + r2
    ks = [round(Fraction(e, q)) for e in exps]
    shifted = [e - q * k for e, k in zip(exps, ks)]
    pb = 64
    while True:
        embs = [order.embed(u, pb + 2 * _coeff_bits(u) + 32) for u in gens]
        with mpmath.workprec(pb + 16):
            glogs = [[(1 if k < r1 else 2) * mpmath.log(abs(em[k])) if em[k] else mpmath.inf for k in range(places)] for em in embs]
            # each generator is a unit, so its log row must sum to zero
            if any(not mpmath.isfinite(mpmath.fsum(g)) or abs(mpmath.fsum(g)) > mpmath.mpf(2) ** (-pb // 2) for g in glogs):
                pb *= 2
                continue
            lv = []
            for k in range(places):
                acc = mpmath.mpf(0)
                for e, em in zip(shifted, embs):
                    if e:
                        acc += e * mpmath.log(abs(em[k]))
                lv.append(acc / q)
        need = _needed_bits(lv) + 32
        if need <= pb:
            break
        pb = need
    with mpmath.workprec(pb + 16):
        real_signs = []
        for k in range(r1):
            neg = sum(e for e, em in zip(shifted, embs) if em[k] < 0) % 2
            real_signs.append(-1 if neg else 1)
        cplx_args = [mpmath.fsum(e * mpmath.arg(em[k]) for e, em in zip(shifted, embs)) for k in range(r1, places)]
    if q == 2:
        if any(s < 0 for s in real_signs):
            return None
        # a root and its negative are equivalent; fix the first sign
        sign_choices = [[1] + [(-1 if (mask >> k) & 1 else 1) for k in range(r1 - 1)] for mask in range(1 << max(r1 - 1, 0))]
        if r1 == 0:
            sign_choices = [[]]
    else:
        sign_choices = [real_signs]
    if q**r2 > max_branches:
        return None
    branch_choices = [()]
    for _ in range(r2):
        branch_choices = [b + (j,) for b in branch_choices for j in range(q)]
    for signs in sign_choices:
        for br in branch_choices:
            with mpmath.workprec(pb + 16):
                vals = [signs[k] * mpmath.exp(lv[k]) for k in range(r1)]
                for idx, k in enumerate(range(r1, places)):
                    ang = (cplx_args[idx] + 2 * mpmath.pi * br[idx]) / q
                    vals.append(mpmath.exp(lv[k] / 2) * mpmath.expj(ang))
            cand = _reconstruct(order, vals, pb)
            if cand is not None and abs(order.norm(cand)) == 1:
                return cand
    return None


def _primes_upto(m: int) -> list[int]:
    return list(arith.small_primes(m + 1))


def saturate_and_certify(us: UnitSystem, lower_bound_constant=None, max_index_bound: int = MAX_INDEX_BOUND) -> UnitSystem:
    """Saturate the unit system at every prime q <= regulator / R_lower.

    Whenever the power-residue characters fail to separate the units mod
    q-th powers, a q-th root is extracted from the embeddings and the lattice
    is enlarged. The result is certified when every prime passes.
    """
    order = us.order
    units = list(us.units)
    rl = regulator_lower_bound(order.disc, order.signature, lower_bound_constant)
    if rl <= 0:
        return _with_status(us, False, "inconclusive: no positive regulator lower bound", None)
    fb = _FactorBase(order, 2)
    prec = us.precision_bits
    w, zeta = us.torsion, us.torsion_generator
    for _ in range(200):
        m = max(1, int(float(us.regulator) / rl))
        if m > max_index_bound:
            return _with_status(us, False, f"inconclusive: index bound {m} exceeds cap", m)
        root = None
        for q in _primes_upto(m):
            found = _saturate_at(order, fb, units, w, zeta, q)
            if found == "ok":
                continue
            if found is None:
                return _with_status(us, False, f"not-saturated: no {q}-th root extracted", m)
            root = found
            break
        if root is None:
            return _with_status(us, True, "certified", m)
        units = _reduce_units(order, _replace_with_root(order, units, root, prec), prec)
        us = _make_system(order, units, prec, w, zeta, False, us.status)
    return _with_status(us, False, "not-saturated: too many enlargements", None)


def _saturate_at(order, fb, units, w, zeta, q):
    """"ok" if q-saturated, a new unit (a q-th root) if not, None if undecided."""
    use_zeta = w % q == 0
    gens = ([zeta] if use_zeta else []) + list(units)
    start = 1000
    ker = _q_saturated(order, fb, gens, q, start)
    if ker is None:
        return "ok"
    exps = [int(c) for c in ker]
    root = _try_root(order, gens, exps, q)
    if root is not None:
        return root
    # the characters may just have been unlucky: look at more primes
    if _q_saturated(order, fb, gens, q, start * 50, extra=40) is None:
        return "ok"
    return None


def _replace_with_root(order: NumberFieldOrder, units: list[Elt], root: Elt, prec: int) -> list[Elt]:
    atoms = units + [root]
    lat = _LogLattice(len(units), max(prec, 256))
    for j, u in enumerate(atoms):
        lat.add({j: 1}, unit_logs(order, u, max(prec, 256)))
    return [_product(order, atoms, exps) for exps, _ in lat.basis]


def _with_status(us: UnitSystem, certified: bool, status: str, m) -> UnitSystem:
    return UnitSystem(
        us.order, us.units, us.log_matrix, us.regulator, us.error_bound, certified, us.signature,
        us.precision_bits, us.torsion, us.torsion_generator, status, m,
    )


def certify_fundamental(us: UnitSystem, lower_bound_constant=None) -> CertificationReport:
    """Check, without modifying the system, that its units are fundamental."""
    rl = regulator_lower_bound(us.order.disc, us.signature, lower_bound_constant)
    if us.rank == 0:
        return CertificationReport(True, "certified", rl, 1)
    if rl <= 0:
        return CertificationReport(False, "inconclusive", rl, None)
    m = max(1, int(float(us.regulator) / rl))
    if m > MAX_INDEX_BOUND:
        return CertificationReport(False, "inconclusive", rl, m)
    fb = _FactorBase(us.order, 2)
    checked = 0
    for q in _primes_upto(m):
        found = _saturate_at(us.order, fb, us.units, us.torsion, us.torsion_generator, q)
        checked += 1
        if found == "ok":
            continue
        status = "inconclusive" if found is None else "not-saturated"
        return CertificationReport(False, status, rl, m, checked, q)
    return CertificationReport(True, "certified", rl, m, checked)


# --------------------------------------------------------------------------
# suborders and reduction modulo p
# --------------------------------------------------------------------------


def _norm_one(order: NumberFieldOrder, u: Elt) -> Elt:
    """u or -u, whichever has norm +1 (odd degree); u itself otherwise."""
    if order.norm(u) == 1:
        return tuple(u)
    if order.degree % 2 == 1:
        return tuple(-c for c in u)
    raise ValueError("unit of norm -1 in even degree has no norm-one sign twist")


def _is_one_mod(x: Elt, m: int) -> bool:
    return x[0] % m == 1 % m and all(c % m == 0 for c in x[1:])


def _group_exponent(p: int, n: int) -> int:
    """An exponent of (O/pO)^* for an order O of degree n."""
    e = 1
    for f in range(1, n + 1):
        e = math.lcm(e, p**f - 1)
    k = 1
    while p**k < n:
        k += 1
    return e * p ** (k if n > 1 else 0)


def _mult_order(order: NumberFieldOrder, x: Elt, m: int, exponent: int, fac: dict[int, int]) -> int:
    """Multiplicative order of x in (O/mO)^* given an exponent of the group and its factorisation."""
    n = exponent
    if not _is_one_mod(order.pow_mod(x, n, m), m):
        raise ArithmeticError("group exponent does not annihilate the element")
    for ell in fac:
        while n % ell == 0 and _is_one_mod(order.pow_mod(x, n // ell, m), m):
            n //= ell
    return n


def _key(x: Elt, m: int) -> tuple[int, ...]:
    return tuple(c % m for c in x)


def _dlog_prime_order(order, g: Elt, h: Elt, ell: int, m: int) -> int | None:
    """k with g^k = h where g has prime order ell, or None (baby-step giant-step)."""
    step = math.isqrt(ell) + 1
    table: dict[tuple[int, ...], int] = {}
    cur = _key(order.one, m)
    for j in range(step):
        table.setdefault(cur, j)
        cur = _key(order.mul_mod(cur, g, m), m)
    giant = order.pow_mod(g, ell - step % ell, m)  # g^(-step)
    y = _key(h, m)
    for i in range(step + 1):
        if y in table:
            return (i * step + table[y]) % ell
        y = _key(order.mul_mod(y, giant, m), m)
    return None


def _in_cyclic(order, x: Elt, n: int, fac: dict[int, int], y: Elt, m: int) -> bool:
    """Whether y lies in the cyclic group generated by x (of order n), via Pohlig-Hellman."""
    if not _is_one_mod(order.pow_mod(y, n, m), m):
        return False
    for ell, e in fac.items():
        pe = ell**e
        xl = order.pow_mod(x, n // pe, m)
        yl = order.pow_mod(y, n // pe, m)
        gamma = order.pow_mod(xl, pe // ell, m)  # order ell
        k = 0
        for i in range(e):
            inv_part = order.pow_mod(xl, (pe - k) % pe, m)
            hk = order.pow_mod(order.mul_mod(yl, inv_part, m), pe // ell ** (i + 1), m)
            d = _dlog_prime_order(order, gamma, hk, ell, m)
            if d is None:
                return False
            k += d * ell**i
        if _key(order.pow_mod(xl, k, m), m) != _key(yl, m):
            return False
    return True


def unit_index_mod_p(us: UnitSystem, p: int, norm_one: bool = False) -> int:
    """Index of {v : prod u_j^v_j == 1 mod p*O} in Z^rank.

    Equivalently the size of the subgroup of (O/pO)^* generated by the unit
    images. With ``norm_one`` each unit is first replaced by the one of
    u, -u with norm +1. Supports rank <= 2.
    """
    order = us.order
    if not arith.is_prime(p):
        raise ValueError(f"{p} is not prime")
    if order.index % p == 0:
        raise BadPrimeError(f"{p} divides the order index {order.index}")
    units = [_norm_one(order, u) if norm_one else tuple(u) for u in us.units]
    if not units:
        return 1
    if len(units) > 2:
        raise NotImplementedError("unit_index_mod_p supports rank <= 2")
    expo = _group_exponent(p, order.degree)
    fac = arith.factorint(expo)
    n1 = _mult_order(order, units[0], p, expo, fac)
    if len(units) == 1:
        return n1
    fac1 = arith.factorint(n1) if n1 > 1 else {}
    n2 = _mult_order(order, units[1], p, expo, fac)
    k = n2
    for ell in arith.factorint(n2) if n2 > 1 else {}:
        while k % ell == 0 and _in_cyclic(order, units[0], n1, fac1, order.pow_mod(units[1], k // ell, p), p):
            k //= ell
    return n1 * k


def suborder_units(us: UnitSystem, sub: NumberFieldOrder, max_checks: int = 2_000_000) -> tuple[UnitSystem, int]:
    """Units of a finite-index suborder, from those of the ambient order.

    Returns the suborder's unit system and the index of its free part in
    the ambient unit group. Membership is decided in O/cO with
    c = [O : sub], since c*O lies in the suborder.
    """
    big = us.order
    if sub.poly != big.poly:
        raise ValueError("suborder must share the defining polynomial")
    c_frac = Fraction(big.index) / Fraction(sub.index)
    if c_frac.denominator != 1:
        raise ValueError("not a suborder")
    c = int(c_frac)
    n = big.degree
    r = us.rank

    def in_sub(x: Elt) -> bool:
        return all(v.denominator == 1 for v in big.coords_in(sub, x))

    if c == 1 or r == 0:
        units = [tuple(int(v) for v in big.coords_in(sub, u)) for u in us.units]
        return _make_system(sub, units, us.precision_bits, us.torsion, _to_sub(big, sub, us.torsion_generator), us.certified, us.status, us.index_bound), 1

    def red(x):
        return tuple(v % c for v in x)

    orders = []
    for u in us.units:
        k, y = 1, red(u)
        while not in_sub(y) and k <= c**n:
            y = red(big.mul_mod(y, u, c))
            k += 1
        orders.append(k)
    total = 1
    for k in orders:
        total *= k
    if total > max_checks:
        raise BadPrimeError(f"suborder membership search needs {total} checks (cap {max_checks})")
    found = [[k if i == j else 0 for j in range(r)] for i, k in enumerate(orders)]
    powers = []
    for u, k in zip(us.units, orders):
        row, y = [], red(big.one)
        for _ in range(k):
            row.append(y)
            y = red(big.mul_mod(y, u, c))
        powers.append(row)

    def walk(i, acc, vec):
        if i == r:
            if any(vec) and in_sub(acc):
                found.append(list(vec))
            return
        for e in range(orders[i]):
            walk(i + 1, red(big.mul_mod(acc, powers[i][e], c)), vec + [e])

    walk(0, red(big.one), [])
    from .intlinalg import hnf_rows

    h = hnf_rows(found)
    index = abs(det_bareiss(h))
    units_big = [_product(big, list(us.units), dict(enumerate(row))) for row in h]
    units = [tuple(int(v) for v in big.coords_in(sub, u)) for u in units_big]
    units = _reduce_units(sub, units, us.precision_bits)
    sys = _make_system(sub, units, us.precision_bits, us.torsion, _to_sub(big, sub, us.torsion_generator), us.certified, us.status, us.index_bound)
    return sys, index


def _to_sub(big: NumberFieldOrder, sub: NumberFieldOrder, x: Elt | None) -> Elt | None:
    if x is None:
        return None
    coords = big.coords_in(sub, x)
    if any(v.denominator != 1 for v in coords):
        return None
    return tuple(int(v) for v in coords)
