"""The hyperbolic congruence elements gamma_p in Gamma(p) < SL_3(Z).

The matrix is the ground truth. The closed-form polynomial that circulates
with this family is evaluated only as a cross-check, and disagreement is
reported, never raised.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from . import arith
from .intlinalg import det_bareiss
from .poly import IntPoly, PrecisionExhaustedError, complex_roots, sturm_real_roots

Matrix = tuple[tuple[int, ...], ...]


class NotPrimeError(ValueError):
    """Raised when the level is not a prime."""


@dataclass(frozen=True)
class CharpolyReport:
    """Computed characteristic polynomial next to the symbolic and printed forms."""

    computed: IntPoly
    trace: int
    minor_sum: int
    symbolic_trace: int
    symbolic_minor_sum: int
    printed: IntPoly
    matches_symbolic: bool
    agrees_with_printed: bool


@dataclass(frozen=True)
class RegularityReport:
    """Certified root data for the standard representation."""

    n_real_roots: int
    roots: tuple[float, ...]
    excludes_pm1: bool
    no_modulus_one: bool
    distinct_moduli: bool
    all_positive: bool
    product_is_one: bool
    r_regular: bool
    hyper_regular: bool
    precision_bits: int


@dataclass(frozen=True)
class CongruenceElement:
    """An integer matrix in Gamma(level) with its characteristic polynomial."""

    matrix: Matrix
    level: int
    charpoly: IntPoly
    report: CharpolyReport
    regularity: RegularityReport | None = field(default=None, compare=False)

    @property
    def det(self) -> int:
        return det_bareiss([list(r) for r in self.matrix])


def _principal_minor_sum(m: Matrix, k: int) -> int:
    n = len(m)
    total = 0
    for idx in itertools.combinations(range(n), k):
        total += det_bareiss([[m[i][j] for j in idx] for i in idx])
    return total


def charpoly_of_matrix(m: Matrix) -> IntPoly:
    """det(xI - A) as a monic integer polynomial."""
    n = len(m)
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    for k in range(1, n + 1):
        coeffs[n - k] = (-1) ** k * _principal_minor_sum(m, k)
    return IntPoly(tuple(coeffs))


def printed_charpoly(p: int) -> IntPoly:
    """The closed form 1 - (3+5p^2+4p^4)x + (3+5p^2)x^2 - x^3, negated to be monic."""
    return IntPoly((-1, 3 + 5 * p**2 + 4 * p**4, -(3 + 5 * p**2), 1))


def symbolic_charpoly(p: int) -> IntPoly:
    """x^3 - (3+2p^2)x^2 + (3+2p^2+p^4)x - 1, from cofactor expansion of the matrix."""
    return IntPoly((-1, 3 + 2 * p**2 + p**4, -(3 + 2 * p**2), 1))


def _raw_matrix(p: int) -> Matrix:
    q = p * p
    return ((1 + q, p, q), (p, 1, p), (0, p, 1 + q))


def gamma_matrix(p: int) -> CongruenceElement:
    """gamma_p with rows (1+p^2, p, p^2), (p, 1, p), (0, p, 1+p^2).

    Raises:
        NotPrimeError: if ``p`` is not prime.
    """
    if not isinstance(p, int) or not arith.is_prime(p):
        raise NotPrimeError(f"{p!r} is not prime")
    m = _raw_matrix(p)
    if det_bareiss([list(r) for r in m]) != 1:
        raise ArithmeticError("gamma_p has determinant != 1")
    if any((m[i][j] - (i == j)) % p for i in range(3) for j in range(3)):
        raise ArithmeticError("gamma_p is not congruent to I mod p")
    cp = charpoly_of_matrix(m)
    return CongruenceElement(m, p, cp, _charpoly_report(p, cp))


def _charpoly_report(p: int, cp: IntPoly) -> CharpolyReport:
    sym = symbolic_charpoly(p)
    printed = printed_charpoly(p)
    return CharpolyReport(
        computed=cp,
        trace=-cp.coeffs[2],
        minor_sum=cp.coeffs[1],
        symbolic_trace=3 + 2 * p * p,
        symbolic_minor_sum=3 + 2 * p * p + p**4,
        printed=printed,
        matches_symbolic=cp == sym,
        agrees_with_printed=cp == printed,
    )


def char_poly(elt: CongruenceElement) -> IntPoly:
    """Exact det(xI - A); the comparison with the printed form lives in ``elt.report``."""
    return charpoly_of_matrix(elt.matrix)


def has_rational_root(f: IntPoly) -> bool:
    """Rational root test for a monic integer polynomial."""
    c0 = f.coeffs[0]
    if c0 == 0:
        return True
    for d in arith.divisors(arith.factorint(abs(c0))):
        if f(d) == 0 or f(-d) == 0:
            return True
    return False


def is_irreducible_cubic(f: IntPoly) -> bool:
    """A monic cubic is irreducible over Q iff it has no rational root."""
    if f.degree != 3 or not f.is_monic():
        raise ValueError("expected a monic cubic")
    return not has_rational_root(f)


def _modulus_interval(lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    a, b = abs(lo), abs(hi)
    if lo <= 0 <= hi:
        return Fraction(0), max(a, b)
    return min(a, b), max(a, b)


def check_R_regular(target: CongruenceElement | IntPoly, precision_bits: int = 128) -> RegularityReport:
    """Certified real-root count and modulus checks for a characteristic polynomial.

    Real roots are isolated by Sturm sequences and compared through exact
    rational intervals. Non-real roots are separated numerically with a margin
    that must clear ``2**(-precision_bits/2)``.

    Raises:
        NotSquarefreeError: if the polynomial has repeated roots.
        PrecisionExhaustedError: if moduli cannot be separated.
    """
    f = target.charpoly if isinstance(target, CongruenceElement) else target
    iso = sturm_real_roots(f, precision_bits)
    n = f.degree
    excludes_pm1 = f(1) != 0 and f(-1) != 0
    real_mod = [_modulus_interval(lo, hi) for lo, hi in iso.intervals]
    all_positive = all(lo > 0 for lo, _ in iso.intervals)

    with mpmath.workprec(precision_bits + 32):
        tol = mpmath.ldexp(1, -(precision_bits // 2))
        nonreal = [z for z in complex_roots(f, precision_bits + 32) if abs(mpmath.im(z)) > tol]
        if len(nonreal) != n - iso.count:
            raise PrecisionExhaustedError("numerical roots disagree with the Sturm count")
        cmods = [abs(z) for z in nonreal]
        one = Fraction(1)
        no_mod1_real = all(not (lo <= one <= hi) for lo, hi in real_mod)
        no_mod1_cplx = True
        for m in cmods:
            if abs(m - 1) <= tol:
                no_mod1_cplx = False
        # moduli of the real roots (exact intervals) and complex roots (numerical)
        mods = [(mpmath.mpf(lo.numerator) / lo.denominator, mpmath.mpf(hi.numerator) / hi.denominator) for lo, hi in real_mod]
        mods += [(m - tol, m + tol) for m in cmods]
        distinct = True
        for (a1, b1), (a2, b2) in itertools.combinations(mods, 2):
            if not (b1 < a2 or b2 < a1):
                distinct = False
        prod_lo = prod_hi = mpmath.mpf(1)
        for a, b in mods:
            prod_lo *= a
            prod_hi *= b
        product_is_one = prod_lo <= 1 <= prod_hi
        roots = tuple(float(v) for v in iso.values(min(precision_bits, 64)))
    # Conjugate pairs always share a modulus, so distinct moduli needs all roots real.
    no_modulus_one = excludes_pm1 and no_mod1_real and no_mod1_cplx
    r_regular = iso.count == n and no_modulus_one
    hyper = r_regular and distinct
    return RegularityReport(
        n_real_roots=iso.count,
        roots=roots,
        excludes_pm1=excludes_pm1,
        no_modulus_one=no_modulus_one,
        distinct_moduli=distinct,
        all_positive=all_positive and iso.count == n,
        product_is_one=product_is_one,
        r_regular=r_regular,
        hyper_regular=hyper,
        precision_bits=precision_bits,
    )


def validate(p: int, precision_bits: int = 128) -> CongruenceElement:
    """gamma_p together with its regularity report."""
    elt = gamma_matrix(p)
    reg = check_R_regular(elt, precision_bits)
    return CongruenceElement(elt.matrix, elt.level, elt.charpoly, elt.report, reg)


def reduced_generator(elt: CongruenceElement) -> tuple[Matrix, IntPoly]:
    """B = (A - I) / level and its characteristic polynomial.

    Q[A] = Q[B], and B has far smaller entries than A.
    """
    p = elt.level
    b = tuple(tuple((elt.matrix[i][j] - (i == j)) // p for j in range(3)) for i in range(3))
    return b, charpoly_of_matrix(b)


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)) for i in range(n))


def centralizer_saturation_index(elt: CongruenceElement) -> int:
    """Index of Z[B] in M_3(Z) intersected with Q[B], where B is the reduced generator.

    Computed as the gcd of the maximal minors of the 3 x 9 matrix of I, B, B^2.
    A value of 1 means the integral centralizer of the element is exactly Z[B].
    """
    b, _ = reduced_generator(elt)
    ident = tuple(tuple(int(i == j) for j in range(3)) for i in range(3))
    rows = [[x for r in m for x in r] for m in (ident, b, _matmul(b, b))]
    g = 0
    for cols in itertools.combinations(range(9), 3):
        g = math.gcd(g, det_bareiss([[rows[i][c] for c in cols] for i in range(3)]))
        if g == 1:
            break
    return g
