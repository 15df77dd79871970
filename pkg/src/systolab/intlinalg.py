"""Exact linear algebra over Z, Q and F_p for small dense matrices.

Matrices are lists of rows. Everything here is exact. Dimensions in this
package never exceed a handful of rows, so no attempt is made at asymptotic
efficiency beyond keeping LLL all-integer.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[int]]


def det_bareiss(m: Sequence[Sequence[int]]) -> int:
    """Determinant of an integer matrix by fraction-free elimination."""
    a = [list(r) for r in m]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * a[-1][-1]


def det_fraction(m: Sequence[Sequence[Fraction]]) -> Fraction:
    a = [[Fraction(x) for x in r] for r in m]
    n = len(a)
    d = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            d = -d
        d *= a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            if f:
                for j in range(k, n):
                    a[i][j] -= f * a[k][j]
    return d


def inverse_fraction(m: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(m)
    a = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(m)]
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[k], a[piv] = a[piv], a[k]
        inv = 1 / a[k][k]
        a[k] = [x * inv for x in a[k]]
        for i in range(n):
            if i != k and a[i][k]:
                f = a[i][k]
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return [r[n:] for r in a]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(r, c)) for c in bt] for r in a]


def vecmat(v: Sequence, m: Sequence[Sequence]) -> list:
    """Row vector times matrix."""
    return [sum(v[i] * m[i][j] for i in range(len(v))) for j in range(len(m[0]))]


def hnf_rows(rows: Sequence[Sequence[int]]) -> Matrix:
    """Row Hermite normal form; zero rows dropped.

    The result is upper triangular with positive pivots and entries above each
    pivot reduced into [0, pivot).
    """
    a = [list(r) for r in rows if any(r)]
    if not a:
        return []
    ncols = len(a[0])
    out: Matrix = []
    col = 0
    while a and col < ncols:
        nz = [r for r in a if r[col]]
        if not nz:
            col += 1
            continue
        zero = [r for r in a if not r[col]]
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            rest = []
            for r in nz[1:]:
                q = r[col] // piv[col]
                r = [x - q * y for x, y in zip(r, piv)]
                if r[col]:
                    rest.append(r)
                elif any(r):
                    zero.append(r)
            nz = [piv] + rest
        piv = nz[0]
        if piv[col] < 0:
            piv = [-x for x in piv]
        out.append(piv)
        a = zero
        col += 1
    for i in range(len(out)):
        c = next(j for j, x in enumerate(out[i]) if x)
        for k in range(i):
            q = out[k][c] // out[i][c]
            if q:
                out[k] = [x - q * y for x, y in zip(out[k], out[i])]
    return out


def hnf_with_transform(rows: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix]:
    """HNF of ``rows`` together with a unimodular U such that U*rows = H.

    Zero rows of H are kept at the bottom, so the last rows of U span the
    integer left kernel.
    """
    m = len(rows)
    aug = [list(r) + [int(i == j) for j in range(m)] for i, r in enumerate(rows)]
    n = len(rows[0]) if rows else 0
    h = _hnf_keep_zero(aug, n)
    return [r[:n] for r in h], [r[n:] for r in h]


def _hnf_keep_zero(a: Matrix, ncols: int) -> Matrix:
    a = [list(r) for r in a]
    m = len(a)
    top = 0
    for col in range(ncols):
        while True:
            idx = [i for i in range(top, m) if a[i][col]]
            if not idx:
                break
            i0 = min(idx, key=lambda i: abs(a[i][col]))
            a[top], a[i0] = a[i0], a[top]
            done = True
            for i in range(top + 1, m):
                if a[i][col]:
                    q = a[i][col] // a[top][col]
                    a[i] = [x - q * y for x, y in zip(a[i], a[top])]
                    if a[i][col]:
                        done = False
            if done:
                break
        if top < m and a[top][col]:
            if a[top][col] < 0:
                a[top] = [-x for x in a[top]]
            for k in range(top):
                q = a[k][col] // a[top][col]
                if q:
                    a[k] = [x - q * y for x, y in zip(a[k], a[top])]
            top += 1
    return a


def solve_fraction(a: Sequence[Sequence], b: Sequence) -> list[Fraction]:
    """Solve x*A = b for a row vector x (A square, nonsingular)."""
    inv = inverse_fraction(a)
    return vecmat([Fraction(x) for x in b], inv)


def kernel_mod_p(rows: Sequence[Sequence[int]], p: int) -> Matrix:
    """Basis of {x in F_p^m : x*A = 0} for the m x n matrix A given by ``rows``."""
    m = len(rows)
    n = len(rows[0]) if m else 0
    # column-reduce the transpose: solve A^T x = 0
    at = [[rows[i][j] % p for i in range(m)] for j in range(n)]
    pivots = []
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, n) if at[i][c]), None)
        if piv is None:
            continue
        at[r], at[piv] = at[piv], at[r]
        inv = pow(at[r][c], -1, p)
        at[r] = [x * inv % p for x in at[r]]
        for i in range(n):
            if i != r and at[i][c]:
                f = at[i][c]
                at[i] = [(x - f * y) % p for x, y in zip(at[i], at[r])]
        pivots.append(c)
        r += 1
        if r == n:
            break
    free = [c for c in range(m) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * m
        v[fc] = 1
        for i, pc in enumerate(pivots):
            v[pc] = (-at[i][fc]) % p
        basis.append(v)
    return basis


def rank_mod_p(rows: Sequence[Sequence[int]], p: int) -> int:
    if not rows:
        return 0
    return len(rows) - len(kernel_mod_p(rows, p))


def lll(basis: Sequence[Sequence[int]], delta: Fraction = Fraction(99, 100)) -> tuple[Matrix, Matrix]:
    """LLL-reduce linearly independent integer row vectors.

    All-integer variant (subdeterminants d_i and scaled Gram-Schmidt
    coefficients). Returns ``(reduced, transform)`` with
    ``transform * basis == reduced``.
    """
    b = [list(map(int, r)) for r in basis]
    n = len(b)
    h = [[int(i == j) for j in range(n)] for i in range(n)]
    if n <= 1:
        return b, h
    num, den = delta.numerator, delta.denominator
    d = [1] + [0] * n  # d[i+1] is the Gram determinant of the first i+1 rows
    lam = [[0] * n for _ in range(n)]

    def dot(x, y):
        return sum(p * q for p, q in zip(x, y))

    def red(k: int, l: int) -> None:
        if 2 * abs(lam[k][l]) > d[l + 1]:
            q = (2 * lam[k][l] + d[l + 1]) // (2 * d[l + 1])
            b[k] = [x - q * y for x, y in zip(b[k], b[l])]
            h[k] = [x - q * y for x, y in zip(h[k], h[l])]
            lam[k][l] -= q * d[l + 1]
            for i in range(l):
                lam[k][i] -= q * lam[l][i]

    def incorporate(k: int) -> None:
        for j in range(k + 1):
            u = dot(b[k], b[j])
            for i in range(j):
                u = (d[i + 1] * u - lam[k][i] * lam[j][i]) // d[i]
            if j < k:
                lam[k][j] = u
            else:
                if u == 0:
                    raise ValueError("LLL input rows are linearly dependent")
                d[k + 1] = u

    incorporate(0)
    k, kmax = 1, 0
    while k < n:
        if k > kmax:
            kmax = k
            incorporate(k)
        red(k, k - 1)
        if den * d[k + 1] * d[k - 1] < num * d[k] ** 2 - den * lam[k][k - 1] ** 2:
            b[k], b[k - 1] = b[k - 1], b[k]
            h[k], h[k - 1] = h[k - 1], h[k]
            for j in range(k - 1):
                lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
            lmb = lam[k][k - 1]
            bnew = (d[k - 1] * d[k + 1] + lmb * lmb) // d[k]
            for i in range(k + 1, kmax + 1):
                t = lam[i][k]
                lam[i][k] = (d[k + 1] * lam[i][k - 1] - lmb * t) // d[k]
                lam[i][k - 1] = (bnew * t + lmb * lam[i][k]) // d[k + 1]
            d[k] = bnew
            k = max(1, k - 1)
        else:
            for l in range(k - 2, -1, -1):
                red(k, l)
            k += 1
    return b, h
