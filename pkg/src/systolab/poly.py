"""Integer polynomials, discriminants and certified real-root isolation."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath

from .intlinalg import det_bareiss

MAX_PRECISION_BITS = 1 << 15


class NotSquarefreeError(ValueError):
    pass


class PrecisionExhaustedError(ArithmeticError):
    pass


@dataclass(frozen=True)
class IntPoly:
    """Polynomial with integer coefficients, stored low-to-high degree."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = tuple(int(x) for x in self.coeffs)
        while len(c) > 1 and c[-1] == 0:
            c = c[:-1]
        object.__setattr__(self, "coeffs", c)
        if len(c) < 2:
            raise ValueError("IntPoly needs degree >= 1")

    @classmethod
    def from_high(cls, coeffs: Sequence[int]) -> "IntPoly":
        return cls(tuple(reversed(list(coeffs))))

    @classmethod
    def parse(cls, text: str) -> "IntPoly":
        """Parse expressions like ``"x^3 - x^2 - 2x - 8"`` or ``"-3*x + x^2 + 1"``."""
        s = re.sub(r"\s+", "", text).replace("**", "^").replace("*", "")
        if not s:
            raise ValueError("empty polynomial")
        if s[0] not in "+-":
            s = "+" + s
        terms = re.findall(r"[+-][^+-]+", s)
        if "".join(terms) != s:
            raise ValueError(f"cannot parse polynomial {text!r}")
        out: dict[int, int] = {}
        for t in terms:
            m = re.fullmatch(r"([+-])(\d*)(x(?:\^(\d+))?)?", t)
            if not m or (not m.group(2) and not m.group(3)):
                raise ValueError(f"bad term {t!r} in {text!r}")
            sign = -1 if m.group(1) == "-" else 1
            coef = int(m.group(2)) if m.group(2) else 1
            deg = 0 if not m.group(3) else int(m.group(4) or 1)
            out[deg] = out.get(deg, 0) + sign * coef
        n = max(out)
        return cls(tuple(out.get(i, 0) for i in range(n + 1)))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> int:
        return self.coeffs[-1]

    def is_monic(self) -> bool:
        return self.lc == 1

    def __call__(self, x):
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "IntPoly":
        return IntPoly(tuple(i * c for i, c in enumerate(self.coeffs))[1:] or (0, 0))

    def __str__(self) -> str:
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mag = abs(c)
            if i == 0:
                body = str(mag)
            else:
                body = ("" if mag == 1 else str(mag)) + ("x" if i == 1 else f"x^{i}")
            parts.append(("-" if c < 0 else "+") + " " + body)
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


# --- rational polynomial helpers (coefficient lists low-to-high) ----------


def _qtrim(f: list[Fraction]) -> list[Fraction]:
    while f and f[-1] == 0:
        f.pop()
    return f


def _qrem(f: list[Fraction], g: list[Fraction]) -> list[Fraction]:
    f = list(f)
    while len(f) >= len(g) and f:
        c = f[-1] / g[-1]
        k = len(f) - len(g)
        for i, gc in enumerate(g):
            f[k + i] -= c * gc
        f.pop()
        _qtrim(f)
    return f


def poly_gcd_q(f: IntPoly, g: IntPoly) -> list[Fraction]:
    a = [Fraction(c) for c in f.coeffs]
    b = _qtrim([Fraction(c) for c in g.coeffs])
    while b:
        a, b = b, _qrem(a, b)
    return [c / a[-1] for c in a]


def is_squarefree(f: IntPoly) -> bool:
    return len(poly_gcd_q(f, f.derivative())) == 1


def resultant(f: IntPoly, g: IntPoly) -> int:
    """Resultant via the Sylvester determinant."""
    m, n = f.degree, g.degree
    fh = list(reversed(f.coeffs))
    gh = list(reversed(g.coeffs))
    size = m + n
    rows = []
    for i in range(n):
        rows.append([0] * i + fh + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + gh + [0] * (size - n - 1 - i))
    return det_bareiss(rows)


def poly_discriminant(f: IntPoly) -> int:
    """Exact discriminant ``(-1)^(n(n-1)/2) Res(f, f') / lc(f)``."""
    n = f.degree
    if n < 2:
        raise ValueError("discriminant needs degree >= 2")
    r = resultant(f, f.derivative())
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    q, rem = divmod(sign * r, f.lc)
    assert rem == 0
    return q


# --- Sturm sequences ------------------------------------------------------


def sturm_sequence(f: IntPoly) -> list[list[Fraction]]:
    p0 = [Fraction(c) for c in f.coeffs]
    p1 = [Fraction(c) for c in f.derivative().coeffs]
    seq = [p0, _qtrim(p1)]
    while len(seq[-1]) > 1:
        r = _qrem(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-c for c in r])
    return seq


def _eval_q(f: list[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(f):
        acc = acc * x + c
    return acc


def _sign_changes(vals: list) -> int:
    signs = [v > 0 for v in vals if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count(seq: list[list[Fraction]], a: Fraction, b: Fraction) -> int:
    """Number of distinct real roots in the half-open interval (a, b]."""
    va = _sign_changes([_eval_q(p, a) for p in seq])
    vb = _sign_changes([_eval_q(p, b) for p in seq])
    return va - vb


def root_bound(f: IntPoly) -> Fraction:
    """Cauchy bound: every root has modulus < the returned value."""
    lc = abs(f.lc)
    return 1 + Fraction(max(abs(c) for c in f.coeffs[:-1]), lc)


@dataclass(frozen=True)
class RealRootIsolation:
    """Disjoint rational intervals (lo, hi], one per real root, ordered."""

    poly: IntPoly
    intervals: tuple[tuple[Fraction, Fraction], ...]
    precision_bits: int

    @property
    def count(self) -> int:
        return len(self.intervals)

    def values(self, prec: int | None = None) -> list[mpmath.mpf]:
        """Root values to ``prec`` bits (defaults to the isolation precision)."""
        prec = prec or self.precision_bits
        out = []
        for lo, hi in self.intervals:
            lo, hi = refine_root(self.poly, (lo, hi), prec + 8)
            with mpmath.workprec(prec + 16):
                out.append(mpmath.mpf(lo.numerator) / lo.denominator / 2 + mpmath.mpf(hi.numerator) / hi.denominator / 2)
        return out


def sturm_real_roots(f: IntPoly, precision_bits: int = 64) -> RealRootIsolation:
    """Certified isolation of the real roots of a squarefree integer polynomial.

    Each returned interval (lo, hi] contains exactly one root (Sturm count 1)
    and is refined until its width is at most ``2**-precision_bits``.
    """
    if precision_bits < 32:
        raise ValueError("precision_bits must be >= 32")
    if precision_bits > MAX_PRECISION_BITS:
        raise PrecisionExhaustedError(f"requested {precision_bits} bits > max {MAX_PRECISION_BITS}")
    if not is_squarefree(f):
        raise NotSquarefreeError(f"{f} is not squarefree")
    seq = sturm_sequence(f)
    bound = root_bound(f)
    # power-of-two bound keeps every bisection point dyadic
    k = 1
    while k < bound:
        k *= 2
    todo = [(Fraction(-k), Fraction(k))]
    found = []
    while todo:
        lo, hi = todo.pop()
        c = sturm_count(seq, lo, hi)
        if c == 0:
            continue
        if c == 1:
            found.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        todo.extend([(lo, mid), (mid, hi)])
    found.sort()
    refined = tuple(refine_root(f, iv, precision_bits, seq) for iv in found)
    return RealRootIsolation(f, refined, precision_bits)


def refine_root(
    f: IntPoly,
    interval: tuple[Fraction, Fraction],
    bits: int,
    seq: list[list[Fraction]] | None = None,
) -> tuple[Fraction, Fraction]:
    """Shrink an isolating interval (lo, hi] to width <= 2**-bits.

    Newton at ``bits`` precision proposes a point; the answer is accepted only
    after an exact sign/Sturm check, otherwise falls back to bisection.
    """
    lo, hi = interval
    width = Fraction(1, 1 << bits)
    if hi - lo <= width:
        return lo, hi
    if bits > MAX_PRECISION_BITS:
        raise PrecisionExhaustedError(f"cannot refine to {bits} bits")
    # bisect to a modest width first so Newton starts in its basin
    lo, hi = _bisect(f, lo, hi, Fraction(1, 1 << 20), seq)
    if hi - lo <= width:
        return lo, hi
    with mpmath.workprec(bits + 32):
        x = mpmath.mpf(lo.numerator) / lo.denominator
        x = (x + mpmath.mpf(hi.numerator) / hi.denominator) / 2
        fp = f.derivative()
        for _ in range(4 * bits.bit_length() + 8):
            step = f(x) / fp(x)
            x -= step
            if abs(step) < mpmath.ldexp(1, -bits - 8):
                break
        m, e = mpmath.frexp(x)
        r = Fraction(int(mpmath.ldexp(m, bits + 8)), 1) * Fraction(2) ** (e - bits - 8)
    a, b = r - width / 4, r + width / 4
    if lo < a and b <= hi:
        fa, fb = f(a), f(b)
        if fb == 0 or (fa != 0 and (fa > 0) != (fb > 0)):
            return a, b
    return _bisect(f, lo, hi, width, seq)


def _bisect(f: IntPoly, lo: Fraction, hi: Fraction, width: Fraction, seq=None) -> tuple[Fraction, Fraction]:
    if f(hi) == 0:
        return hi - width / 2, hi
    seq = seq or sturm_sequence(f)
    while hi - lo > width:
        mid = (lo + hi) / 2
        fm = f(mid)
        if fm == 0:
            return mid - width / 2, mid
        if sturm_count(seq, lo, mid):
            hi = mid
        else:
            lo = mid
    return lo, hi


def complex_roots(f: IntPoly, prec: int) -> list[mpmath.mpc]:
    """All roots numerically (non-certified), real parts first then by imag part."""
    with mpmath.workprec(prec + 32):
        roots = mpmath.polyroots(list(reversed(f.coeffs)), maxsteps=200 + prec, extraprec=prec + 64)
    return sorted((mpmath.mpc(r) for r in roots), key=lambda z: (abs(z.imag) > 0, float(z.real), float(z.imag)))
