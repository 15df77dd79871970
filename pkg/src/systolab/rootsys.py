"""Finite irreducible root systems and maximal strongly orthogonal subsets.

Roots are stored as tuples of ``Fraction`` in the usual orthonormal
realisations; the exceptional E types live inside the E8 lattice in R^8.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .intlinalg import inverse_fraction

Root = tuple[Fraction, ...]

_EXCEPTIONAL_RANKS = {"E": (6, 7, 8), "F": (4,), "G": (2,)}


class InvalidCartanTypeError(ValueError):
    """Raised for a family/rank pair that names no root system."""


class RootMembershipError(ValueError):
    """Raised when a vector is not a root of the given system."""


@dataclass(frozen=True, order=True)
class CartanType:
    """Cartan type such as A3 or E8."""

    family: str
    rank: int

    def __post_init__(self) -> None:
        fam, n = self.family, self.rank
        if fam not in "ABCDEFG" or len(fam) != 1:
            raise InvalidCartanTypeError(f"unknown family {fam!r}")
        if not isinstance(n, int) or n < 1:
            raise InvalidCartanTypeError(f"rank must be a positive integer, got {n!r}")
        if fam in _EXCEPTIONAL_RANKS and n not in _EXCEPTIONAL_RANKS[fam]:
            raise InvalidCartanTypeError(f"{fam}{n} does not exist")
        if fam == "D" and n < 2:
            raise InvalidCartanTypeError("D requires rank >= 2")

    @classmethod
    def parse(cls, text: str) -> "CartanType":
        """Parse strings like ``"E8"`` or ``"b3"``."""
        text = text.strip()
        if len(text) < 2 or not text[1:].isdigit():
            raise InvalidCartanTypeError(f"cannot parse Cartan type {text!r}")
        return cls(text[0].upper(), int(text[1:]))

    def __str__(self) -> str:
        return f"{self.family}{self.rank}"


@dataclass(frozen=True)
class RootSystem:
    """All roots of a Cartan type with a lexicographic positive system."""

    type: CartanType
    roots: frozenset[Root]
    positives: tuple[Root, ...]

    @property
    def dimension(self) -> int:
        return len(self.positives[0])

    def __contains__(self, v: Root) -> bool:
        return v in self.roots


@dataclass(frozen=True)
class OrthoSet:
    """A set of pairwise strongly orthogonal positive roots."""

    system: RootSystem
    members: tuple[Root, ...]
    maximal_flag: bool = field(default=True)

    def __len__(self) -> int:
        return len(self.members)


# --------------------------------------------------------------------------
# construction
# --------------------------------------------------------------------------

_H = Fraction(1, 2)


def _unit(n: int, i: int, c: int = 1) -> list[Fraction]:
    v = [Fraction(0)] * n
    v[i] = Fraction(c)
    return v


def _pm_pairs(n: int) -> list[Root]:
    """All +-e_i +- e_j with i < j."""
    out = []
    for i, j in itertools.combinations(range(n), 2):
        for si, sj in itertools.product((1, -1), repeat=2):
            v = [Fraction(0)] * n
            v[i], v[j] = Fraction(si), Fraction(sj)
            out.append(tuple(v))
    return out


def _e8() -> list[Root]:
    out = _pm_pairs(8)
    for signs in itertools.product((1, -1), repeat=8):
        if signs.count(-1) % 2 == 0:
            out.append(tuple(s * _H for s in signs))
    return out


def _dot(a: Root, b: Root) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def _raw_roots(ct: CartanType) -> list[Root]:
    fam, n = ct.family, ct.rank
    if fam == "A":
        out = []
        for i, j in itertools.permutations(range(n + 1), 2):
            v = [Fraction(0)] * (n + 1)
            v[i], v[j] = Fraction(1), Fraction(-1)
            out.append(tuple(v))
        return out
    if fam == "B":
        return _pm_pairs(n) + [tuple(_unit(n, i, s)) for i in range(n) for s in (1, -1)]
    if fam == "C":
        return _pm_pairs(n) + [tuple(_unit(n, i, 2 * s)) for i in range(n) for s in (1, -1)]
    if fam == "D":
        return _pm_pairs(n)
    if fam == "G":
        short = []
        for i, j in itertools.permutations(range(3), 2):
            v = [Fraction(0)] * 3
            v[i], v[j] = Fraction(1), Fraction(-1)
            short.append(tuple(v))
        long_ = []
        for i in range(3):
            for s in (1, -1):
                v = [Fraction(-s)] * 3
                v[i] = Fraction(2 * s)
                long_.append(tuple(v))
        return short + long_
    if fam == "F":
        out = _pm_pairs(4) + [tuple(_unit(4, i, s)) for i in range(4) for s in (1, -1)]
        out += [tuple(s * _H for s in signs) for signs in itertools.product((1, -1), repeat=4)]
        return out
    # E types: E7 centralises an A1 in E8, E6 centralises an A2.
    e8 = _e8()
    if n == 8:
        return e8
    a = tuple(Fraction(x) for x in (0, 0, 0, 0, 0, 0, -1, 1))
    b = tuple(Fraction(x) for x in (0, 0, 0, 0, 0, -1, 1, 0))
    perp = [a] if n == 7 else [a, b]
    return [r for r in e8 if all(_dot(r, w) == 0 for w in perp)]


def _is_positive(v: Root) -> bool:
    for c in v:
        if c:
            return c > 0
    return False


@lru_cache(maxsize=None)
def generate_root_system(ct: CartanType) -> RootSystem:
    """Full root system of ``ct`` with lexicographically positive roots.

    Raises:
        InvalidCartanTypeError: for a family/rank pair that does not exist.
    """
    if not isinstance(ct, CartanType):
        raise InvalidCartanTypeError(f"expected CartanType, got {ct!r}")
    roots = frozenset(_raw_roots(ct))
    positives = tuple(sorted((r for r in roots if _is_positive(r)), reverse=True))
    return RootSystem(ct, roots, positives)


def classical_root_count(ct: CartanType) -> int:
    """|Phi| from the standard closed forms."""
    n = ct.rank
    return {
        "A": n * (n + 1),
        "B": 2 * n * n,
        "C": 2 * n * n,
        "D": 2 * n * (n - 1),
        "E": {6: 72, 7: 126, 8: 240}.get(n, 0),
        "F": 48,
        "G": 12,
    }[ct.family]


def simple_roots(sys: RootSystem) -> list[Root]:
    """Positive roots that are not a sum of two positive roots."""
    pos = set(sys.positives)
    sums = {tuple(x + y for x, y in zip(a, b)) for a, b in itertools.combinations(sys.positives, 2)}
    return sorted((r for r in pos if r not in sums), reverse=True)


def heights(sys: RootSystem) -> dict[Root, int]:
    """Height (sum of simple-root coefficients) of every positive root."""
    simple = simple_roots(sys)
    gram = [[_dot(a, b) for b in simple] for a in simple]
    inv = inverse_fraction(gram)
    out = {}
    for r in sys.positives:
        rhs = [_dot(a, r) for a in simple]
        coeffs = [sum((inv[i][j] * rhs[j] for j in range(len(simple))), Fraction(0)) for i in range(len(simple))]
        out[r] = int(sum(coeffs))
    return out


# --------------------------------------------------------------------------
# strong orthogonality
# --------------------------------------------------------------------------


def _add(a: Root, b: Root, s: int = 1) -> Root:
    return tuple(x + s * y for x, y in zip(a, b))


def _strongly_orthogonal(a: Root, b: Root, roots: frozenset[Root]) -> bool:
    s, d = _add(a, b), _add(a, b, -1)
    zero = all(c == 0 for c in s) or all(c == 0 for c in d)
    return not zero and s not in roots and d not in roots


def is_strongly_orthogonal(a: Root, b: Root, sys: RootSystem) -> bool:
    """True iff neither a + b nor a - b lies in the roots or is zero.

    Raises:
        RootMembershipError: if a or b is not a root of ``sys``.
    """
    a = tuple(Fraction(x) for x in a)
    b = tuple(Fraction(x) for x in b)
    for v in (a, b):
        if v not in sys.roots:
            raise RootMembershipError(f"{v} is not a root of {sys.type}")
    return _strongly_orthogonal(a, b, sys.roots)


def _max_clique(adj: list[int], order: list[int]) -> list[int]:
    """Maximum clique by branch and bound with a greedy colouring bound."""
    best: list[int] = []

    def colour_sort(cand: int) -> list[tuple[int, int]]:
        # Greedy colouring in the fixed vertex order; returns (vertex, colour) ascending.
        out = []
        colour = 0
        rest = cand
        while rest:
            colour += 1
            avail = rest
            while avail:
                v = (avail & -avail).bit_length() - 1
                avail &= ~(1 << v) & ~adj[v]
                rest &= ~(1 << v)
                out.append((v, colour))
        return out

    def expand(clique: list[int], cand: int) -> None:
        nonlocal best
        for v, c in reversed(colour_sort(cand)):
            if len(clique) + c <= len(best):
                return
            clique.append(v)
            nxt = cand & adj[v]
            if nxt:
                expand(clique, nxt)
            elif len(clique) > len(best):
                best = list(clique)
            clique.pop()
            cand &= ~(1 << v)

    # Relabel so bit order follows ``order``.
    pos = {v: i for i, v in enumerate(order)}
    radj = [0] * len(order)
    for v in order:
        m = 0
        a = adj[v]
        while a:
            u = (a & -a).bit_length() - 1
            a &= a - 1
            m |= 1 << pos[u]
        radj[pos[v]] = m
    adj = radj
    expand([], (1 << len(order)) - 1)
    return sorted(order[i] for i in best)


def max_strongly_orthogonal(sys: RootSystem) -> OrthoSet:
    """A maximum-cardinality strongly orthogonal set of positive roots."""
    pos = list(sys.positives)
    k = len(pos)
    adj = [0] * k
    for i, j in itertools.combinations(range(k), 2):
        if _strongly_orthogonal(pos[i], pos[j], sys.roots):
            adj[i] |= 1 << j
            adj[j] |= 1 << i
    h = heights(sys)
    order = sorted(range(k), key=lambda i: (-h[pos[i]], pos[i]))
    members = tuple(pos[i] for i in _max_clique(adj, order))
    return OrthoSet(sys, members, is_maximal(sys, members))


def is_maximal(sys: RootSystem, members) -> bool:
    """No positive root outside ``members`` extends it strongly orthogonally."""
    mem = set(members)
    return not any(
        all(_strongly_orthogonal(r, m, sys.roots) for m in mem) for r in sys.positives if r not in mem
    )


def closed_form_N(ct: CartanType) -> int:
    """Closed-form maximum size of a strongly orthogonal set for ``ct``."""
    n = ct.rank
    if ct.family == "A":
        return (n + 1) // 2
    if ct.family == "D":
        return 2 * (n // 2)
    if ct.family == "E" and n == 6:
        return 4
    return n


def table_types(max_rank: int) -> list[CartanType]:
    """Classical types up to ``max_rank`` (irreducible presentation) plus all exceptional types."""
    if max_rank < 2:
        raise ValueError("max_rank must be at least 2")
    out = [CartanType("A", n) for n in range(1, max_rank + 1)]
    out += [CartanType("B", n) for n in range(2, max_rank + 1)]
    out += [CartanType("C", n) for n in range(2, max_rank + 1)]
    out += [CartanType("D", n) for n in range(4, max_rank + 1)]
    out += [CartanType("E", n) for n in (6, 7, 8)] + [CartanType("F", 4), CartanType("G", 2)]
    return out


def table_N(max_rank: int) -> dict[CartanType, int]:
    """Computed N(Phi) for every type listed by :func:`table_types`."""
    return {ct: len(max_strongly_orthogonal(generate_root_system(ct))) for ct in table_types(max_rank)}
