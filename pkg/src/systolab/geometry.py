"""Geodesic lengths, flat-torus volume bounds and regulator envelopes."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import mpmath

DEFAULT_PRECISION = 128


class GeometryDomainError(ValueError):
    """Raised when an input lies outside a formula's domain."""


@dataclass(frozen=True)
class EnvelopeParams:
    """Constants for the Landau-form and Silverman-form regulator envelopes."""

    degree_n: int = 3
    c1: float = 1.0
    c2: float = 1.0
    gamma_n: float = 1.0
    unit_rank_r: int = 2
    subfield_rank_rho: int = 0

    def __post_init__(self) -> None:
        if self.degree_n < 1:
            raise GeometryDomainError("degree_n must be >= 1")
        if not (self.c1 > 0 and self.c2 > 0 and self.gamma_n > 0):
            raise GeometryDomainError("c1, c2 and gamma_n must be positive")
        if self.unit_rank_r < 0 or self.subfield_rank_rho < 0:
            raise GeometryDomainError("ranks must be non-negative")
        if self.subfield_rank_rho > self.unit_rank_r:
            raise GeometryDomainError("subfield_rank_rho exceeds unit_rank_r")


def unit_rank(signature: tuple[int, int], degree: int | None = None) -> int:
    """Dirichlet rank r1 + r2 - 1.

    Raises:
        GeometryDomainError: if the signature is negative or inconsistent with ``degree``.
    """
    r1, r2 = signature
    if r1 < 0 or r2 < 0 or r1 + r2 == 0:
        raise GeometryDomainError(f"invalid signature {signature}")
    if degree is not None and r1 + 2 * r2 != degree:
        raise GeometryDomainError(f"signature {signature} does not match degree {degree}")
    return r1 + r2 - 1


def geodesic_length(eigs: Sequence, prec: int = DEFAULT_PRECISION) -> mpmath.mpf:
    """sqrt(sum over i != j of log^2 |l_i / l_j|) for type A eigenvalue moduli.

    Raises:
        GeometryDomainError: on fewer than two values or a nonpositive value.
    """
    if len(eigs) < 2:
        raise GeometryDomainError("need at least two eigenvalues")
    with mpmath.workprec(prec + 16):
        vals = [mpmath.mpf(v) if not isinstance(v, mpmath.mpf) else v for v in eigs]
        if any(v <= 0 for v in vals):
            raise GeometryDomainError("eigenvalue moduli must be positive")
        logs = [mpmath.log(v) for v in vals]
        total = mpmath.mpf(0)
        for a, b in itertools.permutations(logs, 2):
            total += (a - b) ** 2
        return +mpmath.sqrt(total)


def torus_volume_lower(adjusted_regulator, c) -> float:
    """c times the (index-adjusted) regulator.

    Raises:
        GeometryDomainError: if either input is not positive.
    """
    if not (adjusted_regulator > 0 and c > 0):
        raise GeometryDomainError("regulator and c must be positive")
    return c * adjusted_regulator


def landau_envelope(D: int, params: EnvelopeParams) -> float:
    """c1 * sqrt(D) * log(D)^(n-1).

    Raises:
        GeometryDomainError: if D <= 1.
    """
    if D <= 1:
        raise GeometryDomainError("D must exceed 1")
    return params.c1 * math.sqrt(D) * math.log(D) ** (params.degree_n - 1)


def silverman_envelope(D: int, params: EnvelopeParams) -> float:
    """c2 * log(gamma_n * D)^(r - rho).

    Raises:
        GeometryDomainError: if D <= 1 or gamma_n * D <= 1.
    """
    if D <= 1:
        raise GeometryDomainError("D must exceed 1")
    arg = params.gamma_n * D
    if arg <= 1:
        raise GeometryDomainError("gamma_n * D must exceed 1")
    return params.c2 * math.log(arg) ** (params.unit_rank_r - params.subfield_rank_rho)
