"""Number-field engine: one import point for polynomials, orders and units.

Also provides :func:`analyze_field`, the summary behind ``systolab field reg``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .order import NumberFieldOrder, ReducibleError, check_irreducible, dedekind_criterion, maximal_order
from .poly import (
    IntPoly,
    NotSquarefreeError,
    PrecisionExhaustedError,
    RealRootIsolation,
    poly_discriminant,
    sturm_real_roots,
)
from .units import (
    BadPrimeError,
    CertificationReport,
    RankDeficientError,
    SingularUnitMatrixError,
    UnitSystem,
    certify_fundamental,
    change_unit_basis,
    regulator,
    regulator_lower_bound,
    saturate_and_certify,
    suborder_units,
    unit_group,
    unit_index_mod_p,
    unit_rank,
)

__all__ = [
    "BadPrimeError",
    "CertificationReport",
    "FieldSummary",
    "IntPoly",
    "NotSquarefreeError",
    "NumberFieldOrder",
    "PrecisionExhaustedError",
    "RankDeficientError",
    "RealRootIsolation",
    "ReducibleError",
    "SingularUnitMatrixError",
    "UnitSystem",
    "analyze_field",
    "certify_fundamental",
    "change_unit_basis",
    "check_irreducible",
    "dedekind_criterion",
    "maximal_order",
    "poly_discriminant",
    "regulator",
    "regulator_lower_bound",
    "saturate_and_certify",
    "sturm_real_roots",
    "suborder_units",
    "unit_group",
    "unit_index_mod_p",
    "unit_rank",
]


@dataclass(frozen=True)
class FieldSummary:
    """Maximal-order data and a fundamental unit system for one polynomial."""

    poly: IntPoly
    order: NumberFieldOrder
    units: UnitSystem

    def as_dict(self) -> dict:
        o, us = self.order, self.units
        return {
            "poly": str(self.poly),
            "disc_poly": o.disc_poly,
            "disc_field": o.disc_field,
            "index": o.index,
            "signature": list(us.signature),
            "integral_basis": [[str(Fraction(c)) for c in row] for row in o.basis],
            "units": [list(u) for u in us.units],
            "torsion": us.torsion,
            "regulator": mpmath.nstr(us.regulator, 20),
            "regulator_error": mpmath.nstr(us.error_bound, 3),
            "certified": bool(us.certified and o.certified),
            "status": us.status if o.certified else f"{o.status}; {us.status}",
        }


def analyze_field(
    poly: IntPoly | str,
    precision_bits: int = 128,
    lower_bound_constant=None,
    budget: int = 4000,
) -> FieldSummary:
    """Maximal order and certified fundamental units of Q[x]/(poly)."""
    f = IntPoly.parse(poly) if isinstance(poly, str) else poly
    if not f.is_monic():
        raise ValueError("polynomial must be monic")
    order = maximal_order(f)
    us = unit_group(order, precision_bits, budget=budget, lower_bound_constant=lower_bound_constant)
    return FieldSummary(f, order, us)
