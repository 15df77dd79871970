from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from oracles import embeddings_of_basis
from systolab.order import NumberFieldOrder, ReducibleError, dedekind_criterion, maximal_order
from systolab.poly import IntPoly, poly_discriminant

KNOWN = [
    # (poly, field discriminant, index)
    ("x^3 + x^2 - 2x - 1", 49, 1),
    ("x^3 - x - 1", -23, 1),
    ("x^3 - x^2 - 2x - 8", -503, 2),
    ("x^3 - 2", -108, 1),
    ("x^3 - 3x - 1", 81, 1),
    ("x^2 - 5", 5, 2),
    ("x^2 + 3", -3, 2),
    ("x^3 - 11x^2 + 27x - 1", 148, 8),
]


@pytest.mark.parametrize("text,disc,index", KNOWN)
def test_maximal_order_discriminant(text, disc, index):
    o = maximal_order(IntPoly.parse(text))
    assert o.disc_field == disc
    assert o.index == index
    assert o.disc_poly == index**2 * o.disc_field
    assert o.certified


def test_reducible_rejected():
    with pytest.raises(ReducibleError):
        maximal_order(IntPoly.parse("x^3 - 1"))


def test_dedekind_criterion_on_dedekind_cubic():
    f = IntPoly.parse("x^3 - x^2 - 2x - 8")
    assert not dedekind_criterion(f, 2)
    assert dedekind_criterion(f, 503)


irreducible_cubics = st.tuples(*[st.integers(-12, 12)] * 3).map(lambda t: IntPoly(t + (1,)))


@given(irreducible_cubics)
def test_disc_identity_and_basis_discriminant(f):
    assume(poly_discriminant(f) != 0)
    try:
        o = maximal_order(f)
    except ReducibleError:
        return
    assert o.disc_poly == o.index**2 * o.disc_field
    # independent check: det(Tr(w_i w_j)) from numpy embeddings
    emb, _ = embeddings_of_basis(f.coeffs, o.basis)
    gram = (emb @ emb.T).real
    assert np.isclose(np.linalg.det(gram), o.disc_field, rtol=1e-6, atol=1e-6)


@given(irreducible_cubics, st.lists(st.integers(-9, 9), min_size=3, max_size=3), st.lists(st.integers(-9, 9), min_size=3, max_size=3))
def test_norm_is_multiplicative(f, x, y):
    assume(poly_discriminant(f) != 0)
    o = NumberFieldOrder.equation_order(f)
    assert o.norm(o.mul(x, y)) == o.norm(x) * o.norm(y)


@given(st.lists(st.integers(-50, 50), min_size=3, max_size=3), st.lists(st.integers(-50, 50), min_size=3, max_size=3))
def test_mul_mod_matches_mul(x, y):
    o = maximal_order(IntPoly.parse("x^3 - x^2 - 2x - 8"))
    assert o.mul_mod(x, y, 7) == tuple(c % 7 for c in o.mul(x, y))


def test_pow_mod_matches_repeated_mul():
    o = maximal_order(IntPoly.parse("x^3 + x^2 - 2x - 1"))
    x = (2, -1, 3)
    acc = o.one
    for _ in range(11):
        acc = o.mul(acc, x)
    assert o.pow_mod(x, 11, 13) == tuple(c % 13 for c in acc)


def test_coords_in_equation_order():
    f = IntPoly.parse("x^3 - x^2 - 2x - 8")
    big, small = maximal_order(f), NumberFieldOrder.equation_order(f)
    for i in range(3):
        e = tuple(int(i == j) for j in range(3))
        coords = big.coords_in(small, e)
        assert all(isinstance(c, Fraction) for c in coords)
        assert all((2 * c).denominator == 1 for c in coords)


def test_signature():
    assert maximal_order(IntPoly.parse("x^3 - x - 1")).signature == (1, 1)
    assert maximal_order(IntPoly.parse("x^3 - 3x - 1")).signature == (3, 0)
