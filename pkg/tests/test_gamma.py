import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import charpoly_3x3, cubic_discriminant
from systolab import arith
from systolab.gamma import (
    NotPrimeError,
    centralizer_saturation_index,
    char_poly,
    check_R_regular,
    gamma_matrix,
    has_rational_root,
    is_irreducible_cubic,
    printed_charpoly,
    reduced_generator,
    validate,
)
from systolab.poly import IntPoly

PRIMES = arith.first_primes(60)


def test_p2_charpoly_frozen():
    # cofactor expansion of the p = 2 matrix, done by hand
    assert char_poly(gamma_matrix(2)).coeffs == (-1, 27, -11, 1)


@given(st.sampled_from(PRIMES))
def test_matrix_properties(p):
    elt = gamma_matrix(p)
    m = elt.matrix
    assert elt.det == 1
    assert all((m[i][j] - (i == j)) % p == 0 for i in range(3) for j in range(3))
    tr, minors, det = charpoly_3x3(m)
    assert det == 1
    assert tr == 3 + 2 * p * p
    assert minors == 3 + 2 * p * p + p**4
    assert char_poly(elt).coeffs == (-1, minors, -tr, 1)


@given(st.sampled_from(PRIMES))
def test_printed_form_never_agrees(p):
    elt = gamma_matrix(p)
    assert elt.report.matches_symbolic
    assert not elt.report.agrees_with_printed
    assert printed_charpoly(p).coeffs == (-1, 3 + 5 * p * p + 4 * p**4, -(3 + 5 * p * p), 1)


@given(st.sampled_from(PRIMES))
def test_regularity(p):
    elt = validate(p)
    reg = elt.regularity
    assert reg.n_real_roots == 3
    assert reg.all_positive and reg.distinct_moduli and reg.no_modulus_one and reg.excludes_pm1
    assert reg.r_regular
    assert cubic_discriminant(elt.charpoly.coeffs) > 0
    assert is_irreducible_cubic(elt.charpoly)


@pytest.mark.parametrize("bad", [1, 4, 9, 15, 0, -3])
def test_nonprime_rejected(bad):
    with pytest.raises(NotPrimeError):
        gamma_matrix(bad)


def test_rational_root_detection():
    assert has_rational_root(IntPoly.parse("x^3 - 1"))
    assert not has_rational_root(IntPoly.parse("x^3 - 2"))
    assert not is_irreducible_cubic(IntPoly.parse("x^3 - 6x^2 + 11x - 6"))


def test_regularity_flags_modulus_one():
    # roots -1, 1, 2
    rep = check_R_regular(IntPoly.parse("x^3 - 2x^2 - x + 2"))
    assert not rep.excludes_pm1 and not rep.r_regular


@given(st.sampled_from(PRIMES[:30]))
def test_reduced_generator(p):
    elt = gamma_matrix(p)
    b, g = reduced_generator(elt)
    assert g.coeffs == (p, p * p - 2, -2 * p, 1)
    assert centralizer_saturation_index(elt) == 1


def test_irreducibility_needs_monic_cubic():
    with pytest.raises(ValueError):
        is_irreducible_cubic(IntPoly.parse("2x^3 - 1"))
    with pytest.raises(ValueError):
        is_irreducible_cubic(IntPoly.parse("x^2 - 2"))


def test_p2_matrix_rows():
    assert gamma_matrix(2).matrix == ((5, 2, 4), (2, 1, 2), (0, 2, 5))


def test_cyclotomic_charpoly_not_regular():
    rep = check_R_regular(IntPoly.parse("x^3 - 1"))
    assert rep.n_real_roots == 1 and not rep.no_modulus_one and not rep.r_regular
