from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from systolab.rootsys import (
    CartanType,
    InvalidCartanTypeError,
    RootMembershipError,
    classical_root_count,
    closed_form_N,
    generate_root_system,
    heights,
    is_maximal,
    is_strongly_orthogonal,
    max_strongly_orthogonal,
    simple_roots,
)

# Frozen reference values of N(Phi), written out by hand.
FROZEN_N = {
    "A1": 1, "A2": 1, "A3": 2, "A4": 2, "A5": 3, "A6": 3, "A7": 4, "A8": 4,
    "B2": 2, "B3": 3, "B4": 4, "B5": 5, "B6": 6, "B7": 7, "B8": 8,
    "C2": 2, "C3": 3, "C4": 4, "C5": 5, "C6": 6, "C7": 7, "C8": 8,
    "D4": 4, "D5": 4, "D6": 6, "D7": 6, "D8": 8,
    "E6": 4, "E7": 7, "E8": 8, "F4": 4, "G2": 2,
}

SMALL = ["A1", "A2", "A3", "A4", "B2", "B3", "C3", "D4", "G2", "F4"]


@pytest.mark.parametrize("name", sorted(FROZEN_N))
def test_closed_form_matches_frozen_table(name):
    assert closed_form_N(CartanType.parse(name)) == FROZEN_N[name]


@pytest.mark.parametrize("name", sorted(FROZEN_N))
def test_root_counts(name):
    ct = CartanType.parse(name)
    sys_ = generate_root_system(ct)
    assert len(sys_.roots) == classical_root_count(ct)
    assert len(sys_.positives) * 2 == len(sys_.roots)
    assert len(simple_roots(sys_)) == ct.rank


@pytest.mark.parametrize("name", SMALL)
def test_maximum_set_is_strongly_orthogonal_and_maximal(name):
    sys_ = generate_root_system(CartanType.parse(name))
    s = max_strongly_orthogonal(sys_)
    assert len(s) == FROZEN_N[name]
    assert s.maximal_flag and is_maximal(sys_, s.members)
    for i, a in enumerate(s.members):
        for b in s.members[i + 1:]:
            assert is_strongly_orthogonal(a, b, sys_)


def test_highest_root_height():
    # Coxeter number minus one
    for name, h in [("A4", 4), ("B3", 5), ("G2", 5), ("E6", 11), ("F4", 11)]:
        sys_ = generate_root_system(CartanType.parse(name))
        assert max(heights(sys_).values()) == h


@pytest.mark.parametrize("bad", ["E5", "F3", "G3", "X2", "A0", "B", "D1"])
def test_invalid_types(bad):
    with pytest.raises(InvalidCartanTypeError):
        CartanType.parse(bad)


def test_non_root_rejected():
    sys_ = generate_root_system(CartanType("A", 2))
    with pytest.raises(RootMembershipError):
        is_strongly_orthogonal((1, 1, 0), (1, -1, 0), sys_)


def test_b2_short_roots_orthogonal_but_not_strongly():
    sys_ = generate_root_system(CartanType("B", 2))
    # e1 and e2 are orthogonal, yet e1 + e2 is a root
    assert not is_strongly_orthogonal((1, 0), (0, 1), sys_)
    assert is_strongly_orthogonal((1, 1), (1, -1), sys_)


@given(st.sampled_from(SMALL), st.data())
def test_strong_orthogonality_symmetric_and_implies_orthogonal(name, data):
    sys_ = generate_root_system(CartanType.parse(name))
    roots = sorted(sys_.roots)
    a = data.draw(st.sampled_from(roots))
    b = data.draw(st.sampled_from(roots))
    so = is_strongly_orthogonal(a, b, sys_)
    assert so == is_strongly_orthogonal(b, a, sys_)
    if so:
        assert sum((x * y for x, y in zip(a, b)), Fraction(0)) == 0
