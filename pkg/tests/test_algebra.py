from fractions import Fraction

import pytest

from cellschur.core.algebra import (
    RingSpec,
    SparseAlgebraElement,
    accumulate,
    integer_determinant,
    integer_inverse,
    matrix_rank,
    solve_rational,
)
from cellschur.core.errors import CellStructureError


def test_ring_labels():
    assert RingSpec.integers().label == "ZZ"
    assert RingSpec.field_of_characteristic(0).label == "QQ"
    assert RingSpec.field_of_characteristic(3).label == "GF(3)"
    assert RingSpec.prime_field(5).characteristic == 5


def test_prime_field_needs_a_prime():
    with pytest.raises(ValueError):
        RingSpec.prime_field(4)


def test_integers_are_not_a_field():
    with pytest.raises(ValueError):
        RingSpec.integers().require_field()


def test_sparse_element_drops_zero_coefficients():
    x = SparseAlgebraElement({0: 1, 1: 0, 2: 3})
    y = SparseAlgebraElement({0: -1})
    assert (x + y).support() == [2]
    assert (x - x).coeffs == {}
    assert x.scale(2)[2] == 6


def test_integral_rejects_fractions():
    assert SparseAlgebraElement({0: Fraction(4, 2)}).integral().coeffs == {0: 2}
    with pytest.raises(CellStructureError):
        SparseAlgebraElement({0: Fraction(1, 2)}).integral()


def test_accumulate_cancels():
    target = {1: 2}
    accumulate(target, [(1, 1), (2, 5)], scale=-2)
    assert target == {2: -10}


def test_rank_depends_on_the_field():
    rows = [[2, 0], [0, 1]]
    assert matrix_rank(rows, RingSpec.rationals()) == 2
    assert matrix_rank(rows, RingSpec.prime_field(2)) == 1
    assert matrix_rank([], RingSpec.rationals()) == 0


def test_integer_inverse_of_unimodular_matrix():
    rows = [[1, 1], [0, 1]]
    assert integer_determinant(rows) == 1
    assert integer_inverse(rows) == [[1, -1], [0, 1]]


def test_integer_inverse_rejects_non_unimodular_matrix():
    with pytest.raises(CellStructureError):
        integer_inverse([[2, 0], [0, 1]])


def test_solve_rational():
    assert solve_rational([[2, 0], [0, 3]], [1, 1]) == [Fraction(1, 2), Fraction(1, 3)]
    assert solve_rational([[1, 1], [1, 1]], [0, 1]) is None
