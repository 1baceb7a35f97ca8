import math

import pytest

from cellschur.core.algebra import RingSpec
from cellschur.core.combinatorics import Partition, partitions_of
from cellschur.core.enums import MonoidKind, Side, Verdict
from cellschur.core.monoid import MonoidSpec
from cellschur.services.cell_engine import (
    CellEngine,
    action_matrix,
    from_cell_coords,
    gram_matrix,
    ideal_closure_check,
    layer_coefficients,
    r_st_independence_check,
    to_cell_coords,
    verify_cell_axioms,
)
from cellschur.services.monoid_cells import monoid_cell_structure, symmetric_cell_structure

QQ = RingSpec.rationals()
GF2 = RingSpec.prime_field(2)
GF3 = RingSpec.prime_field(3)


def test_gram_matrices_of_t2(t2):
    assert gram_matrix(Partition((2,)), t2) == [[2]]
    assert gram_matrix(Partition((1,)), t2) == [[1, 1]]
    assert gram_matrix(Partition((1, 1)), t2) == [[1]]


def test_gram_of_t2_top_layer_vanishes_mod_2(t2, engine):
    assert engine.gram_matrix_mod(Partition((2,)), t2, GF2) == [[0]]
    assert engine.lambda_zero(t2, GF2) == [Partition((1,)), Partition((1, 1))]
    assert not engine.quasi_hereditary_sufficient(t2, GF2)
    assert engine.quasi_hereditary_sufficient(t2, QQ)


def test_lambda_zero_needs_a_field(t2, engine):
    with pytest.raises(ValueError):
        engine.lambda_zero(t2, RingSpec.integers())


def test_change_of_basis_roundtrip(t2):
    for k in range(t2.dimension):
        assert to_cell_coords(t2.cell_element(k), t2) == {k: 1}
    for j in range(t2.dimension):
        assert from_cell_coords(t2.natural_to_cells[j], t2) == t2.natural_element(j)


@pytest.mark.parametrize("i", [1, 2, 3, 4])
def test_symmetric_group_ranks_are_semisimple(i, engine):
    cs = symmetric_cell_structure(i, RingSpec.integers())
    dims = engine.irreducible_dims(cs, QQ)
    assert sum(d * d for d in dims.values()) == math.factorial(i)
    assert len(dims) == len(partitions_of(i))


def test_symmetric_group_s3_dimensions(engine):
    cs = symmetric_cell_structure(3, RingSpec.integers())
    assert engine.irreducible_dims(cs, QQ) == {Partition((3,)): 1, Partition((2, 1)): 2, Partition((1, 1, 1)): 1}
    assert engine.irreducible_dims(cs, GF3) == {Partition((2, 1)): 1, Partition((1, 1, 1)): 1}


@pytest.mark.parametrize("r, order", [(2, 7), (3, 34)])
def test_rook_monoid_algebra_is_semisimple_over_q(r, order, engine):
    cs = monoid_cell_structure(MonoidSpec(MonoidKind.ROOK, r), RingSpec.integers())
    dims = engine.irreducible_dims(cs, QQ)
    assert sum(d * d for d in dims.values()) == order


def test_axioms_hold_for_symmetric_group():
    report = verify_cell_axioms(symmetric_cell_structure(3, RingSpec.integers()))
    assert report.verdict is Verdict.PASS
    assert report.counterexample is None


def test_relabeling_against_the_order_breaks_the_axioms():
    cs = symmetric_cell_structure(3, RingSpec.integers())
    assert verify_cell_axioms(cs.relabeled("symmetric:i=3:same", cs.cell_labels)).verdict is Verdict.PASS

    swap = {Partition((3,)): Partition((1, 1, 1)), Partition((1, 1, 1)): Partition((3,))}
    labels = [(swap.get(lam, lam), s, t) for lam, s, t in cs.cell_labels]
    report = verify_cell_axioms(cs.relabeled("symmetric:i=3:swapped", labels))
    assert report.verdict is Verdict.FAIL
    assert report.counterexample["side"] == "left"
    assert report.counterexample["lambda"] == [3]
    assert report.counterexample["reason"] == "product leaves A^lambda"
    assert report.counterexample["detail"] == {"layers": "[[2, 1], [1, 1, 1]]"}


def test_ideal_closure_and_r_st_independence(t2):
    assert ideal_closure_check(t2).passed
    for lam in t2.poset:
        assert r_st_independence_check(t2, lam)


def test_cell_module_dimensions(t2, engine):
    dims = engine.cell_module_dimensions(t2, GF2)
    assert dims[Partition((1,))] == {"cell": 2, "radical": 1, "simple": 1}
    assert dims[Partition((2,))] == {"cell": 1, "radical": 1, "simple": 0}


def test_identity_acts_as_identity_on_cell_modules(t2):
    identity = t2.natural_element(t2.natural_labels.index((1, 2)))
    lam = Partition((1,))
    size = len(t2.left_index[lam])
    expected = [[int(a == b) for b in range(size)] for a in range(size)]
    assert action_matrix(identity, lam, Side.LEFT, t2) == expected


def test_gram_reports_serialize_integers_as_strings(t2, engine):
    reports = engine.gram_reports(t2, [QQ, GF2])
    top = next(report for report in reports if report.lam == Partition((2,)))
    assert top.to_json() == {
        "lambda": ["2"],
        "rows": "1",
        "cols": "1",
        "entries": [["2"]],
        "rank_by_field": {"QQ": "1", "GF(2)": "0"},
    }
    assert top.member_of_lambda0(QQ) and not top.member_of_lambda0(GF2)


def test_parallel_ranks_match_serial_ranks(t3):
    assert CellEngine(workers=4).ranks(t3, GF2) == CellEngine().ranks(t3, GF2)


def test_layer_coefficients_pick_out_one_layer(t2):
    for k, (label, s, t) in enumerate(t2.cell_labels):
        for lam in t2.poset:
            expected = {(s, t): 1} if lam == label else {}
            assert layer_coefficients(t2.cell_element(k), lam, t2) == expected


def test_layer_coefficients_of_a_natural_element(t2):
    identity = t2.natural_element(t2.natural_labels.index((1, 2)))
    coords = to_cell_coords(identity, t2)
    for lam in t2.poset:
        layer = layer_coefficients(identity, lam, t2)
        assert layer == {
            (t2.cell_labels[k][1], t2.cell_labels[k][2]): c
            for k, c in coords.items()
            if t2.layer_of(k) == lam
        }


def matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


@pytest.mark.parametrize("side", [Side.LEFT, Side.RIGHT])
def test_action_on_cell_modules_is_multiplicative(side, t2, t3):
    cases = [(t2, range(t2.dimension)), (t3, range(0, t3.dimension, 7))]
    for cs, naturals in cases:
        for a in naturals:
            for b in naturals:
                x, y = cs.natural_element(a), cs.natural_element(b)
                for lam in cs.poset:
                    product = action_matrix(cs.multiply(x, y), lam, side, cs)
                    assert product == matmul(action_matrix(x, lam, side, cs), action_matrix(y, lam, side, cs))
