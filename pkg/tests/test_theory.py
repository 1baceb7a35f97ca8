import pytest

from cellschur.core.algebra import RingSpec
from cellschur.core.combinatorics import LAMBDA_ZERO, Partition
from cellschur.core.enums import MonoidKind, Side, Verdict, WitnessKind
from cellschur.core.errors import InadmissibleError
from cellschur.services.theory import (
    admissible_partitions,
    count_irreducible_data,
    divisibility_corollary_holds,
    full_poset,
    irreducible_data_of,
    lambda_Lp_is_full,
    lambda_Lp_set,
    lambda_p_is_full,
    lambda_p_set,
    p_adic_expansions,
    partition_of_datum,
    predicted_lambda0,
    right_p_parameters,
    theorem_check,
    witness_all,
    witness_bracket,
    witness_construction,
)


def P(*parts):
    return Partition(parts)


def test_lambda_p_for_rank_three_drops_two():
    assert set(lambda_p_set(3, 2)) == set(full_poset(3)) - {P(2)}
    assert lambda_p_set(3, 3) == full_poset(3)


def test_lambda_Lp_for_rank_four_drops_two():
    assert set(lambda_Lp_set(4, 2)) == set(full_poset(4)) - {P(2)}
    assert lambda_p_set(4, 2) == full_poset(4)


def test_full_poset_size():
    assert len(full_poset(3)) == 6
    assert full_poset(2, with_zero=True)[0] == LAMBDA_ZERO


@pytest.mark.parametrize("a, p, l", [(1, 2, 1), (1, 2, 2), (2, 3, 1), (1, 3, 1), (1, 5, 1)])
def test_divisibility_corollary(a, p, l):
    assert divisibility_corollary_holds(a, p, l)


def test_divisibility_corollary_needs_small_a():
    with pytest.raises(InadmissibleError):
        divisibility_corollary_holds(3, 2, 1)


def test_lambda_p_is_not_always_full():
    assert not lambda_p_is_full(3, 2)
    assert lambda_p_is_full(4, 2)


@pytest.mark.parametrize("r, p", [(2, 2), (2, 3), (3, 3), (3, 5), (4, 5)])
def test_lambda_Lp_is_full_when_p_at_least_r(r, p):
    assert lambda_Lp_is_full(r, p)


def test_non_prime_characteristic_is_inadmissible():
    with pytest.raises(InadmissibleError):
        lambda_p_set(3, 4)


def test_predictions():
    assert predicted_lambda0(MonoidKind.FULL, Side.RIGHT, 0, 3).predicted == tuple(full_poset(3))
    assert predicted_lambda0(MonoidKind.FULL, Side.RIGHT, 2, 3).predicted == tuple(lambda_p_set(3, 2))
    assert predicted_lambda0(MonoidKind.FULL, Side.LEFT, 2, 4).predicted == tuple(lambda_Lp_set(4, 2))
    rook = predicted_lambda0(MonoidKind.ROOK, Side.LEFT, 2, 2)
    assert rook.predicted[0] == LAMBDA_ZERO
    assert not predicted_lambda0(MonoidKind.FULL, None, 2, 2).applicable


@pytest.mark.parametrize(
    "r, p, right, left",
    [(2, 2, 3, 3), (3, 2, 5, 5), (4, 2, 11, 10), (3, 3, 6, 6)],
)
def test_counts_of_irreducible_data(r, p, right, left):
    assert count_irreducible_data(r, p, Side.RIGHT) == right
    assert count_irreducible_data(r, p, Side.LEFT) == left


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("r", [1, 2, 3, 4, 5, 6])
def test_counts_match_lambda_zero_sizes(r, p):
    assert count_irreducible_data(r, p, Side.RIGHT) == len(lambda_p_set(r, p))
    assert count_irreducible_data(r, p, Side.LEFT) == len(lambda_Lp_set(r, p))


def test_p_adic_expansions_of_four():
    assert p_adic_expansions(4, 2) == [(0, (2, 1)), (0, (4,)), (1, (2,)), (2, (1,))]


@pytest.mark.parametrize("side", [Side.RIGHT, Side.LEFT])
@pytest.mark.parametrize("r, p", [(4, 2), (5, 2), (6, 3)])
def test_irreducible_data_roundtrip(side, r, p):
    admissible = lambda_p_set(r, p) if side is Side.RIGHT else lambda_Lp_set(r, p)
    data = [irreducible_data_of(lam, r, p, side) for lam in admissible]
    assert len(set(data)) == len(admissible)
    for lam, datum in zip(admissible, data):
        assert sum(s * p ** (datum.m + j) for j, s in enumerate(datum.levels)) == r
        assert partition_of_datum(datum, p) == lam


def test_excluded_partition_has_no_datum():
    with pytest.raises(InadmissibleError):
        irreducible_data_of(P(2), 3, 2, Side.RIGHT)


def test_right_p_parameters():
    assert right_p_parameters(P(2), 4, 2) == (1, 1, 1)
    with pytest.raises(InadmissibleError):
        right_p_parameters(P(2), 3, 2)


def test_right_p_construction_for_two_at_rank_four():
    construction = witness_construction(WitnessKind.RIGHT_P, P(2), 4, 2)
    assert construction.mu.parts == (2, 2, 0, 0)
    assert construction.C == (1, 2)
    assert sorted(construction.D) == [(1, 3), (2, 4)]
    assert construction.expected == 1


def test_char0_construction_merges_the_tail():
    construction = witness_construction(WitnessKind.CHAR0_FULL, P(2), 3)
    assert construction.mu.parts == (2, 1, 0)
    assert sorted(construction.D) == [(1,), (2, 3)]
    assert construction.expected == 2


def test_admissible_partitions():
    assert len(admissible_partitions(WitnessKind.CHAR0_FULL, 3)) == 6
    assert admissible_partitions(WitnessKind.ROOK, 2)[0] == LAMBDA_ZERO
    assert all(lam.index < 3 for lam in admissible_partitions(WitnessKind.LEFT_P, 3, 2))
    with pytest.raises(InadmissibleError):
        admissible_partitions(WitnessKind.RIGHT_P, 3)


def test_witness_rejects_wrong_side():
    with pytest.raises(InadmissibleError):
        witness_bracket(WitnessKind.RIGHT_P, P(1), 3, 2, Side.LEFT)


def test_char0_witnesses_at_rank_three():
    results = witness_all(WitnessKind.CHAR0_FULL, 3)
    assert len(results) == 6
    assert all(result.agree and result.nonzero for result in results)
    by_lambda = {result.lam: result for result in results}
    assert by_lambda[P(2)].computed == 2
    assert by_lambda[P(3)].expected == 1


def test_char0_witnesses_on_the_right_side():
    results = witness_all(WitnessKind.CHAR0_FULL, 3, side=Side.RIGHT)
    assert all(result.agree for result in results)


@pytest.mark.parametrize("r", [2, 3])
def test_rook_witnesses(r):
    results = witness_all(WitnessKind.ROOK, r, 3)
    assert results[0].lam == LAMBDA_ZERO
    assert all(result.agree and result.expected == 1 for result in results)


def test_right_p_witnesses_at_rank_four():
    results = witness_all(WitnessKind.RIGHT_P, 4, 2)
    assert all(result.agree and result.nonzero for result in results)
    two = next(result for result in results if result.lam == P(2))
    assert two.computed % 2 == 1
    assert two.to_json()["expected"] == "1"


@pytest.mark.parametrize("r, p", [(3, 2), (3, 3)])
def test_right_p_witnesses(r, p):
    assert all(result.agree for result in witness_all(WitnessKind.RIGHT_P, r, p))


@pytest.mark.parametrize("r", [2, 3])
def test_left_top_witnesses(r):
    results = witness_all(WitnessKind.LEFT_TOP, r)
    assert all(result.agree and result.computed == 1 for result in results)


@pytest.mark.parametrize("r, p", [(3, 2), (3, 3), (4, 2)])
def test_left_p_witnesses(r, p):
    results = witness_all(WitnessKind.LEFT_P, r, p)
    assert results
    assert all(result.agree and result.nonzero for result in results)


@pytest.mark.parametrize("side", [Side.LEFT, Side.RIGHT])
def test_theorem_check_in_characteristic_zero_rank_two(side):
    check = theorem_check(MonoidKind.FULL, side, RingSpec.rationals(), 2)
    assert check.verdict is Verdict.PASS
    assert set(check.computed) == set(full_poset(2))


def test_theorem_check_for_rook_rank_two():
    check = theorem_check(MonoidKind.ROOK, Side.RIGHT, RingSpec.prime_field(2), 2)
    assert check.verdict is Verdict.PASS
    assert LAMBDA_ZERO in check.computed


@pytest.mark.slow
@pytest.mark.parametrize("side", [Side.LEFT, Side.RIGHT])
def test_modular_theorems_at_rank_three(side):
    check = theorem_check(MonoidKind.FULL, side, RingSpec.prime_field(2), 3)
    assert check.verdict is Verdict.PASS
    assert set(check.computed) == set(full_poset(3)) - {P(2)}
    assert theorem_check(MonoidKind.FULL, side, RingSpec.prime_field(3), 3).verdict is Verdict.PASS


@pytest.mark.slow
def test_characteristic_zero_theorem_at_rank_three():
    for side in (Side.LEFT, Side.RIGHT):
        assert theorem_check(MonoidKind.FULL, side, RingSpec.rationals(), 3).verdict is Verdict.PASS


@pytest.mark.slow
@pytest.mark.parametrize("side", [Side.LEFT, Side.RIGHT])
def test_rook_theorem_at_rank_three(side):
    for field in (RingSpec.rationals(), RingSpec.prime_field(2), RingSpec.prime_field(3)):
        assert theorem_check(MonoidKind.ROOK, side, field, 3).verdict is Verdict.PASS


@pytest.mark.slow
def test_left_and_right_separate_at_rank_four():
    gf2 = RingSpec.prime_field(2)
    right = theorem_check(MonoidKind.FULL, Side.RIGHT, gf2, 4)
    left = theorem_check(MonoidKind.FULL, Side.LEFT, gf2, 4)
    assert P(2) in right.computed
    assert P(2) not in left.computed
