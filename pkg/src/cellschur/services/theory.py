"""Predicted Λ₀ sets, bracket witnesses and the count of irreducible data.

The witness constructions rebuild, for one λ at a time, the composition μ,
the set C = {1..i}, the block family D and the tableaux S and T of the
witness element, then compute b * b for b = Φ(O_μ, O_ν)(_SC_T^λ) inside
the (μ, μ) summand only.
"""

import itertools
import logging
from dataclasses import dataclass
from math import comb, prod
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sympy import isprime

from cellschur.config import Config
from cellschur.core.algebra import RingSpec
from cellschur.core.combinatorics import (
    LAMBDA_ZERO,
    Composition,
    PAdicDecomposition,
    Partition,
    SemistandardTableau,
    canonical_tableau,
    k_p,
    p_adic_decompose,
    p_adic_reconstruct,
    p_restricted_partitions,
    partitions_of,
    standard_tableaux,
    weight_word,
)
from cellschur.core.enums import MonoidKind, Side, Verdict, WitnessKind
from cellschur.core.errors import CellStructureError, InadmissibleError
from cellschur.core.monoid import BlockFamily, IndexSubset, MonoidSpec, SubsetOrdering
from cellschur.services.cell_engine import CellEngine
from cellschur.services.schur import (
    SchurAlgebra,
    SchurLeftIndex,
    SchurRightIndex,
    orbit_of_C,
    orbit_of_D,
    schur_cell_structure,
)
logger = logging.getLogger(__name__)


def _require_prime(p: Optional[int]) -> int:
    if p is None or not isprime(p):
        raise InadmissibleError(f"a prime characteristic is required, got {p}")
    return p


def full_poset(r: int, with_zero: bool = False) -> List[Partition]:
    """∪Λ(i) over 1 ≤ i ≤ r (and λ₀ when asked), in poset order."""
    result = [LAMBDA_ZERO] if with_zero else []
    for i in range(1, r + 1):
        result.extend(sorted(partitions_of(i), key=Partition.sort_key))
    return result


def lambda_p_set(r: int, p: int) -> List[Partition]:
    """Λ_p: the λ with p^{k_p(λ)} dividing r − i(λ)."""
    _require_prime(p)
    return [lam for lam in full_poset(r) if (r - lam.index) % p ** k_p(lam, p) == 0]


def lambda_Lp_set(r: int, p: int) -> List[Partition]:
    """Λ_{L,p}: the λ with a part prime to p, together with all of Λ(r)."""
    _require_prime(p)
    return [
        lam for lam in full_poset(r)
        if lam.index == r or any(part % p for part in lam.parts)
    ]


def lambda_p_is_full(r: int, p: int) -> bool:
    return lambda_p_set(r, p) == full_poset(r)


def lambda_Lp_is_full(r: int, p: int) -> bool:
    return lambda_Lp_set(r, p) == full_poset(r)


def divisibility_corollary_holds(a: int, p: int, l: int) -> bool:
    """Λ_p(a·p^l, p) is everything whenever 1 ≤ a < p."""
    if not 1 <= a < p:
        raise InadmissibleError(f"need 1 <= a < p, got a={a}, p={p}")
    return lambda_p_is_full(a * p**l, p)


@dataclass(frozen=True)
class Prediction:
    kind: MonoidKind
    side: Optional[Side]
    characteristic: int
    r: int
    predicted: Tuple[Partition, ...]
    applicable: bool
    statement: str

    def to_json(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "side": self.side.value if self.side else None,
            "characteristic": str(self.characteristic),
            "applicable": self.applicable,
            "statement": self.statement,
            "predicted": [[str(p) for p in lam.parts] for lam in self.predicted],
        }


def predicted_lambda0(kind: MonoidKind, side: Optional[Side], characteristic: int, r: int) -> Prediction:
    """The Λ₀ that the classification theorems give for S_L or S_R of M."""
    if side is None:
        return Prediction(kind, side, characteristic, r, (), False, "monoid algebras carry no prediction")
    if kind in (MonoidKind.ROOK, MonoidKind.PARTIAL):
        return Prediction(
            kind, side, characteristic, r, tuple(full_poset(r, with_zero=True)), True,
            "M contains the rook monoid: Λ₀ = Λ for both sides in every characteristic",
        )
    if characteristic == 0:
        return Prediction(
            kind, side, characteristic, r, tuple(full_poset(r)), True,
            "characteristic 0: Λ₀ = Λ for both sides",
        )
    if side is Side.RIGHT:
        return Prediction(
            kind, side, characteristic, r, tuple(lambda_p_set(r, characteristic)), True,
            "characteristic p, right side: Λ₀ = Λ_p",
        )
    return Prediction(
        kind, side, characteristic, r, tuple(lambda_Lp_set(r, characteristic)), True,
        "characteristic p, left side: Λ₀ = Λ_{L,p}",
    )


def theorem_verdict(prediction: Prediction, computed: Sequence[Partition]) -> Verdict:
    if not prediction.applicable:
        return Verdict.NOT_APPLICABLE
    return Verdict.PASS if set(computed) == set(prediction.predicted) else Verdict.FAIL


@dataclass(frozen=True)
class TheoremCheck:
    prediction: Prediction
    computed: Tuple[Partition, ...]

    @property
    def verdict(self) -> Verdict:
        return theorem_verdict(self.prediction, self.computed)


def theorem_check(
    kind: MonoidKind,
    side: Side,
    field: RingSpec,
    r: int,
    n: Optional[int] = None,
    engine: Optional[CellEngine] = None,
    config: Optional[Config] = None,
) -> TheoremCheck:
    """Compute Λ₀ of S_side(M, field) and compare it with the prediction."""
    field.require_field()
    engine = engine or CellEngine()
    cs = schur_cell_structure(MonoidSpec(kind, r), RingSpec.integers(), n, side, config, engine.workers)
    computed = tuple(engine.lambda_zero(cs, field))
    check = TheoremCheck(predicted_lambda0(kind, side, field.characteristic, r), computed)
    logger.info(f"{cs.name} over {field.label}: theorem check {check.verdict.value}")
    return check


@dataclass(frozen=True)
class WitnessConstruction:
    mu: Composition
    C: IndexSubset
    D: BlockFamily
    expected: int


@dataclass(frozen=True)
class WitnessResult:
    lam: Partition
    kind: WitnessKind
    side: Side
    r: int
    p: Optional[int]
    construction: WitnessConstruction
    orbit_sizes: Tuple[int, int]
    S: Optional[SemistandardTableau]
    T: Optional[SemistandardTableau]
    computed: int

    @property
    def expected(self) -> int:
        return self.construction.expected

    def _in_field(self, value: int) -> int:
        return value % self.p if self.p else value

    @property
    def agree(self) -> bool:
        return self._in_field(self.expected) == self._in_field(self.computed)

    @property
    def nonzero(self) -> bool:
        return self._in_field(self.computed) != 0

    def to_json(self) -> Dict[str, Any]:
        c = self.construction
        return {
            "lambda": [str(part) for part in self.lam.parts],
            "kind": self.kind.value,
            "side": self.side.value,
            "mu": [str(part) for part in c.mu.parts],
            "C": [str(x) for x in c.C],
            "D": [[str(x) for x in block] for block in c.D],
            "orbit_sizes": [str(size) for size in self.orbit_sizes],
            "S": self.S.to_lists() if self.S else [],
            "T": self.T.to_lists() if self.T else [],
            "expected": str(self.expected),
            "computed": str(self.computed),
            "agree": self.agree,
        }


DEFAULT_SIDES = {
    WitnessKind.CHAR0_FULL: Side.LEFT,
    WitnessKind.RIGHT_P: Side.RIGHT,
    WitnessKind.LEFT_TOP: Side.LEFT,
    WitnessKind.LEFT_P: Side.LEFT,
    WitnessKind.ROOK: Side.LEFT,
}

_ALLOWED_SIDES = {
    WitnessKind.CHAR0_FULL: (Side.LEFT, Side.RIGHT),
    WitnessKind.RIGHT_P: (Side.RIGHT,),
    WitnessKind.LEFT_TOP: (Side.LEFT,),
    WitnessKind.LEFT_P: (Side.LEFT,),
    WitnessKind.ROOK: (Side.LEFT, Side.RIGHT),
}


def witness_monoid(kind: WitnessKind) -> MonoidKind:
    return MonoidKind.ROOK if kind is WitnessKind.ROOK else MonoidKind.FULL


def admissible_partitions(kind: WitnessKind, r: int, p: Optional[int] = None) -> List[Partition]:
    if kind is WitnessKind.CHAR0_FULL:
        return full_poset(r)
    if kind is WitnessKind.RIGHT_P:
        return lambda_p_set(r, _require_prime(p))
    if kind is WitnessKind.LEFT_TOP:
        return sorted(partitions_of(r), key=Partition.sort_key)
    if kind is WitnessKind.LEFT_P:
        return [lam for lam in lambda_Lp_set(r, _require_prime(p)) if lam.index < r]
    return full_poset(r, with_zero=True)


def _normalized(parts: Sequence[int], r: int) -> Composition:
    """Drop zero rows and pad with zeros to r parts."""
    nonzero = tuple(part for part in parts if part)
    return Composition(nonzero + (0,) * (r - len(nonzero)))


def _singletons(entries) -> List[Tuple[int, ...]]:
    return [(x,) for x in entries]


def right_p_parameters(lam: Partition, r: int, p: int) -> Tuple[int, int, int]:
    """(k, a, q): k = k_p(λ), a the lowest row with p^{k+1} ∤ λ_a, q = (r − i)/p^k."""
    k = k_p(lam, p)
    a = max(j for j, part in enumerate(lam.parts, start=1) if part % p ** (k + 1))
    q, remainder = divmod(r - lam.index, p**k)
    if remainder:
        raise InadmissibleError(f"{lam} is not in Λ_p({r}, {p})")
    return k, a, q


def _char0_full(lam: Partition, r: int) -> Tuple[Tuple[int, ...], List[Tuple[int, ...]], int]:
    i = lam.index
    raw = lam.parts + (1,) * (r - i)
    if i == r:
        return raw, _singletons(range(1, r + 1)), 1
    return raw, _singletons(range(1, i)) + [tuple(range(i, r + 1))], lam.parts[-1]


def _right_p(lam: Partition, r: int, p: int):
    k, a, q = right_p_parameters(lam, r, p)
    width = p**k
    m = len(lam)
    raw = lam.parts[: a - 1] + (lam[a - 1] - width, width) + lam.parts[a:] + (width,) * q
    rows = Composition(raw).blocks()
    singles = [x for row in rows[:a] + rows[a + 1 : m + 1] for x in row]
    merged = [
        (rows[a][j],) + tuple(rows[m + 1 + l][j] for l in range(q))
        for j in range(width)
    ]
    return raw, _singletons(singles) + merged, comb(lam[a - 1], width)


def _left_top(lam: Partition, r: int):
    return lam.parts, _singletons(range(1, r + 1)), 1


def _left_p(lam: Partition, r: int, p: int):
    i = lam.index
    a = max(j for j, part in enumerate(lam.parts, start=1) if part % p)
    raw = lam.parts[: a - 1] + (lam[a - 1] - 1, 1) + lam.parts[a:] + (1,) * (r - i)
    x = sum(lam.parts[:a])
    blocks = _singletons(l for l in range(1, i + 1) if l != x) + [(x,) + tuple(range(i + 1, r + 1))]
    return raw, blocks, lam[a - 1]


def _rook(lam: Partition, r: int):
    i = lam.index
    return lam.parts + (1,) * (r - i), _singletons(range(1, i + 1)), 1


def witness_construction(kind: WitnessKind, lam: Partition, r: int, p: Optional[int] = None) -> WitnessConstruction:
    if lam not in admissible_partitions(kind, r, p):
        raise InadmissibleError(f"{lam} is not admissible for the {kind.value} witness at r={r}, p={p}")
    if kind is WitnessKind.CHAR0_FULL:
        raw, blocks, expected = _char0_full(lam, r)
    elif kind is WitnessKind.RIGHT_P:
        raw, blocks, expected = _right_p(lam, r, p)
    elif kind is WitnessKind.LEFT_TOP:
        raw, blocks, expected = _left_top(lam, r)
    elif kind is WitnessKind.LEFT_P:
        raw, blocks, expected = _left_p(lam, r, p)
    else:
        raw, blocks, expected = _rook(lam, r)
    mu = _normalized(raw, r)
    D = SubsetOrdering(r, mu).sort_family(blocks)
    return WitnessConstruction(mu, tuple(range(1, lam.index + 1)), D, expected)


def _unique_weight(lam: Partition, content: Composition) -> SemistandardTableau:
    """The weight word of the canonical tableau, required to come from no other standard tableau."""
    target = weight_word(canonical_tableau(lam), content)
    sources = 0
    for t in standard_tableaux(lam):
        try:
            sources += weight_word(t, content) == target
        except ValueError:
            continue
    if sources != 1:
        raise CellStructureError(f"{sources} standard {lam}-tableaux have weight {target.rows}")
    return target


def witness_bracket(
    kind: WitnessKind,
    lam: Partition,
    r: int,
    p: Optional[int] = None,
    side: Optional[Side] = None,
    config: Optional[Config] = None,
) -> WitnessResult:
    """Build the witness element b for λ and compute its self-bracket."""
    side = side or DEFAULT_SIDES[kind]
    if side not in _ALLOWED_SIDES[kind]:
        raise InadmissibleError(f"the {kind.value} witness lives on the {_ALLOWED_SIDES[kind][0].value} side")
    if kind in (WitnessKind.RIGHT_P, WitnessKind.LEFT_P):
        _require_prime(p)
    construction = witness_construction(kind, lam, r, p)
    mu = construction.mu
    algebra = SchurAlgebra(MonoidSpec(witness_monoid(kind), r), r, side, config)
    ordering = algebra.ordering(mu)
    O_mu = orbit_of_C(mu, construction.C)
    O_nu = orbit_of_D(mu, construction.D, ordering)
    if lam.is_empty:
        S = T = None
    else:
        S = _unique_weight(lam, O_mu.comp)
        T = _unique_weight(lam, O_nu.comp)
    block = algebra.block(mu, mu)
    k = block.position(lam, SchurLeftIndex(O_mu, S), SchurRightIndex(O_nu, T))
    computed = algebra.block_bracket(block, k)
    result = WitnessResult(lam, kind, side, r, p, construction, (O_mu.size, O_nu.size), S, T, computed)
    logger.debug(f"{kind.value} witness at {lam}: expected {result.expected}, computed {computed}")
    return result


def witness_all(
    kind: WitnessKind,
    r: int,
    p: Optional[int] = None,
    side: Optional[Side] = None,
    config: Optional[Config] = None,
) -> List[WitnessResult]:
    results = [witness_bracket(kind, lam, r, p, side, config) for lam in admissible_partitions(kind, r, p)]
    failed = [str(result.lam) for result in results if not result.agree]
    if failed:
        logger.warning(f"{kind.value} witnesses disagree at {', '.join(failed)}")
    return results


def restricted_count(n: int, p: int) -> int:
    return len(p_restricted_partitions(n, p))


def p_adic_expansions(r: int, p: int) -> List[Tuple[int, Tuple[int, ...]]]:
    """Every r = Σ_{m ≤ i ≤ M} s_i p^i with s_m > 0 and s_M > 0, as (m, (s_m, .., s_M))."""
    top = 0
    while p ** (top + 1) <= r:
        top += 1
    result = []
    for coefficients in itertools.product(*(range(r // p**i + 1) for i in range(top + 1))):
        if sum(s * p**i for i, s in enumerate(coefficients)) != r:
            continue
        levels = [i for i, s in enumerate(coefficients) if s]
        m, M = levels[0], levels[-1]
        result.append((m, tuple(coefficients[m : M + 1])))
    return sorted(result)


def count_irreducible_data(r: int, p: int, side: Side) -> int:
    """Number of data tuples parameterizing the irreducible S_side(T_r) modules in characteristic p."""
    _require_prime(p)
    total = 0
    for m, levels in p_adic_expansions(r, p):
        upper = prod(restricted_count(s, p) for s in levels[1:])
        lowest = sum(restricted_count(j, p) for j in range(1, levels[0] + 1))
        if side is Side.LEFT and m > 0:
            lowest = restricted_count(levels[0], p)
        total += upper * lowest
    return total


@dataclass(frozen=True)
class IrreducibleDatum:
    """An expansion (s_m, .., s_M) of r with restricted partitions; ``parts[0]`` has size at most s_m."""

    m: int
    levels: Tuple[int, ...]
    parts: Tuple[Partition, ...]


def irreducible_data_of(lam: Partition, r: int, p: int, side: Side) -> IrreducibleDatum:
    """The datum attached to λ in Λ_p (right) or Λ_{L,p} (left)."""
    admissible = lambda_p_set(r, p) if side is Side.RIGHT else lambda_Lp_set(r, p)
    if lam not in admissible:
        raise InadmissibleError(f"{lam} is not in the {side.value} set for r={r}, p={p}")
    dec = p_adic_decompose(lam, p)
    padding, remainder = divmod(r - lam.index, p**dec.m)
    if remainder:
        raise CellStructureError(f"{lam}: p^m does not divide r − i")
    levels = (dec.s_levels[0] + padding,) + dec.s_levels[1:]
    return IrreducibleDatum(dec.m, levels, dec.restricted_parts)


def partition_of_datum(datum: IrreducibleDatum, p: int) -> Partition:
    sizes = (datum.parts[0].index,) + datum.levels[1:]
    return p_adic_reconstruct(PAdicDecomposition(p, datum.m, sizes, datum.parts))
