"""Left and right generalized Schur algebras A_L and A_R over Z.

The natural basis is the set of double coset sums X(S_μ α S_ν) over all
(μ, ν) in Λ(r, n)². Products are computed in Z[M], regrouped on double
cosets and rescaled by n_L or n_R. Cell elements are the Φ-images of
weight-grouped Murphy sums, built one summand ^{O_μ}A^{O_ν} at a time with
the ν-dependent subset ordering on the D side.
"""

import logging
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import cache
from typing import Any, Dict, List, Optional, Tuple

from cellschur.config import Config
from cellschur.core.algebra import (
    RingSpec,
    Scalar,
    SparseAlgebraElement,
    accumulate,
    integer_determinant,
    integer_inverse,
    solve_rational,
)
from cellschur.core.combinatorics import (
    LAMBDA_ZERO,
    Composition,
    Partition,
    Permutation,
    SemistandardTableau,
    compose_permutations,
    compositions,
    partitions_of,
    semistandard_tableaux,
    symmetric_group,
    weight_word,
    young_subgroup,
)
from cellschur.core.enums import Side
from cellschur.core.errors import CellStructureError
from cellschur.core.monoid import (
    BlockFamily,
    Images,
    IndexSubset,
    MonoidSpec,
    PartialMap,
    SubsetOrdering,
    act_on_family,
    act_on_subset,
    assemble_images,
    compose_images,
    enumerate_monoid,
    factorize,
    index_subsets,
    psi_map,
    reachable_block_families,
)
from cellschur.services.cell_engine import CellStructure, to_cell_coords
from cellschur.services.monoid_cells import GroupElement, group_multiply, murphy_basis

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OrbitC:
    """An S_μ-orbit on C(i, r) with its common composition μ(C)."""

    mu: Composition
    members: Tuple[IndexSubset, ...]
    comp: Composition

    @property
    def index(self) -> int:
        return self.comp.total

    @property
    def size(self) -> int:
        return len(self.members)

    def __str__(self) -> str:
        return f"O(mu={self.mu}, C={list(self.members[0])})"


@dataclass(frozen=True)
class OrbitD:
    """An S_ν-orbit on D(M, i, r); comp counts blocks per ν-orbit slot."""

    nu: Composition
    members: Tuple[BlockFamily, ...]
    comp: Composition

    @property
    def index(self) -> int:
        return self.comp.total

    @property
    def size(self) -> int:
        return len(self.members)

    def __str__(self) -> str:
        return f"O(nu={self.nu}, D={[list(d) for d in self.members[0]]})"


@cache
def orbit_of_C(mu: Composition, C: IndexSubset) -> OrbitC:
    members = sorted({act_on_subset(rho, C) for rho in young_subgroup(mu)})
    chosen = set(C)
    comp = Composition(tuple(len(chosen.intersection(block)) for block in mu.blocks()))
    return OrbitC(mu, tuple(members), comp)


@cache
def orbit_of_D(nu: Composition, D: BlockFamily, ordering: SubsetOrdering) -> OrbitD:
    if ordering.nu != nu:
        raise ValueError(f"orbit of {D} under S_{nu} needs the {nu}-ordering, got {ordering}")
    if not ordering.is_sorted(D):
        raise ValueError(f"block family {D} is not sorted under {ordering}")
    members = {act_on_family(D, pi, ordering) for pi in young_subgroup(nu)}
    counts = [0] * ordering.orbit_count
    for block in D:
        counts[ordering.orbit_slot(block) - 1] += 1
    ordered = sorted(members, key=lambda family: [ordering.key(block) for block in family])
    return OrbitD(nu, tuple(ordered), Composition(tuple(counts)))


def _preserves_blocks(perm: Permutation, comp: Composition) -> bool:
    return all(comp.block_of(x) == comp.block_of(y) for x, y in enumerate(perm, start=1))


def intertwiner_rho_C(mu: Composition, C: IndexSubset, rho: Permutation) -> Permutation:
    """The unique ρ_C in S_{μ(C)} with ρ ∘ φ_C = φ_{ρC} ∘ ρ_C."""
    if not _preserves_blocks(rho, mu):
        raise ValueError(f"{rho} is not in S_{mu}")
    moved = act_on_subset(rho, C)
    position = {c: j for j, c in enumerate(moved, start=1)}
    rho_C = tuple(position[rho[c - 1]] for c in C)
    for j, c in enumerate(C, start=1):
        if rho[c - 1] != moved[rho_C[j - 1] - 1]:
            raise CellStructureError(f"ρ_C fails at {j} for ρ={rho}, C={C}")
    comp = orbit_of_C(mu, C).comp
    if not _preserves_blocks(rho_C, comp):
        raise CellStructureError(f"ρ_C = {rho_C} is not in S_{comp}")
    return rho_C


def intertwiner_pi_D(
    nu: Composition,
    D: BlockFamily,
    pi: Permutation,
    ordering: Optional[SubsetOrdering] = None,
) -> Permutation:
    """The unique π_D in S_{ν(D)} with ψ_D ∘ π = π_D ∘ ψ_{Dπ}."""
    ordering = ordering or SubsetOrdering(len(pi), nu)
    if not _preserves_blocks(pi, nu):
        raise ValueError(f"{pi} is not in S_{nu}")
    moved = act_on_family(D, pi, ordering)
    psi = psi_map(D, ordering)
    psi_moved = psi_map(moved, ordering)
    pi_D = tuple(psi[pi[block[0] - 1] - 1] for block in moved)
    for x in range(1, len(pi) + 1):
        lhs = psi[pi[x - 1] - 1]
        rhs = pi_D[psi_moved[x - 1] - 1] if psi_moved[x - 1] else 0
        if lhs != rhs:
            raise CellStructureError(f"π_D fails at {x} for π={pi}, D={D}")
    comp = orbit_of_D(nu, D, ordering).comp
    if not _preserves_blocks(pi_D, comp):
        raise CellStructureError(f"π_D = {pi_D} is not in S_{comp}")
    return pi_D


@dataclass(frozen=True)
class DoubleCoset:
    mu: Composition
    nu: Composition
    representative: Images
    members: Tuple[Images, ...]
    n_L: int
    n_R: int
    orbit_C: OrbitC
    orbit_D: OrbitD

    @property
    def index(self) -> int:
        return self.orbit_C.index

    @property
    def size(self) -> int:
        return len(self.members)

    def to_json(self) -> Dict[str, Any]:
        return {
            "mu": [str(p) for p in self.mu.parts],
            "nu": [str(p) for p in self.nu.parts],
            "representative": [str(v) for v in self.representative],
            "size": str(self.size),
            "nL": str(self.n_L),
            "nR": str(self.n_R),
        }


@cache
def _double_cosets(spec: MonoidSpec, mu: Composition, nu: Composition) -> Tuple[DoubleCoset, ...]:
    monoid = enumerate_monoid(spec)
    ordering = SubsetOrdering(spec.r, nu)
    left_group, right_group = young_subgroup(mu), young_subgroup(nu)
    seen = set()
    cosets = []
    # monoid elements come in lexicographic order, so the first member met is the least
    for alpha in monoid.elements:
        if alpha.images in seen:
            continue
        left_coset = {compose_images(rho, alpha.images) for rho in left_group}
        right_coset = {compose_images(alpha.images, pi) for pi in right_group}
        members = {compose_images(m, pi) for m in left_coset for pi in right_group}
        seen |= members
        f = factorize(alpha, ordering)
        cosets.append(DoubleCoset(
            mu,
            nu,
            alpha.images,
            tuple(sorted(members)),
            len(left_coset),
            len(right_coset),
            orbit_of_C(mu, f.C),
            orbit_of_D(nu, f.D, ordering),
        ))
    return tuple(cosets)


def double_cosets(
    spec: MonoidSpec,
    mu: Composition,
    nu: Composition,
    config: Optional[Config] = None,
) -> Tuple[DoubleCoset, ...]:
    """_μM_ν: the double cosets S_μ α S_ν partitioning M."""
    (config or Config()).require_rank(spec.r)
    if mu.total != spec.r or nu.total != spec.r:
        raise ValueError(f"compositions {mu} and {nu} must both have weight {spec.r}")
    return _double_cosets(spec, mu, nu)


@dataclass(frozen=True)
class CosetPiece:
    C: IndexSubset
    D: BlockFamily
    members: Tuple[Images, ...]


def coset_decomposition(
    mu: Composition,
    nu: Composition,
    alpha: PartialMap,
    ordering: Optional[SubsetOrdering] = None,
) -> List[CosetPiece]:
    """S_μ α S_ν as the disjoint union of φ_C·S_{μ(C)}σ_αS_{ν(D)}·ψ_D over the two orbits."""
    ordering = ordering or SubsetOrdering(alpha.r, nu)
    f = factorize(alpha, ordering)
    O_mu, O_nu = orbit_of_C(mu, f.C), orbit_of_D(nu, f.D, ordering)
    core = {
        compose_permutations(g, compose_permutations(f.sigma, h))
        for g in young_subgroup(O_mu.comp)
        for h in young_subgroup(O_nu.comp)
    }
    pieces = []
    union = set()
    for C in O_mu.members:
        for D in O_nu.members:
            psi = psi_map(D, ordering)
            members = {assemble_images(sigma, C, psi) for sigma in core}
            if len(members) != len(core):
                raise CellStructureError(f"piece ({C}, {D}) of the coset of {alpha.images} collapses")
            if union & members:
                raise CellStructureError(f"pieces of the coset of {alpha.images} overlap at ({C}, {D})")
            union |= members
            pieces.append(CosetPiece(C, D, tuple(sorted(members))))
    full = {
        compose_images(compose_images(rho, alpha.images), pi)
        for rho in young_subgroup(mu)
        for pi in young_subgroup(nu)
    }
    if union != full:
        raise CellStructureError(
            f"pieces cover {len(union)} maps, the double coset of {alpha.images} has {len(full)}"
        )
    return pieces


@dataclass(frozen=True)
class SummandElement:
    shape: Partition
    S: SemistandardTableau
    T: SemistandardTableau
    expansion: Tuple[Tuple[Permutation, int], ...]

    def as_dict(self) -> GroupElement:
        return dict(self.expansion)


@cache
def invariant_double_cosets(left: Composition, right: Composition) -> Tuple[Permutation, ...]:
    """Least representatives of S_left \\ S_i / S_right."""
    seen = set()
    representatives = []
    for sigma in symmetric_group(left.total):
        if sigma in seen:
            continue
        representatives.append(sigma)
        seen |= {
            compose_permutations(g, compose_permutations(sigma, h))
            for g in young_subgroup(left)
            for h in young_subgroup(right)
        }
    return tuple(representatives)


@cache
def _summand_basis(left: Composition, right: Composition) -> Tuple[SummandElement, ...]:
    i = left.total
    basis = murphy_basis(i)
    grouped: Dict[tuple, GroupElement] = {}
    for element in basis.elements:
        try:
            key = (element.shape, weight_word(element.s, left), weight_word(element.t, right))
        except ValueError:
            continue
        accumulate(grouped.setdefault(key, {}), element.expansion)

    elements = []
    for lam in sorted(partitions_of(i), key=Partition.sort_key):
        for S in semistandard_tableaux(lam, left):
            for T in semistandard_tableaux(lam, right):
                x = grouped.get((lam, S, T))
                if not x:
                    raise CellStructureError(f"no standard pair has weights ({S.rows}, {T.rows})")
                elements.append(SummandElement(lam, S, T, tuple(sorted(x.items()))))

    left_group, right_group = young_subgroup(left), young_subgroup(right)
    for element in elements:
        x = element.as_dict()
        if any(group_multiply({g: 1}, x) != x for g in left_group) or any(
            group_multiply(x, {h: 1}) != x for h in right_group
        ):
            raise CellStructureError(
                f"summand element ({element.S.rows}, {element.T.rows}) is not S_{left} x S_{right} invariant"
            )

    representatives = invariant_double_cosets(left, right)
    if len(representatives) != len(elements):
        raise CellStructureError(
            f"{len(elements)} semistandard elements for {len(representatives)} double cosets of S_{left}, S_{right}"
        )
    matrix = [[element.as_dict().get(sigma, 0) for sigma in representatives] for element in elements]
    determinant = integer_determinant(matrix)
    if abs(determinant) != 1:
        raise CellStructureError(f"semistandard elements for ({left}, {right}) have determinant {determinant}")
    return tuple(elements)


def summand_basis(O_mu: OrbitC, O_nu: OrbitD) -> Tuple[SummandElement, ...]:
    """A Z-basis of the S_{μ(O_μ)} x S_{ν(O_ν)}-invariant part of Z[S_i]."""
    if O_mu.index != O_nu.index:
        raise ValueError(f"orbits {O_mu} and {O_nu} have different indices")
    return _summand_basis(O_mu.comp, O_nu.comp)


@dataclass(frozen=True)
class SchurLeftIndex:
    orbit: OrbitC
    S: Optional[SemistandardTableau]

    @property
    def mu(self) -> Composition:
        return self.orbit.mu

    def __str__(self) -> str:
        return f"({self.orbit}, S={self.S.to_lists() if self.S else []})"


@dataclass(frozen=True)
class SchurRightIndex:
    orbit: OrbitD
    T: Optional[SemistandardTableau]

    @property
    def nu(self) -> Composition:
        return self.orbit.nu

    def __str__(self) -> str:
        return f"({self.orbit}, T={self.T.to_lists() if self.T else []})"


@dataclass(frozen=True)
class SchurCell:
    lam: Partition
    left: SchurLeftIndex
    right: SchurRightIndex
    expansion: Tuple[Tuple[int, int], ...]


@dataclass(frozen=True)
class SchurBlock:
    """The cell elements lying in ^μA^ν and the inverse change of basis on _μM_ν."""

    mu: Composition
    nu: Composition
    cosets: Tuple[int, ...]
    cells: Tuple[SchurCell, ...]
    inverse: Dict[int, Dict[int, int]]

    def coordinates(self, x: Dict[int, Scalar]) -> Dict[int, Scalar]:
        result: Dict[int, Scalar] = {}
        for c, value in x.items():
            if c not in self.inverse:
                raise CellStructureError(f"double coset {c} does not lie in the ({self.mu}, {self.nu}) summand")
            accumulate(result, self.inverse[c].items(), value)
        return result

    def position(self, lam: Partition, left: SchurLeftIndex, right: SchurRightIndex) -> int:
        for k, cell in enumerate(self.cells):
            if (cell.lam, cell.left, cell.right) == (lam, left, right):
                return k
        raise KeyError(f"no cell ({lam}, {left}, {right}) in the ({self.mu}, {self.nu}) summand")


class SchurAlgebra:
    """The double coset algebra of M with the *_L or *_R product.

    Double cosets are numbered lazily per (μ, ν) the first time they are
    needed; call ``all_cosets`` first to fix the canonical numbering.
    """

    def __init__(
        self,
        spec: MonoidSpec,
        n: Optional[int] = None,
        side: Side = Side.LEFT,
        config: Optional[Config] = None,
    ):
        self.config = config or Config()
        self.config.require_rank(spec.r)
        n = spec.r if n is None else n
        if n < spec.r:
            raise ValueError(f"n = {n} must be at least r = {spec.r}")
        self.spec = spec
        self.r = spec.r
        self.n = n
        self.side = side
        self.monoid = enumerate_monoid(spec, self.config)
        self.compositions = compositions(spec.r, n)
        self._cosets: List[DoubleCoset] = []
        self._ids: Dict[Tuple[Composition, Composition], Tuple[int, ...]] = {}
        self._lookup: Dict[Tuple[Composition, Composition], Dict[Images, int]] = {}
        self._orderings: Dict[Composition, SubsetOrdering] = {}
        self._products: Dict[Tuple[int, int], Dict[int, int]] = {}
        self._blocks: Dict[Tuple[Composition, Composition], SchurBlock] = {}

    def __repr__(self) -> str:
        return f"SchurAlgebra({self.name!r})"

    @property
    def name(self) -> str:
        return f"schur:{self.side.value}:{self.spec.kind.value}:r={self.r}:n={self.n}"

    def describe(self) -> Dict[str, str]:
        return {"kind": self.spec.kind.value, "r": str(self.r), "n": str(self.n), "side": self.side.value}

    def ordering(self, nu: Composition) -> SubsetOrdering:
        if nu not in self._orderings:
            self._orderings[nu] = SubsetOrdering(self.r, nu)
        return self._orderings[nu]

    def cosets(self, mu: Composition, nu: Composition) -> Tuple[int, ...]:
        key = (mu, nu)
        if key not in self._ids:
            found = double_cosets(self.spec, mu, nu, self.config)
            start = len(self._cosets)
            self._cosets.extend(found)
            ids = tuple(range(start, start + len(found)))
            self._ids[key] = ids
            self._lookup[key] = {m: c for c, coset in zip(ids, found) for m in coset.members}
        return self._ids[key]

    def all_cosets(self) -> Tuple[int, ...]:
        ids: List[int] = []
        for mu in self.compositions:
            for nu in self.compositions:
                ids.extend(self.cosets(mu, nu))
        return tuple(ids)

    def coset(self, c: int) -> DoubleCoset:
        return self._cosets[c]

    def coset_id(self, mu: Composition, nu: Composition, images: Images) -> int:
        self.cosets(mu, nu)
        return self._lookup[(mu, nu)][images]

    @property
    def dimension(self) -> int:
        return len(self._cosets)

    def weight(self, c: int) -> int:
        coset = self._cosets[c]
        return coset.n_L if self.side is Side.LEFT else coset.n_R

    def _regroup(self, counts: Dict[Images, Scalar], mu: Composition, nu: Composition, what: str) -> Dict[int, Scalar]:
        """Coefficients on X(D), D in _μM_ν, of an element of Z[M] given by its map counts."""
        ids = self.cosets(mu, nu)
        lookup = self._lookup[(mu, nu)]
        result = {}
        for c in ids:
            value = counts.get(self._cosets[c].representative, 0)
            if value:
                result[c] = value
        for images, value in counts.items():
            c = lookup.get(images)
            if c is None or result.get(c, 0) != value:
                raise CellStructureError(f"{what} is not a combination of ({mu}, {nu}) double coset sums")
        return result

    def ordinary_product(self, a: int, b: int) -> Dict[int, int]:
        """{D: a(D_1, D_2, D)} from X(D_1)·X(D_2) in Z[M]; empty when the middle compositions differ."""
        first, second = self._cosets[a], self._cosets[b]
        if first.nu != second.mu:
            return {}
        counts = Counter(compose_images(m1, m2) for m1 in first.members for m2 in second.members)
        return self._regroup(counts, first.mu, second.nu, f"X({a})·X({b})")

    def star_product(self, a: int, b: int) -> Dict[int, int]:
        cached = self._products.get((a, b))
        if cached is not None:
            return cached
        result = {}
        for c, value in self.ordinary_product(a, b).items():
            scaled = Fraction(self.weight(c) * value, self.weight(a) * self.weight(b))
            if scaled.denominator != 1:
                raise CellStructureError(
                    f"{self.name}: X({a}) * X({b}) has coefficient {scaled} at X({c})"
                )
            result[c] = scaled.numerator
        self._products[(a, b)] = result
        return result

    def multiply(self, x: Dict[int, Scalar], y: Dict[int, Scalar]) -> Dict[int, Scalar]:
        result: Dict[int, Scalar] = {}
        for a, ca in x.items():
            for b, cb in y.items():
                accumulate(result, self.star_product(a, b).items(), ca * cb)
        return result

    def ordinary_multiply(self, x: Dict[int, Scalar], y: Dict[int, Scalar]) -> Dict[int, Scalar]:
        result: Dict[int, Scalar] = {}
        for a, ca in x.items():
            for b, cb in y.items():
                accumulate(result, self.ordinary_product(a, b).items(), ca * cb)
        return result

    def identity_element(self) -> SparseAlgebraElement:
        """Σ_μ X(S_μ id S_μ), checked two-sidedly; solved for exactly if the check fails."""
        ids = self.all_cosets()
        identity = tuple(range(1, self.r + 1))
        candidate = {self.coset_id(mu, mu, identity): 1 for mu in self.compositions}
        if all(self._is_unit_on(candidate, b) for b in ids):
            return SparseAlgebraElement(candidate, self.name)

        logger.warning(f"{self.name}: Σ X(S_μ id S_μ) is not an identity, solving for one")
        rows, rhs = [], []
        for b in ids:
            for products in (
                [self.star_product(k, b) for k in ids],
                [self.star_product(b, k) for k in ids],
            ):
                for target in ids:
                    rows.append([products[k].get(target, 0) for k in range(len(ids))])
                    rhs.append(1 if target == b else 0)
        solution = solve_rational(rows, rhs)
        if solution is None:
            raise CellStructureError(f"{self.name} has no identity element")
        return SparseAlgebraElement(dict(enumerate(solution)), self.name).integral()

    def _is_unit_on(self, e: Dict[int, Scalar], b: int) -> bool:
        return self.multiply(e, {b: 1}) == {b: 1} and self.multiply({b: 1}, e) == {b: 1}

    def phi_transfer(self, O_mu: OrbitC, O_nu: OrbitD, x: GroupElement) -> SparseAlgebraElement:
        """Φ(O_μ, O_ν)(x) = Σ_{C ∈ O_μ} Σ_{D ∈ O_ν} φ_C ∘ x ∘ ψ_D on the double coset basis."""
        mu, nu = O_mu.mu, O_nu.nu
        ordering = self.ordering(nu)
        counts: Dict[Images, int] = {}
        for C in O_mu.members:
            for D in O_nu.members:
                psi = psi_map(D, ordering)
                for sigma, c in x.items():
                    accumulate(counts, [(assemble_images(sigma, C, psi), 1)], c)
        return SparseAlgebraElement(self._regroup(counts, mu, nu, f"Φ({O_mu}, {O_nu})"), self.name)

    def c_orbits(self, mu: Composition, i: int) -> Tuple[OrbitC, ...]:
        found = {orbit_of_C(mu, C) for C in index_subsets(i, self.r)}
        return tuple(sorted(found, key=lambda orbit: orbit.members))

    def d_orbits(self, nu: Composition, i: int) -> Tuple[OrbitD, ...]:
        ordering = self.ordering(nu)
        if i == 0:
            return (orbit_of_D(nu, (), ordering),)
        found = {orbit_of_D(nu, D, ordering) for D in reachable_block_families(self.monoid, i, ordering)}
        return tuple(sorted(found, key=lambda orbit: [ordering.key(block) for block in orbit.members[0]]))

    def left_indices(self, lam: Partition) -> Tuple[SchurLeftIndex, ...]:
        """L(λ): every (O_μ, S) over μ in Λ(r, n)."""
        result = []
        for mu in self.compositions:
            for orbit in self.c_orbits(mu, lam.index):
                if lam.is_empty:
                    result.append(SchurLeftIndex(orbit, None))
                else:
                    result.extend(SchurLeftIndex(orbit, S) for S in semistandard_tableaux(lam, orbit.comp))
        return tuple(result)

    def right_indices(self, lam: Partition) -> Tuple[SchurRightIndex, ...]:
        """R(λ): every (O_ν, T) over ν in Λ(r, n)."""
        result = []
        for nu in self.compositions:
            for orbit in self.d_orbits(nu, lam.index):
                if lam.is_empty:
                    result.append(SchurRightIndex(orbit, None))
                else:
                    result.extend(SchurRightIndex(orbit, T) for T in semistandard_tableaux(lam, orbit.comp))
        return tuple(result)

    def block(self, mu: Composition, nu: Composition) -> SchurBlock:
        key = (mu, nu)
        if key in self._blocks:
            return self._blocks[key]
        ids = self.cosets(mu, nu)
        groups: Dict[Tuple[OrbitC, OrbitD], List[int]] = {}
        for c in ids:
            coset = self._cosets[c]
            groups.setdefault((coset.orbit_C, coset.orbit_D), []).append(c)
        ordering = self.ordering(nu)

        def group_key(item):
            (O_mu, O_nu), _ = item
            return (O_mu.index, O_mu.members, [ordering.key(block) for block in O_nu.members[0]])

        cells: List[SchurCell] = []
        inverse: Dict[int, Dict[int, int]] = {}
        for (O_mu, O_nu), members in sorted(groups.items(), key=group_key):
            if O_mu.index == 0:
                elements = [(LAMBDA_ZERO, None, None, {(): 1})]
            else:
                elements = [(e.shape, e.S, e.T, e.as_dict()) for e in summand_basis(O_mu, O_nu)]
            if len(elements) != len(members):
                raise CellStructureError(
                    f"summand ({O_mu}, {O_nu}) has {len(members)} double cosets but {len(elements)} cell elements"
                )
            offset = len(cells)
            rows = []
            for lam, S, T, x in elements:
                image = self.phi_transfer(O_mu, O_nu, x)
                cells.append(SchurCell(lam, SchurLeftIndex(O_mu, S), SchurRightIndex(O_nu, T), tuple(image)))
                rows.append([int(image[c]) for c in members])
            for j, row in enumerate(integer_inverse(rows)):
                inverse[members[j]] = {offset + k: v for k, v in enumerate(row) if v}
        block = SchurBlock(mu, nu, ids, tuple(cells), inverse)
        self._blocks[key] = block
        return block

    def block_bracket(self, block: SchurBlock, k: int) -> int:
        """The r with b * b ≡ r·b modulo the layers above λ, for the k-th cell b of a block."""
        cell = block.cells[k]
        if block.mu != block.nu:
            return 0
        b = dict(cell.expansion)
        coords = block.coordinates(self.multiply(b, b))
        stray = {
            j: v for j, v in coords.items()
            if j != k and v and block.cells[j].lam == cell.lam
        }
        if stray:
            raise CellStructureError(f"{self.name}: b * b at {cell.lam} has stray layer terms {stray}")
        return int(coords.get(k, 0))


_structures: Dict[tuple, Tuple[CellStructure, SchurAlgebra]] = {}


def schur_algebra_and_cells(
    spec: MonoidSpec,
    ring: RingSpec,
    n: Optional[int] = None,
    side: Side = Side.LEFT,
    config: Optional[Config] = None,
    workers: int = 1,
) -> Tuple[CellStructure, SchurAlgebra]:
    config = config or Config()
    n = spec.r if n is None else n
    key = (spec, ring, n, side)
    if key in _structures:
        return _structures[key]

    algebra = SchurAlgebra(spec, n, side, config)
    ids = algebra.all_cosets()
    config.require_dimension(len(ids))

    pairs = [(mu, nu) for mu in algebra.compositions for nu in algebra.compositions]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            blocks = list(executor.map(lambda pair: algebra.block(*pair), pairs))
    else:
        blocks = [algebra.block(mu, nu) for mu, nu in pairs]

    poset: List[Partition] = []
    if algebra.monoid.has_zero:
        poset.append(LAMBDA_ZERO)
    for i in sorted(algebra.monoid.indices - {0}):
        poset.extend(sorted(partitions_of(i), key=Partition.sort_key))
    left_index = {lam: algebra.left_indices(lam) for lam in poset}
    right_index = {lam: algebra.right_indices(lam) for lam in poset}
    left_position = {lam: {index: k for k, index in enumerate(left_index[lam])} for lam in poset}
    right_position = {lam: {index: k for k, index in enumerate(right_index[lam])} for lam in poset}

    labels, cell_expansion = [], []
    natural_to_cells: List[Dict[int, int]] = [dict() for _ in ids]
    for block in blocks:
        offset = len(labels)
        for cell in block.cells:
            labels.append((cell.lam, left_position[cell.lam][cell.left], right_position[cell.lam][cell.right]))
            cell_expansion.append(dict(cell.expansion))
        for c, row in block.inverse.items():
            natural_to_cells[c] = {offset + k: v for k, v in row.items()}

    cs = CellStructure(
        name=algebra.name,
        ring=ring,
        poset=poset,
        left_index=left_index,
        right_index=right_index,
        cell_labels=labels,
        cell_expansion=cell_expansion,
        natural_to_cells=natural_to_cells,
        natural_labels=[_coset_label(algebra.coset(c)) for c in ids],
        product=algebra.star_product,
    )
    logger.info(f"Built {cs.name}: {cs.dimension} double cosets over {len(poset)} layers")
    _structures[key] = (cs, algebra)
    return cs, algebra


def _coset_label(coset: DoubleCoset) -> str:
    return f"X(mu={coset.mu}, nu={coset.nu}, rep={list(coset.representative)})"


def schur_cell_structure(
    spec: MonoidSpec,
    ring: RingSpec,
    n: Optional[int] = None,
    side: Side = Side.LEFT,
    config: Optional[Config] = None,
    workers: int = 1,
) -> CellStructure:
    """The cell basis {Φ(O_μ, O_ν)(_SC_T^λ)} of A_L or A_R, with z per (μ, ν) when z ∈ M."""
    return schur_algebra_and_cells(spec, ring, n, side, config, workers)[0]


def star_product_in_cell_basis(cs: CellStructure, algebra: SchurAlgebra, k1: int, k2: int) -> Dict[int, Scalar]:
    """b_1 * b_2 in cell coordinates, rescaling the ordinary product cell by cell.

    Every cell element lies in one summand ^{O_μ}A^{O_ν}, so its weight is the
    weight of any double coset in its expansion.
    """
    x, y = cs.cell_expansion[k1], cs.cell_expansion[k2]
    ordinary = to_cell_coords(SparseAlgebraElement(algebra.ordinary_multiply(x, y)), cs)

    def weight(k: int) -> int:
        return algebra.weight(next(iter(cs.cell_expansion[k])))

    result = {}
    for k, value in ordinary.items():
        scaled = Fraction(weight(k) * value, weight(k1) * weight(k2))
        if scaled.denominator != 1:
            raise CellStructureError(f"{cs.name}: rescaled cell product has coefficient {scaled}")
        if scaled:
            result[k] = scaled.numerator
    return result


def schur_summary(cs: CellStructure, algebra: SchurAlgebra) -> Dict[str, Any]:
    by_index = Counter(algebra.coset(c).index for c in range(algebra.dimension))
    return {
        "algebra": algebra.describe(),
        "basis_size": str(cs.dimension),
        "layers": [
            {
                "lambda": [str(p) for p in lam.parts],
                "L_size": str(len(cs.left_index[lam])),
                "R_size": str(len(cs.right_index[lam])),
            }
            for lam in cs.poset
        ],
        "double_cosets_by_index": {str(i): str(count) for i, count in sorted(by_index.items())},
        "summands": [
            {
                "mu": [str(p) for p in mu.parts],
                "nu": [str(p) for p in nu.parts],
                "double_cosets": str(len(algebra.cosets(mu, nu))),
                "cells": str(len(algebra.block(mu, nu).cells)),
            }
            for mu in algebra.compositions
            for nu in algebra.compositions
        ],
    }
