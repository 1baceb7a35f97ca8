"""Cell bases of R[M] for M in {T_r, ℜ_r, PT_r}.

The Murphy basis of Z[S_i] is transported into every summand A(C, D) of
R[M] by H_{C,D}(σ) = φ_C ∘ σ ∘ ψ_D. Products in the symmetric group and in
the monoid are compositions of maps, (αβ)(x) = α(β(x)).
"""

import logging
from dataclasses import dataclass
from functools import cache
from typing import Dict, List, Optional, Tuple

from cellschur.config import Config
from cellschur.core.algebra import RingSpec, SparseAlgebraElement, accumulate, integer_determinant, integer_inverse
from cellschur.core.combinatorics import (
    LAMBDA_ZERO,
    Composition,
    Partition,
    Permutation,
    StandardTableau,
    canonical_tableau,
    compose_permutations,
    invert_permutation,
    partitions_of,
    standard_tableaux,
    symmetric_group,
    young_subgroup,
)
from cellschur.core.monoid import (
    BlockFamily,
    IndexSubset,
    Monoid,
    MonoidSpec,
    SubsetOrdering,
    assemble_images,
    compose_images,
    enumerate_monoid,
    index_of_images,
    index_subsets,
    psi_map,
    reachable_block_families,
)
from cellschur.services.cell_engine import CellEngine, CellStructure

logger = logging.getLogger(__name__)

GroupElement = Dict[Permutation, int]


@dataclass(frozen=True)
class MurphyElement:
    shape: Partition
    s: StandardTableau
    t: StandardTableau
    expansion: Tuple[Tuple[Permutation, int], ...]

    def as_dict(self) -> GroupElement:
        return dict(self.expansion)


def tableau_permutation(t: StandardTableau) -> Permutation:
    """d(t): sends the entry in each box of t to the entry of the canonical tableau in that box."""
    canonical = canonical_tableau(t.shape)
    images = [0] * t.shape.index
    for row, canonical_row in zip(t.rows, canonical.rows):
        for entry, target in zip(row, canonical_row):
            images[entry - 1] = target
    return tuple(images)


def group_multiply(x: GroupElement, y: GroupElement) -> GroupElement:
    result: GroupElement = {}
    for a, ca in x.items():
        for b, cb in y.items():
            accumulate(result, [(compose_permutations(a, b), 1)], ca * cb)
    return result


@dataclass(frozen=True)
class MurphyBasis:
    """The Murphy basis of Z[S_i] with its exact change of basis.

    ``forward[k][j]`` is the coefficient of permutation j in element k;
    ``inverse[j][k]`` writes permutation j back in the Murphy basis.
    """

    i: int
    elements: Tuple[MurphyElement, ...]
    permutations: Tuple[Permutation, ...]
    forward: Tuple[Tuple[int, ...], ...]
    inverse: Tuple[Tuple[int, ...], ...]
    determinant: int

    def position(self, lam: Partition, s: StandardTableau, t: StandardTableau) -> int:
        for k, element in enumerate(self.elements):
            if element.shape == lam and element.s == s and element.t == t:
                return k
        raise KeyError(f"no Murphy element ({lam}, {s.rows}, {t.rows})")

    def coordinates(self, x: GroupElement) -> Dict[int, int]:
        """Murphy coordinates of an element of Z[S_i]."""
        index = {perm: j for j, perm in enumerate(self.permutations)}
        result: Dict[int, int] = {}
        for perm, c in x.items():
            accumulate(result, [(k, v) for k, v in enumerate(self.inverse[index[perm]]) if v], c)
        return result


@cache
def _murphy_basis(i: int) -> MurphyBasis:
    permutations = symmetric_group(i)
    index = {perm: j for j, perm in enumerate(permutations)}
    elements = []
    for lam in partitions_of(i):
        row_group = young_subgroup(Composition(lam.parts))
        for s in standard_tableaux(lam):
            d_s_inverse = invert_permutation(tableau_permutation(s))
            for t in standard_tableaux(lam):
                d_t = tableau_permutation(t)
                expansion = sorted(
                    (compose_permutations(d_s_inverse, compose_permutations(g, d_t)), 1)
                    for g in row_group
                )
                elements.append(MurphyElement(lam, s, t, tuple(expansion)))
    forward = []
    for element in elements:
        row = [0] * len(permutations)
        for perm, c in element.expansion:
            row[index[perm]] += c
        forward.append(tuple(row))
    determinant = integer_determinant([list(row) for row in forward])
    inverse = integer_inverse([list(row) for row in forward])
    logger.debug(f"Murphy basis of Z[S_{i}]: {len(elements)} elements, determinant {determinant}")
    return MurphyBasis(
        i,
        tuple(elements),
        permutations,
        tuple(forward),
        tuple(tuple(row) for row in inverse),
        determinant,
    )


def murphy_basis(i: int, config: Optional[Config] = None) -> MurphyBasis:
    (config or Config()).require_symmetric_degree(i)
    return _murphy_basis(i)


_structures: Dict[tuple, CellStructure] = {}


def symmetric_cell_structure(i: int, ring: RingSpec, config: Optional[Config] = None) -> CellStructure:
    """Z[S_i] (or a field version) with its Murphy cell structure."""
    basis = murphy_basis(i, config)
    key = ("symmetric", i, ring)
    if key in _structures:
        return _structures[key]
    index = {perm: j for j, perm in enumerate(basis.permutations)}
    poset = sorted(partitions_of(i), key=Partition.sort_key)
    tableaux = {lam: standard_tableaux(lam) for lam in poset}
    labels = []
    for element in basis.elements:
        lam = element.shape
        labels.append((lam, tableaux[lam].index(element.s), tableaux[lam].index(element.t)))
    cell_expansion = [{index[perm]: c for perm, c in element.expansion} for element in basis.elements]
    natural_to_cells = [{k: v for k, v in enumerate(row) if v} for row in basis.inverse]

    def product(a: int, b: int) -> Dict[int, int]:
        return {index[compose_permutations(basis.permutations[a], basis.permutations[b])]: 1}

    cs = CellStructure(
        name=f"symmetric:i={i}",
        ring=ring,
        poset=poset,
        left_index=tableaux,
        right_index=tableaux,
        cell_labels=labels,
        cell_expansion=cell_expansion,
        natural_to_cells=natural_to_cells,
        natural_labels=basis.permutations,
        product=product,
    )
    _structures[key] = cs
    return cs


def h_cd_images(C: IndexSubset, D: BlockFamily, sigma: Permutation, ordering: SubsetOrdering):
    return assemble_images(sigma, C, psi_map(D, ordering))


def h_cd(
    C: IndexSubset,
    D: BlockFamily,
    x: GroupElement,
    ordering: SubsetOrdering,
    monoid: Monoid,
) -> SparseAlgebraElement:
    """Linear extension of σ ↦ φ_C ∘ σ ∘ ψ_D into R[M]."""
    if len(C) != len(D):
        raise ValueError(f"|C| = {len(C)} but D has {len(D)} blocks")
    psi = psi_map(D, ordering)
    result: Dict[int, int] = {}
    for sigma, c in x.items():
        if len(sigma) != len(C):
            raise ValueError(f"permutation {sigma} is not in S_{len(C)}")
        images = assemble_images(sigma, C, psi)
        accumulate(result, [(monoid.position[images], 1)], c)
    return SparseAlgebraElement(result, str(monoid.spec))


@dataclass(frozen=True)
class LeftMonoidIndex:
    C: IndexSubset
    s: Optional[StandardTableau]

    def __str__(self) -> str:
        return f"(C={list(self.C)}, s={self.s.to_lists() if self.s else []})"


@dataclass(frozen=True)
class RightMonoidIndex:
    D: BlockFamily
    t: Optional[StandardTableau]

    def __str__(self) -> str:
        return f"(D={[list(d) for d in self.D]}, t={self.t.to_lists() if self.t else []})"


def default_ordering(r: int) -> SubsetOrdering:
    return SubsetOrdering(r)


def monoid_cell_structure(
    spec: MonoidSpec,
    ring: RingSpec,
    ordering: Optional[SubsetOrdering] = None,
    config: Optional[Config] = None,
) -> CellStructure:
    """The cell basis {H_{C,D}(m_st^λ)} of R[M], plus z when the zero map lies in M."""
    config = config or Config()
    ordering = ordering or default_ordering(spec.r)
    monoid = enumerate_monoid(spec, config)
    config.require_dimension(len(monoid))
    key = ("monoid", spec, ring, ordering)
    if key in _structures:
        return _structures[key]

    poset: List[Partition] = []
    left_index: Dict[Partition, List] = {}
    right_index: Dict[Partition, List] = {}
    labels, cell_expansion = [], []
    natural_to_cells: List[Dict[int, int]] = [dict() for _ in monoid.elements]

    if monoid.has_zero:
        poset.append(LAMBDA_ZERO)
        left_index[LAMBDA_ZERO] = [LeftMonoidIndex((), None)]
        right_index[LAMBDA_ZERO] = [RightMonoidIndex((), None)]
        zero = monoid.position[(0,) * spec.r]
        labels.append((LAMBDA_ZERO, 0, 0))
        cell_expansion.append({zero: 1})
        natural_to_cells[zero] = {0: 1}

    for i in sorted(monoid.indices - {0}):
        basis = murphy_basis(i, config)
        Cs = index_subsets(i, spec.r)
        Ds = reachable_block_families(monoid, i, ordering)
        shapes = sorted(partitions_of(i), key=Partition.sort_key)
        for lam in shapes:
            poset.append(lam)
            left_index[lam] = [LeftMonoidIndex(C, s) for C in Cs for s in standard_tableaux(lam)]
            right_index[lam] = [RightMonoidIndex(D, t) for D in Ds for t in standard_tableaux(lam)]

        tableau_position = {lam: {t: k for k, t in enumerate(standard_tableaux(lam))} for lam in shapes}
        for C_pos, C in enumerate(Cs):
            for D_pos, D in enumerate(Ds):
                psi = psi_map(D, ordering)
                natural = [monoid.position[assemble_images(sigma, C, psi)] for sigma in basis.permutations]
                block_cells = []
                for k, element in enumerate(basis.elements):
                    lam = element.shape
                    width = len(tableau_position[lam])
                    s = C_pos * width + tableau_position[lam][element.s]
                    t = D_pos * width + tableau_position[lam][element.t]
                    block_cells.append(len(labels))
                    labels.append((lam, s, t))
                    cell_expansion.append({natural[j]: c for j, c in enumerate(basis.forward[k]) if c})
                for j, row in enumerate(basis.inverse):
                    natural_to_cells[natural[j]] = {block_cells[k]: v for k, v in enumerate(row) if v}

    position = monoid.position
    elements = [alpha.images for alpha in monoid.elements]

    def product(a: int, b: int) -> Dict[int, int]:
        return {position[compose_images(elements[a], elements[b])]: 1}

    ordering_name = "default" if ordering == default_ordering(spec.r) else f"nu={ordering.nu}"
    cs = CellStructure(
        name=f"monoid:{spec.kind.value}:r={spec.r}:{ordering_name}",
        ring=ring,
        poset=poset,
        left_index=left_index,
        right_index=right_index,
        cell_labels=labels,
        cell_expansion=cell_expansion,
        natural_to_cells=natural_to_cells,
        natural_labels=elements,
        product=product,
    )
    logger.info(f"Built {cs.name}: {cs.dimension} basis elements over {len(poset)} layers")
    _structures[key] = cs
    return cs


def rho_map(D: BlockFamily, C: IndexSubset, ordering: SubsetOrdering) -> Tuple[int, ...]:
    """ρ = ψ_D ∘ φ_C as an image tuple over 1..i (0 where undefined)."""
    psi = psi_map(D, ordering)
    return tuple(psi[c - 1] for c in C)


def is_bijection(rho: Tuple[int, ...]) -> bool:
    return sorted(rho) == list(range(1, len(rho) + 1))


def h_product_rule(
    C_left: IndexSubset,
    D: BlockFamily,
    x: GroupElement,
    C: IndexSubset,
    D_right: BlockFamily,
    y: GroupElement,
    ordering: SubsetOrdering,
    monoid: Monoid,
) -> Optional[SparseAlgebraElement]:
    """Predicted H_{C',D}(x)·H_{C,D'}(y): H_{C',D'}(xρy) when ρ = ψ_D∘φ_C is bijective, else None."""
    rho = rho_map(D, C, ordering)
    if not is_bijection(rho):
        return None
    middle = group_multiply(group_multiply(x, {rho: 1}), y)
    return h_cd(C_left, D_right, middle, ordering, monoid)


def monoid_bracket_via_symmetric(
    lam: Partition,
    left: LeftMonoidIndex,
    right: RightMonoidIndex,
    ordering: SubsetOrdering,
    config: Optional[Config] = None,
) -> int:
    """⟨C_{(D,t)}, _{(C,s)}C⟩ computed inside Z[S_i].

    Zero unless ρ = ψ_D∘φ_C is a bijection; otherwise the coefficient of m_st
    in m_st·ρ·m_st taken modulo the Murphy layers above λ.
    """
    if lam.is_empty:
        return 1
    rho = rho_map(right.D, left.C, ordering)
    if not is_bijection(rho):
        return 0
    basis = murphy_basis(lam.index, config)
    k = basis.position(lam, left.s, right.t)
    m_st = basis.elements[k].as_dict()
    coords = basis.coordinates(group_multiply(group_multiply(m_st, {rho: 1}), m_st))
    stray = [
        j for j, c in coords.items()
        if j != k and basis.elements[j].shape == lam and c
    ]
    if stray:
        raise ValueError(f"m_st·ρ·m_st at {lam} is not a multiple of m_st")
    return coords.get(k, 0)


def index_filtration_check(cs: CellStructure, i: int) -> bool:
    """The span of maps of index ≤ i equals the span of cell layers of index ≤ i."""
    low_natural = {j for j, images in enumerate(cs.natural_labels) if index_of_images(images) <= i}
    low_cells = {k for k, label in enumerate(cs.cell_labels) if label[0].index <= i}
    if len(low_natural) != len(low_cells):
        return False
    natural_ok = all(set(cs.natural_to_cells[j]) <= low_cells for j in low_natural)
    cells_ok = all(set(cs.cell_expansion[k]) <= low_natural for k in low_cells)
    return natural_ok and cells_ok


def radical_equivalence_check(
    spec: MonoidSpec,
    field: RingSpec,
    lam: Partition,
    engine: Optional[CellEngine] = None,
    ordering: Optional[SubsetOrdering] = None,
    config: Optional[Config] = None,
) -> Dict[str, bool]:
    """Compare vanishing of the bracket at λ in R[M] with vanishing in field[S_i]."""
    field.require_field()
    if lam.is_empty:
        raise ValueError("the radical comparison needs λ of positive index")
    engine = engine or CellEngine()
    monoid_cs = monoid_cell_structure(spec, RingSpec.integers(), ordering, config)
    if lam not in monoid_cs.poset:
        raise ValueError(f"{lam} is not a layer of {spec}")
    symmetric_cs = symmetric_cell_structure(lam.index, RingSpec.integers(), config)
    monoid_zero = all(field.is_zero(v) for row in engine.gram_matrix(lam, monoid_cs) for v in row)
    symmetric_zero = all(field.is_zero(v) for row in engine.gram_matrix(lam, symmetric_cs) for v in row)
    return {
        "monoid_zero": monoid_zero,
        "symmetric_zero": symmetric_zero,
        "equivalent": monoid_zero == symmetric_zero,
    }
