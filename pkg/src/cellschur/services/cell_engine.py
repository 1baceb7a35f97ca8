"""Generic cell algebra machinery.

A CellStructure is a finite free algebra given by a natural basis and a
product oracle on it, together with a cell datum: a poset of partitions,
index lists L(λ) and R(λ), and an exact integer change of basis between
the natural basis and the cell basis. Everything else in this module
(layer reduction, axiom verification, brackets, Gram matrices, Λ₀) only
talks to that interface.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from cellschur.config import Config
from cellschur.core.algebra import RingSpec, Scalar, SparseAlgebraElement, accumulate, matrix_rank
from cellschur.core.combinatorics import Partition, lambda_geq
from cellschur.core.enums import Side, Verdict
from cellschur.core.errors import CellStructureError
from cellschur.services.gram_store import GramStore

logger = logging.getLogger(__name__)

ProductOracle = Callable[[int, int], Dict[int, Scalar]]
CellLabel = Tuple[Partition, int, int]


class CellStructure:
    """Cell datum on a free algebra with an integer natural basis.

    ``cell_labels[k]`` is (λ, s, t) with s and t positions in ``left_index[λ]``
    and ``right_index[λ]``; ``cell_expansion[k]`` writes cell element k in the
    natural basis and ``natural_to_cells[j]`` writes natural element j in the
    cell basis.
    """

    def __init__(
        self,
        name: str,
        ring: RingSpec,
        poset: Sequence[Partition],
        left_index: Dict[Partition, Sequence[Any]],
        right_index: Dict[Partition, Sequence[Any]],
        cell_labels: Sequence[CellLabel],
        cell_expansion: Sequence[Dict[int, int]],
        natural_to_cells: Sequence[Dict[int, int]],
        natural_labels: Sequence[Any],
        product: ProductOracle,
    ):
        self.name = name
        self.ring = ring
        self.poset = tuple(poset)
        self.left_index = {lam: tuple(left_index[lam]) for lam in self.poset}
        self.right_index = {lam: tuple(right_index[lam]) for lam in self.poset}
        self.cell_labels = tuple(cell_labels)
        self.cell_expansion = tuple(cell_expansion)
        self.natural_to_cells = tuple(natural_to_cells)
        self.natural_labels = tuple(natural_labels)
        self._product = product
        self._products: Dict[Tuple[int, int], Dict[int, Scalar]] = {}

        self._cell_id = {label: k for k, label in enumerate(self.cell_labels)}
        if len(self._cell_id) != len(self.cell_labels):
            raise CellStructureError(f"{name}: cell labels are not distinct")
        if len(self.cell_labels) != len(self.natural_labels):
            raise CellStructureError(
                f"{name}: {len(self.cell_labels)} cell elements for a natural basis of {len(self.natural_labels)}"
            )
        expected = sum(len(self.left_index[lam]) * len(self.right_index[lam]) for lam in self.poset)
        if expected != len(self.cell_labels):
            raise CellStructureError(f"{name}: index sets give {expected} cells, found {len(self.cell_labels)}")

    def __repr__(self) -> str:
        return f"CellStructure({self.name!r}, dimension={self.dimension})"

    @property
    def dimension(self) -> int:
        return len(self.natural_labels)

    def embed(self, lam: Partition, s: int, t: int) -> int:
        return self._cell_id[(lam, s, t)]

    def layer_of(self, cell_id: int) -> Partition:
        return self.cell_labels[cell_id][0]

    def cell_element(self, cell_id: int) -> SparseAlgebraElement:
        return SparseAlgebraElement(dict(self.cell_expansion[cell_id]), self.name)

    def natural_element(self, natural_id: int) -> SparseAlgebraElement:
        return SparseAlgebraElement.basis_element(natural_id, self.name)

    def product(self, a: int, b: int) -> Dict[int, Scalar]:
        """Memoized structure constants of natural basis elements a·b."""
        key = (a, b)
        cached = self._products.get(key)
        if cached is None:
            cached = self._product(a, b)
            self._products[key] = cached
        return cached

    def multiply(self, x: SparseAlgebraElement, y: SparseAlgebraElement) -> SparseAlgebraElement:
        result: Dict[int, Scalar] = {}
        for a, ca in x.coeffs.items():
            for b, cb in y.coeffs.items():
                accumulate(result, self.product(a, b).items(), ca * cb)
        return SparseAlgebraElement(result, self.name)

    def relabeled(self, name: str, cell_labels: Sequence[CellLabel]) -> "CellStructure":
        """The same algebra and cell elements with new (λ, s, t) labels."""
        return CellStructure(
            name,
            self.ring,
            self.poset,
            self.left_index,
            self.right_index,
            cell_labels,
            self.cell_expansion,
            self.natural_to_cells,
            self.natural_labels,
            self._product,
        )


def to_cell_coords(x: SparseAlgebraElement, cs: CellStructure) -> Dict[int, Scalar]:
    result: Dict[int, Scalar] = {}
    for j, c in x.coeffs.items():
        accumulate(result, cs.natural_to_cells[j].items(), c)
    return result


def from_cell_coords(coords: Dict[int, Scalar], cs: CellStructure) -> SparseAlgebraElement:
    result: Dict[int, Scalar] = {}
    for k, c in coords.items():
        accumulate(result, cs.cell_expansion[k].items(), c)
    return SparseAlgebraElement(result, cs.name)


def layer_coefficients(x: SparseAlgebraElement, lam: Partition, cs: CellStructure) -> Dict[Tuple[int, int], Scalar]:
    """Cell coordinates of x at layer λ, i.e. x modulo Â^λ restricted to λ."""
    return _layer(to_cell_coords(x, cs), lam, cs)


def _layer(coords: Dict[int, Scalar], lam: Partition, cs: CellStructure) -> Dict[Tuple[int, int], Scalar]:
    layer = {}
    for k, c in coords.items():
        label = cs.cell_labels[k]
        if label[0] == lam:
            layer[(label[1], label[2])] = c
    return layer


def _escaping_layers(coords: Dict[int, Scalar], lam: Partition, cs: CellStructure) -> List[Partition]:
    """Layers κ in the support with κ ≱ λ, i.e. the product left A^λ."""
    return sorted(
        {cs.layer_of(k) for k in coords if not lambda_geq(cs.layer_of(k), lam)},
        key=Partition.sort_key,
    )


def _left_times_cell(cs: CellStructure, a: int, cell_id: int) -> Dict[int, Scalar]:
    result: Dict[int, Scalar] = {}
    for b, cb in cs.cell_expansion[cell_id].items():
        accumulate(result, cs.product(a, b).items(), cb)
    return result


def _cell_times_right(cs: CellStructure, cell_id: int, a: int) -> Dict[int, Scalar]:
    result: Dict[int, Scalar] = {}
    for b, cb in cs.cell_expansion[cell_id].items():
        accumulate(result, cs.product(b, a).items(), cb)
    return result


def _natural_to_coords(cs: CellStructure, natural: Dict[int, Scalar]) -> Dict[int, Scalar]:
    result: Dict[int, Scalar] = {}
    for j, c in natural.items():
        accumulate(result, cs.natural_to_cells[j].items(), c)
    return result


@dataclass
class AxiomReport:
    passed: bool
    products_checked: int
    counterexample: Optional[Dict[str, Any]] = None

    @property
    def verdict(self) -> Verdict:
        return Verdict.PASS if self.passed else Verdict.FAIL


def _counterexample(cs, side, a, lam, s, t, reason, detail) -> Dict[str, Any]:
    return {
        "side": side.value,
        "natural": str(cs.natural_labels[a]),
        "lambda": list(lam.parts),
        "s": str(cs.left_index[lam][s]),
        "t": str(cs.right_index[lam][t]),
        "reason": reason,
        "detail": {str(k): str(v) for k, v in detail.items()},
    }


def verify_cell_axioms(cs: CellStructure, config: Optional[Config] = None) -> AxiomReport:
    """Exhaustive check of the cell algebra axioms.

    For every natural basis element a and cell element C_st^λ, a·C_st^λ must
    lie in A^λ and reduce modulo Â^λ to Σ_s' r_L(a,s',s) C_s't^λ with the
    coefficients independent of t; dually for C_st^λ·a.
    """
    (config or Config()).require_dimension(cs.dimension)
    checked = 0
    for side in (Side.LEFT, Side.RIGHT):
        for a in range(cs.dimension):
            for lam in cs.poset:
                outer = cs.left_index[lam] if side is Side.LEFT else cs.right_index[lam]
                inner = cs.right_index[lam] if side is Side.LEFT else cs.left_index[lam]
                for fixed in range(len(outer)):
                    reference = None
                    for moving in range(len(inner)):
                        s, t = (fixed, moving) if side is Side.LEFT else (moving, fixed)
                        cell_id = cs.embed(lam, s, t)
                        if side is Side.LEFT:
                            natural = _left_times_cell(cs, a, cell_id)
                        else:
                            natural = _cell_times_right(cs, cell_id, a)
                        coords = _natural_to_coords(cs, natural)
                        checked += 1

                        escaped = _escaping_layers(coords, lam, cs)
                        if escaped:
                            return AxiomReport(False, checked, _counterexample(
                                cs, side, a, lam, s, t, "product leaves A^lambda",
                                {"layers": [list(k.parts) for k in escaped]},
                            ))

                        layer = _layer(coords, lam, cs)
                        if side is Side.LEFT:
                            stray = {key: c for key, c in layer.items() if key[1] != t}
                            vector = {key[0]: c for key, c in layer.items()}
                        else:
                            stray = {key: c for key, c in layer.items() if key[0] != s}
                            vector = {key[1]: c for key, c in layer.items()}
                        if stray:
                            return AxiomReport(False, checked, _counterexample(
                                cs, side, a, lam, s, t, "reduction not supported on the fixed index", stray,
                            ))
                        if reference is None:
                            reference = vector
                        elif vector != reference:
                            return AxiomReport(False, checked, _counterexample(
                                cs, side, a, lam, s, t, "coefficients depend on the other index",
                                {"expected": reference, "found": vector},
                            ))
    logger.info(f"Cell axioms hold for {cs.name}: {checked} products checked")
    return AxiomReport(True, checked)


def ideal_closure_check(cs: CellStructure) -> AxiomReport:
    """A^μ is a two-sided ideal: every product with a cell element at μ stays in A^μ."""
    checked = 0
    for a in range(cs.dimension):
        for cell_id, (mu, s, t) in enumerate(cs.cell_labels):
            for side, natural in (
                (Side.LEFT, _left_times_cell(cs, a, cell_id)),
                (Side.RIGHT, _cell_times_right(cs, cell_id, a)),
            ):
                checked += 1
                escaped = _escaping_layers(_natural_to_coords(cs, natural), mu, cs)
                if escaped:
                    return AxiomReport(False, checked, _counterexample(
                        cs, side, a, mu, s, t, "product leaves A^mu",
                        {"layers": [list(k.parts) for k in escaped]},
                    ))
    return AxiomReport(True, checked)


def r_st(
    lam: Partition,
    s: int,
    t: int,
    cs: CellStructure,
    aux_s: Optional[int] = None,
    aux_t: Optional[int] = None,
) -> Scalar:
    """The scalar with C_{s't}^λ · C_{st'}^λ ≡ r_st C_{s't'}^λ modulo Â^λ."""
    s_prime = s if aux_s is None else aux_s
    t_prime = t if aux_t is None else aux_t
    left = cs.cell_element(cs.embed(lam, s_prime, t))
    right = cs.cell_element(cs.embed(lam, s, t_prime))
    layer = layer_coefficients(cs.multiply(left, right), lam, cs)
    stray = {key: c for key, c in layer.items() if key != (s_prime, t_prime)}
    if stray:
        raise CellStructureError(
            f"{cs.name}: product at {lam} for s={s}, t={t} reduces to {layer}, "
            f"not a multiple of the cell element ({s_prime}, {t_prime})"
        )
    return layer.get((s_prime, t_prime), 0)


def r_st_independence_check(cs: CellStructure, lam: Partition, exhaustive: Optional[bool] = None) -> bool:
    """r_st agrees for every admissible choice of auxiliary indices."""
    if exhaustive is None:
        exhaustive = cs.dimension <= 64
    lefts = range(len(cs.left_index[lam]))
    rights = range(len(cs.right_index[lam]))
    for s in lefts:
        for t in rights:
            if exhaustive:
                choices = [(sp, tp) for sp in lefts for tp in rights]
            else:
                choices = [(lefts[0], rights[0]), (lefts[-1], rights[-1])]
            values = {r_st(lam, s, t, cs, sp, tp) for sp, tp in choices}
            if len(values) > 1:
                logger.warning(f"{cs.name}: r_st at {lam}, s={s}, t={t} takes values {sorted(values)}")
                return False
    return True


def gram_matrix(lam: Partition, cs: CellStructure) -> List[List[int]]:
    """G^λ over Z with rows R(λ) and columns L(λ): G[t][s] = r_st."""
    rows = []
    for t in range(len(cs.right_index[lam])):
        rows.append([int(r_st(lam, s, t, cs)) for s in range(len(cs.left_index[lam]))])
    return rows


def action_matrix(a: SparseAlgebraElement, lam: Partition, side: Side, cs: CellStructure) -> List[List[int]]:
    """Matrix of a on the left (columns indexed by L(λ)) or right (rows indexed by R(λ)) cell module."""
    size = len(cs.left_index[lam]) if side is Side.LEFT else len(cs.right_index[lam])
    matrix = [[0] * size for _ in range(size)]
    for k in range(size):
        if side is Side.LEFT:
            product = cs.multiply(a, cs.cell_element(cs.embed(lam, k, 0)))
        else:
            product = cs.multiply(cs.cell_element(cs.embed(lam, 0, k)), a)
        for (s, t), c in layer_coefficients(product, lam, cs).items():
            if side is Side.LEFT:
                matrix[s][k] = cs.ring.reduce(int(c))
            else:
                matrix[k][t] = cs.ring.reduce(int(c))
    return matrix


@dataclass
class GramReport:
    lam: Partition
    matrix: List[List[int]]
    rank_by_field: Dict[str, int] = field(default_factory=dict)

    @property
    def rows(self) -> int:
        return len(self.matrix)

    @property
    def cols(self) -> int:
        return len(self.matrix[0]) if self.matrix else 0

    def member_of_lambda0(self, ring: RingSpec) -> bool:
        return self.rank_by_field[ring.label] > 0

    def to_json(self) -> Dict[str, Any]:
        return {
            "lambda": [str(p) for p in self.lam.parts],
            "rows": str(self.rows),
            "cols": str(self.cols),
            "entries": [[str(v) for v in row] for row in self.matrix],
            "rank_by_field": {label: str(rank) for label, rank in self.rank_by_field.items()},
        }


class CellEngine:
    """Gram matrices and everything derived from them.

    Integer Gram matrices are computed once per (structure, λ) and kept in a
    GramStore; every field query reduces the stored integer matrix.
    """

    def __init__(self, store: Optional[GramStore] = None, workers: int = 1):
        self.store = store if store is not None else GramStore()
        self.workers = max(1, workers)

    def gram_matrix(self, lam: Partition, cs: CellStructure) -> List[List[int]]:
        matrix = self.store.get(cs.name, lam)
        if matrix is None:
            matrix = gram_matrix(lam, cs)
            self.store.put(cs.name, lam, matrix)
            logger.debug(f"{cs.name}: Gram at {lam} is {len(matrix)}x{len(matrix[0]) if matrix else 0}")
        return matrix

    def gram_matrix_mod(self, lam: Partition, cs: CellStructure, ring: RingSpec) -> List[List[int]]:
        return [[ring.reduce(v) for v in row] for row in self.gram_matrix(lam, cs)]

    def _map_layers(self, fn, layers):
        if self.workers == 1:
            return [fn(lam) for lam in layers]
        with ThreadPoolExecutor(max_workers=self.workers) as executor:
            return list(executor.map(fn, layers))

    def gram_reports(self, cs: CellStructure, rings: Sequence[RingSpec]) -> List[GramReport]:
        for ring in rings:
            ring.require_field()

        def report(lam: Partition) -> GramReport:
            matrix = self.gram_matrix(lam, cs)
            ranks = {ring.label: matrix_rank(matrix, ring) for ring in rings}
            return GramReport(lam, matrix, ranks)

        return self._map_layers(report, cs.poset)

    def ranks(self, cs: CellStructure, ring: RingSpec) -> Dict[Partition, int]:
        reports = self.gram_reports(cs, [ring])
        return {report.lam: report.rank_by_field[ring.label] for report in reports}

    def lambda_zero(self, cs: CellStructure, ring: RingSpec) -> List[Partition]:
        """Λ₀: the layers whose bracket does not vanish over the field."""
        ranks = self.ranks(cs, ring)
        members = [lam for lam in cs.poset if ranks[lam] > 0]
        logger.info(f"{cs.name} over {ring.label}: Λ₀ has {len(members)} of {len(cs.poset)} layers")
        return members

    def irreducible_dims(self, cs: CellStructure, ring: RingSpec) -> Dict[Partition, int]:
        return {lam: rank for lam, rank in self.ranks(cs, ring).items() if rank > 0}

    def quasi_hereditary_sufficient(self, cs: CellStructure, ring: RingSpec) -> bool:
        return len(self.lambda_zero(cs, ring)) == len(cs.poset)

    def cell_module_dimensions(self, cs: CellStructure, ring: RingSpec) -> Dict[Partition, Dict[str, int]]:
        """Dimensions of C(λ), its radical and D^λ = C(λ)/rad."""
        ranks = self.ranks(cs, ring)
        return {
            lam: {
                "cell": len(cs.left_index[lam]),
                "radical": len(cs.left_index[lam]) - ranks[lam],
                "simple": ranks[lam],
            }
            for lam in cs.poset
        }
