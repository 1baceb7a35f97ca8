"""Partial transformations of {0,1,..,r} fixing 0, and the monoids T_r, ℜ_r, PT_r.

A map is stored as its image tuple over 1..r, with 0 marking an undefined
point. C-sets are sorted tuples, block families are tuples of sorted tuples
kept in the order of a SubsetOrdering.
"""

import itertools
import logging
from dataclasses import dataclass, field
from functools import cache
from typing import Iterable, Optional

from cellschur.config import Config
from cellschur.core.combinatorics import Composition, Permutation
from cellschur.core.enums import MonoidKind

logger = logging.getLogger(__name__)

IndexSubset = tuple[int, ...]
Block = tuple[int, ...]
BlockFamily = tuple[Block, ...]
Images = tuple[int, ...]


@dataclass(frozen=True)
class PartialMap:
    images: Images

    def __post_init__(self):
        images = tuple(self.images)
        object.__setattr__(self, "images", images)
        r = len(images)
        if any(value < 0 or value > r for value in images):
            raise ValueError(f"images {images} leave 0..{r}")

    @property
    def r(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x - 1] if x else 0

    @classmethod
    def identity(cls, r: int) -> "PartialMap":
        return cls(tuple(range(1, r + 1)))

    @classmethod
    def zero(cls, r: int) -> "PartialMap":
        return cls((0,) * r)


def compose_images(a: Images, b: Images) -> Images:
    """(a ∘ b)(x) = a(b(x)); 0 is absorbing."""
    return tuple(a[y - 1] if y else 0 for y in b)


def compose(alpha: PartialMap, beta: PartialMap) -> PartialMap:
    if alpha.r != beta.r:
        raise ValueError(f"cannot compose maps of rank {alpha.r} and {beta.r}")
    return PartialMap(compose_images(alpha.images, beta.images))


def index_of_images(images: Images) -> int:
    return len({value for value in images if value})


def index_of(alpha: PartialMap) -> int:
    return index_of_images(alpha.images)


@dataclass(frozen=True)
class MonoidSpec:
    kind: MonoidKind
    r: int

    def contains(self, images: Images) -> bool:
        if self.kind is MonoidKind.FULL:
            return all(images)
        if self.kind is MonoidKind.ROOK:
            defined = [value for value in images if value]
            return len(defined) == len(set(defined))
        return True

    def __str__(self) -> str:
        return f"{self.kind.value}(r={self.r})"


@dataclass(frozen=True)
class Monoid:
    spec: MonoidSpec
    elements: tuple[PartialMap, ...]
    indices: frozenset[int]
    position: dict[Images, int] = field(compare=False, hash=False, repr=False)

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def has_zero(self) -> bool:
        return 0 in self.indices


@cache
def _enumerate(spec: MonoidSpec) -> Monoid:
    elements = tuple(
        PartialMap(images)
        for images in itertools.product(range(spec.r + 1), repeat=spec.r)
        if spec.contains(images)
    )
    indices = frozenset(index_of(alpha) for alpha in elements)
    position = {alpha.images: k for k, alpha in enumerate(elements)}
    logger.debug(f"Enumerated {spec}: {len(elements)} maps, indices {sorted(indices)}")
    return Monoid(spec, elements, indices, position)


def enumerate_monoid(spec: MonoidSpec, config: Optional[Config] = None) -> Monoid:
    """All members of M in image-tuple order, together with I(M)."""
    (config or Config()).require_rank(spec.r)
    return _enumerate(spec)


class SubsetOrdering:
    """Total order on subsets of {1..r} compatible with the S_ν-orbits.

    The key of d is (s̄(ν,d), s(d)): the block numbers of the sorted elements
    of d padded with zeros to length r, then the elements themselves.
    """

    def __init__(self, r: int, nu: Optional[Composition] = None):
        if nu is None:
            nu = Composition((1,) * r)
        if nu.total != r:
            raise ValueError(f"ordering composition {nu} is not a composition of {r}")
        self.r = r
        self.nu = nu
        self._block = {x: nu.block_of(x) for x in range(1, r + 1)}
        labels = sorted({self.orbit_label(d) for d in all_subsets(r)})
        self._slot = {label: j for j, label in enumerate(labels, start=1)}

    def __repr__(self) -> str:
        return f"SubsetOrdering(r={self.r}, nu={self.nu})"

    def __eq__(self, other) -> bool:
        return isinstance(other, SubsetOrdering) and (self.r, self.nu) == (other.r, other.nu)

    def __hash__(self) -> int:
        return hash((self.r, self.nu))

    def orbit_label(self, d: Iterable[int]) -> tuple[int, ...]:
        labels = [self._block[x] for x in sorted(d)]
        return tuple(labels) + (0,) * (self.r - len(labels))

    def key(self, d: Iterable[int]) -> tuple:
        elements = tuple(sorted(d))
        return (self.orbit_label(elements), elements)

    @property
    def orbit_count(self) -> int:
        """N_ν."""
        return len(self._slot)

    def orbit_slot(self, d: Iterable[int]) -> int:
        """1-based position of the S_ν-orbit of d among O_1 < .. < O_N."""
        return self._slot[self.orbit_label(d)]

    def sort_family(self, blocks: Iterable[Iterable[int]]) -> BlockFamily:
        return tuple(sorted((tuple(sorted(block)) for block in blocks), key=self.key))

    def is_sorted(self, family: BlockFamily) -> bool:
        keys = [self.key(block) for block in family]
        return all(keys[j] < keys[j + 1] for j in range(len(keys) - 1))


def subset_key(d: Iterable[int], ordering: SubsetOrdering) -> tuple:
    return ordering.key(d)


@cache
def all_subsets(r: int) -> tuple[tuple[int, ...], ...]:
    return tuple(
        subset
        for size in range(r + 1)
        for subset in itertools.combinations(range(1, r + 1), size)
    )


def index_subsets(i: int, r: int) -> tuple[IndexSubset, ...]:
    """C(i, r)."""
    return tuple(itertools.combinations(range(1, r + 1), i))


def phi_map(C: IndexSubset) -> tuple[int, ...]:
    """φ_C as an image tuple over 1..i: j ↦ c_j."""
    return tuple(C)


def psi_map(D: BlockFamily, ordering: SubsetOrdering) -> tuple[int, ...]:
    """ψ_D as an image tuple over 1..r: x ↦ position of its block, 0 outside D."""
    if not ordering.is_sorted(D):
        raise ValueError(f"block family {D} is not sorted under {ordering}")
    images = [0] * ordering.r
    for j, block in enumerate(D, start=1):
        for x in block:
            images[x - 1] = j
    return tuple(images)


@dataclass(frozen=True)
class Factorization:
    sigma: Permutation
    C: IndexSubset
    D: BlockFamily

    @property
    def index(self) -> int:
        return len(self.C)


def factorize(alpha: PartialMap, ordering: SubsetOrdering) -> Factorization:
    """The unique (σ, C, D) with α = φ_C ∘ σ ∘ ψ_D."""
    C = tuple(sorted({value for value in alpha.images if value}))
    fibers = {c: [] for c in C}
    for x, value in enumerate(alpha.images, start=1):
        if value:
            fibers[value].append(x)
    D = ordering.sort_family(fibers.values())
    position = {c: j for j, c in enumerate(C, start=1)}
    sigma = tuple(position[alpha(block[0])] for block in D)
    return Factorization(sigma, C, D)


def assemble_images(sigma: Permutation, C: IndexSubset, psi: tuple[int, ...]) -> Images:
    """φ_C ∘ σ ∘ ψ as an image tuple over 1..r."""
    return compose_images(phi_map(C), compose_images(sigma, psi))


def assemble(factorization: Factorization, ordering: SubsetOrdering) -> PartialMap:
    psi = psi_map(factorization.D, ordering)
    return PartialMap(assemble_images(factorization.sigma, factorization.C, psi))


def reachable_block_families(monoid: Monoid, i: int, ordering: SubsetOrdering) -> tuple[BlockFamily, ...]:
    """D(M, i, r): every D_α over α ∈ M of index i."""
    if i not in monoid.indices:
        raise ValueError(f"index {i} is not realized in {monoid.spec}")
    families = {
        factorize(alpha, ordering).D
        for alpha in monoid.elements
        if index_of(alpha) == i
    }
    return tuple(sorted(families, key=lambda D: [subset_key(block, ordering) for block in D]))


def act_on_subset(rho: Permutation, C: Iterable[int]) -> IndexSubset:
    """ρC."""
    return tuple(sorted(rho[c - 1] for c in C))


def act_on_family(D: BlockFamily, pi: Permutation, ordering: SubsetOrdering) -> BlockFamily:
    """Dπ = {π⁻¹[d] : d ∈ D}, re-sorted."""
    return ordering.sort_family(
        [x for x in range(1, len(pi) + 1) if pi[x - 1] in block] for block in D
    )
