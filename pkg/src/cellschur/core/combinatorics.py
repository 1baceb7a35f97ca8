"""Partitions, compositions, tableaux, permutations and Young subgroups.

Everything here is an immutable value or a pure function. Canonical orders:
partitions are listed reverse-lexicographically, tableaux by their row reading
word, so basis indices are identical across runs.
"""

import itertools
from dataclasses import dataclass
from functools import cache
from math import factorial, prod
from typing import Iterator

# Permutations of {1..i} are image tuples: perm[k - 1] is the image of k.
Permutation = tuple[int, ...]


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(self.parts)
        object.__setattr__(self, "parts", parts)
        if any(p <= 0 for p in parts):
            raise ValueError(f"partition parts must be positive: {parts}")
        if any(parts[j] < parts[j + 1] for j in range(len(parts) - 1)):
            raise ValueError(f"partition parts must be weakly decreasing: {parts}")

    @property
    def index(self) -> int:
        return sum(self.parts)

    @property
    def is_empty(self) -> bool:
        return not self.parts

    def __len__(self) -> int:
        return len(self.parts)

    def __getitem__(self, j: int) -> int:
        return self.parts[j]

    def __str__(self) -> str:
        if not self.parts:
            return "()"
        return "(" + ",".join(str(p) for p in self.parts) + ")"

    def sort_key(self) -> tuple:
        """Index first, then reverse-lexicographic within an index."""
        return (self.index, tuple(-p for p in self.parts))


LAMBDA_ZERO = Partition(())


@dataclass(frozen=True)
class Composition:
    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(self.parts)
        object.__setattr__(self, "parts", parts)
        if any(p < 0 for p in parts):
            raise ValueError(f"composition parts must be non-negative: {parts}")

    @property
    def total(self) -> int:
        return sum(self.parts)

    @property
    def n(self) -> int:
        return len(self.parts)

    def __str__(self) -> str:
        return "(" + ",".join(str(p) for p in self.parts) + ")"

    def blocks(self) -> tuple[tuple[int, ...], ...]:
        """The consecutive blocks b_1, .., b_n of {1..total}; empty for zero parts."""
        result = []
        start = 1
        for part in self.parts:
            result.append(tuple(range(start, start + part)))
            start += part
        return tuple(result)

    def block_of(self, x: int) -> int:
        """1-based number of the block containing x."""
        if x < 1:
            raise ValueError(f"{x} lies outside 1..{self.total}")
        upper = 0
        for j, part in enumerate(self.parts, start=1):
            upper += part
            if x <= upper and part > 0:
                return j
        raise ValueError(f"{x} lies outside 1..{self.total}")

    def order(self) -> int:
        """|S_μ|."""
        return prod(factorial(p) for p in self.parts)

    def without_zeros(self) -> "Composition":
        return Composition(tuple(p for p in self.parts if p))


@dataclass(frozen=True)
class StandardTableau:
    shape: Partition
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(tuple(row) for row in self.rows))
        if tuple(len(row) for row in self.rows) != self.shape.parts:
            raise ValueError(f"rows {self.rows} do not have shape {self.shape}")
        if sorted(self.reading_word()) != list(range(1, self.shape.index + 1)):
            raise ValueError(f"tableau {self.rows} is not filled with 1..{self.shape.index}")
        if not _strict_rows(self.rows) or not _strict_columns(self.rows):
            raise ValueError(f"tableau {self.rows} is not standard")

    def reading_word(self) -> tuple[int, ...]:
        return tuple(entry for row in self.rows for entry in row)

    def to_lists(self) -> list[list[int]]:
        return [list(row) for row in self.rows]


@dataclass(frozen=True)
class SemistandardTableau:
    shape: Partition
    content: Composition
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(tuple(row) for row in self.rows))
        if tuple(len(row) for row in self.rows) != self.shape.parts:
            raise ValueError(f"rows {self.rows} do not have shape {self.shape}")
        word = self.reading_word()
        counts = tuple(word.count(j) for j in range(1, self.content.n + 1))
        if counts != self.content.parts or len(word) != self.content.total:
            raise ValueError(f"tableau {self.rows} does not have content {self.content}")
        if not _weak_rows(self.rows) or not _strict_columns(self.rows):
            raise ValueError(f"tableau {self.rows} is not semistandard")

    def reading_word(self) -> tuple[int, ...]:
        return tuple(entry for row in self.rows for entry in row)

    def to_lists(self) -> list[list[int]]:
        return [list(row) for row in self.rows]


def _strict_rows(rows) -> bool:
    return all(row[c] < row[c + 1] for row in rows for c in range(len(row) - 1))


def _weak_rows(rows) -> bool:
    return all(row[c] <= row[c + 1] for row in rows for c in range(len(row) - 1))


def _strict_columns(rows) -> bool:
    return all(
        rows[j][c] < rows[j + 1][c]
        for j in range(len(rows) - 1)
        for c in range(len(rows[j + 1]))
    )


def _partitions_bounded(i: int, largest: int) -> Iterator[tuple[int, ...]]:
    if i == 0:
        yield ()
        return
    for first in range(min(i, largest), 0, -1):
        for rest in _partitions_bounded(i - first, first):
            yield (first,) + rest


@cache
def partitions_of(i: int) -> tuple[Partition, ...]:
    """Λ(i) in reverse-lexicographic order; Λ(0) = [λ₀]."""
    if i < 0:
        raise ValueError(f"cannot partition a negative integer: {i}")
    return tuple(Partition(parts) for parts in _partitions_bounded(i, i))


@cache
def compositions(total: int, n: int) -> tuple[Composition, ...]:
    """Λ(total, n): compositions with exactly n non-negative parts, reverse-lexicographic."""
    if n == 0:
        return (Composition(()),) if total == 0 else ()

    def build(remaining: int, slots: int) -> Iterator[tuple[int, ...]]:
        if slots == 1:
            yield (remaining,)
            return
        for first in range(remaining, -1, -1):
            for rest in build(remaining - first, slots - 1):
                yield (first,) + rest

    return tuple(Composition(parts) for parts in build(total, n))


def dominance_geq(lam: Partition, mu: Partition) -> bool:
    """λ ⊵ μ for partitions of the same integer."""
    if lam.index != mu.index:
        raise ValueError(f"dominance compares partitions of one integer, got {lam} and {mu}")
    left = right = 0
    for j in range(max(len(lam), len(mu))):
        left += lam.parts[j] if j < len(lam) else 0
        right += mu.parts[j] if j < len(mu) else 0
        if left < right:
            return False
    return True


def lambda_geq(lam: Partition, mu: Partition) -> bool:
    """The poset order on ∪Λ(i): smaller index is higher, dominance breaks ties."""
    if lam.index != mu.index:
        return lam.index < mu.index
    return dominance_geq(lam, mu)


def lambda_gt(lam: Partition, mu: Partition) -> bool:
    return lam != mu and lambda_geq(lam, mu)


def canonical_tableau(lam: Partition) -> StandardTableau:
    """Rows filled left to right with 1..i, top row first."""
    rows = []
    start = 1
    for part in lam.parts:
        rows.append(tuple(range(start, start + part)))
        start += part
    return StandardTableau(lam, tuple(rows))


@cache
def standard_tableaux(lam: Partition) -> tuple[StandardTableau, ...]:
    """All standard tableaux of shape λ ordered by reading word."""
    fillings: list[tuple[tuple[int, ...], ...]] = []

    def grow(rows: list[list[int]], next_entry: int):
        if next_entry > lam.index:
            fillings.append(tuple(tuple(row) for row in rows))
            return
        for j, part in enumerate(lam.parts):
            if len(rows[j]) == part:
                continue
            if j > 0 and len(rows[j - 1]) <= len(rows[j]):
                continue
            rows[j].append(next_entry)
            grow(rows, next_entry + 1)
            rows[j].pop()

    grow([[] for _ in lam.parts], 1)
    tableaux = [StandardTableau(lam, rows) for rows in fillings]
    return tuple(sorted(tableaux, key=lambda t: t.reading_word()))


@cache
def semistandard_tableaux(lam: Partition, content: Composition) -> tuple[SemistandardTableau, ...]:
    """All semistandard tableaux of shape λ and the given content.

    Value j is added as a horizontal strip of content_j boxes, so rows stay
    weakly increasing and columns strictly increasing.
    """
    if content.total != lam.index:
        raise ValueError(f"content {content} has weight {content.total}, shape {lam} has {lam.index}")
    target = lam.parts
    fillings: list[tuple[tuple[int, ...], ...]] = []

    def strips(shape: tuple[int, ...], boxes: int, row: int) -> Iterator[tuple[int, ...]]:
        if row == len(shape):
            if boxes == 0:
                yield ()
            return
        ceiling = target[row] if row == 0 else min(target[row], shape[row - 1])
        for added in range(min(boxes, ceiling - shape[row]), -1, -1):
            for rest in strips(shape, boxes - added, row + 1):
                yield (shape[row] + added,) + rest

    def fill(shape: tuple[int, ...], rows: list[list[int]], value: int):
        if value > content.n:
            if shape == target:
                fillings.append(tuple(tuple(row) for row in rows))
            return
        for new_shape in strips(shape, content.parts[value - 1], 0):
            grown = [row + [value] * (new_shape[j] - shape[j]) for j, row in enumerate(rows)]
            fill(new_shape, grown, value + 1)

    fill(tuple(0 for _ in target), [[] for _ in target], 1)
    tableaux = [SemistandardTableau(lam, content, rows) for rows in fillings]
    return tuple(sorted(tableaux, key=lambda t: t.reading_word()))


def weight_word(t: StandardTableau, content: Composition) -> SemistandardTableau:
    """Replace every entry of t by the number of the content block containing it."""
    rows = tuple(tuple(content.block_of(entry) for entry in row) for row in t.rows)
    return SemistandardTableau(t.shape, content, rows)


def identity_permutation(i: int) -> Permutation:
    return tuple(range(1, i + 1))


def compose_permutations(a: Permutation, b: Permutation) -> Permutation:
    """a ∘ b, i.e. apply b first."""
    return tuple(a[x - 1] for x in b)


def invert_permutation(a: Permutation) -> Permutation:
    inverse = [0] * len(a)
    for x, image in enumerate(a, start=1):
        inverse[image - 1] = x
    return tuple(inverse)


@cache
def symmetric_group(i: int) -> tuple[Permutation, ...]:
    return tuple(itertools.permutations(range(1, i + 1)))


@cache
def young_subgroup(mu: Composition) -> tuple[Permutation, ...]:
    """S_μ: permutations of {1..total} preserving every block of μ, sorted."""
    blocks = [block for block in mu.blocks() if block]
    elements = []
    for images in itertools.product(*(itertools.permutations(block) for block in blocks)):
        perm = [0] * mu.total
        for block, image in zip(blocks, images):
            for x, y in zip(block, image):
                perm[x - 1] = y
        elements.append(tuple(perm))
    return tuple(sorted(elements))


def k_p(lam: Partition, p: int) -> int:
    """Largest k such that p^k divides every part of λ."""
    if lam.is_empty:
        raise ValueError("k_p is undefined for the empty partition")
    k = 0
    while all(part % p ** (k + 1) == 0 for part in lam.parts):
        k += 1
    return k


def is_p_restricted(lam: Partition, p: int) -> bool:
    parts = lam.parts + (0,)
    return all(parts[j] - parts[j + 1] < p for j in range(len(lam)))


@cache
def p_restricted_partitions(n: int, p: int) -> tuple[Partition, ...]:
    return tuple(lam for lam in partitions_of(n) if is_p_restricted(lam, p))


@dataclass(frozen=True)
class PAdicDecomposition:
    """Levels m..M of a partition split into p-restricted pieces.

    s_levels[j] and restricted_parts[j] belong to level m + j.
    """

    p: int
    m: int
    s_levels: tuple[int, ...]
    restricted_parts: tuple[Partition, ...]

    @property
    def M(self) -> int:
        return self.m + len(self.s_levels) - 1

    @property
    def n(self) -> int:
        return sum(s * self.p ** (self.m + j) for j, s in enumerate(self.s_levels))

    def level(self, i: int) -> Partition:
        return self.restricted_parts[i - self.m]


def _parts_from_differences(deltas: list[int]) -> tuple[int, ...]:
    parts = []
    running = 0
    for delta in reversed(deltas):
        running += delta
        parts.append(running)
    return tuple(part for part in reversed(parts) if part > 0)


def p_adic_decompose(lam: Partition, p: int) -> PAdicDecomposition:
    """Split λ into p-restricted partitions, one per power of p.

    At each step k is the largest exponent with p^k at most some row difference;
    q_j p^k columns of height j are removed and shrunk by p^k, and the remainder
    is treated the same way until nothing is left.
    """
    if lam.is_empty:
        raise ValueError("the empty partition has no p-adic decomposition")
    levels: dict[int, Partition] = {}
    current = list(lam.parts)
    while current:
        deltas = [current[j] - (current[j + 1] if j + 1 < len(current) else 0) for j in range(len(current))]
        k = 0
        while p ** (k + 1) <= max(deltas):
            k += 1
        q = [delta // p**k for delta in deltas]
        remainder = [delta % p**k for delta in deltas]
        levels[k] = Partition(_parts_from_differences(q))
        current = list(_parts_from_differences(remainder))
    m, M = min(levels), max(levels)
    parts = tuple(levels.get(i, LAMBDA_ZERO) for i in range(m, M + 1))
    return PAdicDecomposition(p, m, tuple(part.index for part in parts), parts)


def p_adic_reconstruct(dec: PAdicDecomposition) -> Partition:
    """Replace every box at level i by p^i boxes and merge rows."""
    if not dec.s_levels or dec.s_levels[0] <= 0:
        raise ValueError(f"decomposition must have s_m > 0: {dec.s_levels}")
    rows: list[int] = []
    for j, part in enumerate(dec.restricted_parts):
        if part.index != dec.s_levels[j]:
            raise ValueError(f"level {dec.m + j} partition {part} does not sum to {dec.s_levels[j]}")
        if not is_p_restricted(part, dec.p):
            raise ValueError(f"level {dec.m + j} partition {part} is not {dec.p}-restricted")
        scale = dec.p ** (dec.m + j)
        for row, length in enumerate(part.parts):
            if row == len(rows):
                rows.append(0)
            rows[row] += length * scale
    return Partition(tuple(rows))
