"""Exact coefficient rings, sparse algebra elements and the exact linear algebra they need.

All arithmetic is over the integers (with Fractions only while rescaling);
reductions into Q or GF(p) happen on finished integer matrices through
sympy's DomainMatrix.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Union

from sympy import GF, QQ, ZZ, isprime
from sympy.polys.matrices import DomainMatrix

from cellschur.core.enums import RingKind
from cellschur.core.errors import CellStructureError

Scalar = Union[int, Fraction]


@dataclass(frozen=True)
class RingSpec:
    kind: RingKind
    p: Optional[int] = None

    def __post_init__(self):
        if self.kind is RingKind.PRIME_FIELD:
            if self.p is None or not isprime(self.p):
                raise ValueError(f"prime field needs a prime characteristic, got {self.p}")
        elif self.p is not None:
            raise ValueError(f"{self.kind.value} takes no characteristic")

    @classmethod
    def integers(cls) -> "RingSpec":
        return cls(RingKind.INTEGERS)

    @classmethod
    def rationals(cls) -> "RingSpec":
        return cls(RingKind.RATIONALS)

    @classmethod
    def prime_field(cls, p: int) -> "RingSpec":
        return cls(RingKind.PRIME_FIELD, p)

    @classmethod
    def field_of_characteristic(cls, characteristic: int) -> "RingSpec":
        return cls.rationals() if characteristic == 0 else cls.prime_field(characteristic)

    @property
    def is_field(self) -> bool:
        return self.kind is not RingKind.INTEGERS

    @property
    def characteristic(self) -> int:
        return self.p if self.kind is RingKind.PRIME_FIELD else 0

    @property
    def label(self) -> str:
        if self.kind is RingKind.PRIME_FIELD:
            return f"GF({self.p})"
        return "ZZ" if self.kind is RingKind.INTEGERS else "QQ"

    def reduce(self, value: int) -> int:
        return value % self.p if self.kind is RingKind.PRIME_FIELD else value

    def is_zero(self, value: int) -> bool:
        return self.reduce(value) == 0

    def require_field(self) -> None:
        if not self.is_field:
            raise ValueError("this computation needs a field, not the integers")


class SparseAlgebraElement:
    """A finitely supported coefficient map over the basis named by ``basis``.

    Zero coefficients are never stored.
    """

    __slots__ = ("coeffs", "basis")

    def __init__(self, coeffs: Optional[dict[int, Scalar]] = None, basis: str = ""):
        self.coeffs: dict[int, Scalar] = {k: v for k, v in (coeffs or {}).items() if v}
        self.basis = basis

    @classmethod
    def basis_element(cls, basis_id: int, basis: str = "") -> "SparseAlgebraElement":
        return cls({basis_id: 1}, basis)

    def __repr__(self) -> str:
        return f"SparseAlgebraElement({self.coeffs}, basis={self.basis!r})"

    def __iter__(self) -> Iterator[tuple[int, Scalar]]:
        return iter(sorted(self.coeffs.items()))

    def __len__(self) -> int:
        return len(self.coeffs)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseAlgebraElement):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __getitem__(self, basis_id: int) -> Scalar:
        return self.coeffs.get(basis_id, 0)

    def __add__(self, other: "SparseAlgebraElement") -> "SparseAlgebraElement":
        result = dict(self.coeffs)
        for k, v in other.coeffs.items():
            result[k] = result.get(k, 0) + v
        return SparseAlgebraElement(result, self.basis or other.basis)

    def __sub__(self, other: "SparseAlgebraElement") -> "SparseAlgebraElement":
        return self + other.scale(-1)

    def scale(self, c: Scalar) -> "SparseAlgebraElement":
        return SparseAlgebraElement({k: c * v for k, v in self.coeffs.items()}, self.basis)

    def support(self) -> list[int]:
        return sorted(self.coeffs)

    def integral(self) -> "SparseAlgebraElement":
        """The same element with every coefficient checked and cast to int."""
        result = {}
        for k, v in self.coeffs.items():
            if isinstance(v, Fraction):
                if v.denominator != 1:
                    raise CellStructureError(f"coefficient {v} at basis id {k} is not integral")
                v = v.numerator
            result[k] = int(v)
        return SparseAlgebraElement(result, self.basis)


def accumulate(target: dict, items: Iterable[tuple], scale: Scalar = 1) -> None:
    """target += scale * items, dropping cancelled keys."""
    for key, value in items:
        total = target.get(key, 0) + scale * value
        if total:
            target[key] = total
        else:
            target.pop(key, None)


def _to_fraction(value) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


def matrix_rank(rows: list[list[int]], ring: RingSpec) -> int:
    """Exact rank of an integer matrix over Q (fraction-free) or over GF(p)."""
    if not rows or not rows[0]:
        return 0
    if ring.kind is RingKind.PRIME_FIELD:
        return DomainMatrix.from_list([[v % ring.p for v in row] for row in rows], GF(ring.p)).rank()
    _, _, pivots = DomainMatrix.from_list(rows, ZZ).rref_den(method="FF")
    return len(pivots)


def integer_determinant(rows: list[list[int]]) -> int:
    if not rows:
        return 1
    return int(DomainMatrix.from_list(rows, ZZ).det())


def integer_inverse(rows: list[list[int]]) -> list[list[int]]:
    """Inverse of a unimodular integer matrix; anything else is a construction bug."""
    if not rows:
        return []
    try:
        inverse, den = DomainMatrix.from_list(rows, ZZ).inv_den()
    except Exception as e:
        raise CellStructureError(f"change of basis of size {len(rows)} is not invertible") from e
    den = int(den)
    if den == 0:
        raise CellStructureError(f"change of basis of size {len(rows)} is singular")
    result = []
    for row in inverse.to_list():
        converted = []
        for value in row:
            value = int(value)
            if value % den:
                raise CellStructureError(
                    f"change of basis of size {len(rows)} is not invertible over the integers"
                )
            converted.append(value // den)
        result.append(converted)
    return result


def solve_rational(rows: list[list[int]], rhs: list[int]) -> Optional[list[Fraction]]:
    """One exact solution of rows · x = rhs over Q (free variables set to 0), or None."""
    if not rows:
        return []
    width = len(rows[0])
    augmented = [list(row) + [b] for row, b in zip(rows, rhs)]
    reduced, pivots = DomainMatrix.from_list(augmented, QQ).rref()
    if width in pivots:
        return None
    table = reduced.to_list()
    solution = [Fraction(0)] * width
    for row_index, column in enumerate(pivots):
        solution[column] = _to_fraction(table[row_index][width])
    return solution
