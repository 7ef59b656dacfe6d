"""Exact linear algebra over a prime field or the rationals."""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, NamedTuple

import numpy as np

from brmult.config import DEFAULT_PRIME, MAX_PRIME, MIN_PRIME, FieldSpec
from brmult.errors import PreconditionError

logger = logging.getLogger(__name__)

Scalar = int | Fraction
SparseVector = Mapping[int, Scalar]

# Rows added per elimination pass inside a block.
CHUNK_ROWS = 512


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class Field(ABC):
    """A field of scalars together with its numpy representation."""

    name: str
    dtype: Any

    @abstractmethod
    def normalize(self, value: Scalar) -> Scalar:
        """Return the canonical representative of ``value``."""

    @abstractmethod
    def inv(self, value: Scalar) -> Scalar:
        """Multiplicative inverse of a nonzero element."""

    @abstractmethod
    def random(self, rng: np.random.Generator) -> Scalar:
        """Draw an element using ``rng``."""

    @abstractmethod
    def reduce_array(self, array: np.ndarray) -> np.ndarray:
        """Bring every entry of ``array`` to canonical form."""

    def to_array(self, rows: Sequence[Sequence[Scalar]], cols: int | None = None) -> np.ndarray:
        if not rows:
            return np.zeros((0, cols or 0), dtype=self.dtype)
        data = [[self.normalize(v) for v in row] for row in rows]
        return np.array(data, dtype=self.dtype)

    def zeros(self, shape: tuple[int, ...]) -> np.ndarray:
        if self.dtype is object:
            array = np.empty(shape, dtype=object)
            array.fill(0)
            return array
        return np.zeros(shape, dtype=self.dtype)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name})"


class PrimeField(Field):
    """F_p with canonical residues in [0, p), vectorized over int64."""

    dtype = np.int64

    def __init__(self, p: int = DEFAULT_PRIME) -> None:
        if not MIN_PRIME < p < MAX_PRIME:
            raise PreconditionError(f"prime must lie in ({MIN_PRIME}, 2^31), got {p}")
        if not _is_prime(p):
            raise PreconditionError(f"{p} is not prime")
        self.p = p
        self.name = f"fp:{p}"

    def normalize(self, value: Scalar) -> int:
        if isinstance(value, Fraction):
            return value.numerator * pow(value.denominator, -1, self.p) % self.p
        return int(value) % self.p

    def inv(self, value: Scalar) -> int:
        v = self.normalize(value)
        if v == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(v, -1, self.p)

    def random(self, rng: np.random.Generator) -> int:
        return int(rng.integers(0, self.p))

    def reduce_array(self, array: np.ndarray) -> np.ndarray:
        return array % self.p

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("fp", self.p))


class RationalField(Field):
    """Q with ``int`` or ``Fraction`` entries in object arrays."""

    dtype = object
    name = "q"

    # Random draws are integers in [-bound, bound].
    sample_bound = 1000

    def normalize(self, value: Scalar) -> Scalar:
        if isinstance(value, Fraction):
            return value.numerator if value.denominator == 1 else value
        return int(value)

    def inv(self, value: Scalar) -> Scalar:
        if value == 0:
            raise ZeroDivisionError("inverse of zero")
        return self.normalize(Fraction(1) / Fraction(value))

    def random(self, rng: np.random.Generator) -> int:
        return int(rng.integers(-self.sample_bound, self.sample_bound + 1))

    def reduce_array(self, array: np.ndarray) -> np.ndarray:
        return array

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RationalField)

    def __hash__(self) -> int:
        return hash("q")


def field_from_spec(spec: FieldSpec | str) -> Field:
    """Build the field named by ``spec`` (``fp:<prime>`` or ``q``)."""
    if isinstance(spec, str):
        spec = FieldSpec.parse(spec)
    return RationalField() if spec.prime is None else PrimeField(spec.prime)


@dataclass(frozen=True, eq=False)
class DenseMatrix:
    """A rows x cols matrix of scalars."""

    field: Field
    array: np.ndarray

    def __post_init__(self) -> None:
        if self.array.ndim != 2:
            raise PreconditionError("DenseMatrix needs a 2-D array")

    @classmethod
    def from_rows(
        cls, field: Field, rows: Sequence[Sequence[Scalar]], cols: int | None = None
    ) -> DenseMatrix:
        widths = {len(row) for row in rows}
        if len(widths) > 1:
            raise PreconditionError("rows have different lengths")
        return cls(field, field.to_array(rows, cols))

    @classmethod
    def identity(cls, field: Field, n: int) -> DenseMatrix:
        array = field.zeros((n, n))
        for i in range(n):
            array[i, i] = 1
        return cls(field, array)

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> DenseMatrix:
        return cls(field, field.zeros((rows, cols)))

    @property
    def rows(self) -> int:
        return int(self.array.shape[0])

    @property
    def cols(self) -> int:
        return int(self.array.shape[1])

    @property
    def entries(self) -> list[Scalar]:
        """Row-major entries."""
        return [self.field.normalize(v) for v in self.array.reshape(-1).tolist()]

    def tolist(self) -> list[list[Scalar]]:
        return [[self.field.normalize(v) for v in row] for row in self.array.tolist()]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DenseMatrix):
            return NotImplemented
        return self.array.shape == other.array.shape and self.entries == other.entries

    def __hash__(self) -> int:
        return hash((self.array.shape, tuple(self.entries)))


class Echelon(NamedTuple):
    """Result of :func:`rref`."""

    matrix: DenseMatrix
    pivots: list[int]
    rank: int


def _rref_array(field: Field, array: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form of a copy of ``array`` with first-nonzero pivoting."""
    a = field.reduce_array(array.copy())
    nrows, ncols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nonzero = np.flatnonzero(a[r:, c])
        if nonzero.size == 0:
            continue
        i = r + int(nonzero[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        a[r] = field.reduce_array(a[r] * field.inv(a[r, c]))
        column = a[:, c].copy()
        column[r] = 0
        hits = np.flatnonzero(column)
        if hits.size:
            a[hits] = field.reduce_array(a[hits] - np.outer(column[hits], a[r]))
        pivots.append(c)
        r += 1
    return a, pivots


def rref(matrix: DenseMatrix) -> Echelon:
    """Reduced row-echelon form, pivot columns and rank of ``matrix``."""
    reduced, pivots = _rref_array(matrix.field, matrix.array)
    return Echelon(DenseMatrix(matrix.field, reduced), pivots, len(pivots))


def rank(matrix: DenseMatrix) -> int:
    return rref(matrix).rank


def span_contains(basis: DenseMatrix, v: Sequence[Scalar]) -> bool:
    """True iff ``v`` lies in the row space of ``basis``."""
    if len(v) != basis.cols:
        raise PreconditionError(f"vector of length {len(v)} against {basis.cols} columns")
    field = basis.field
    vector = field.to_array([list(v)], basis.cols)[0]
    if basis.rows == 0:
        return not np.any(vector)
    reduced, pivots = _rref_array(field, basis.array)
    return not np.any(_reduce_against(field, vector, reduced, pivots))


def kernel_basis(matrix: DenseMatrix) -> DenseMatrix:
    """Rows form a basis of the right null space of ``matrix``."""
    field = matrix.field
    reduced, pivots = _rref_array(field, matrix.array)
    free = [c for c in range(matrix.cols) if c not in set(pivots)]
    kernel = field.zeros((len(free), matrix.cols))
    for k, f in enumerate(free):
        kernel[k, f] = 1
        for i, c in enumerate(pivots):
            kernel[k, c] = field.normalize(-reduced[i, f])
    return DenseMatrix(field, kernel)


def _reduce_against(
    field: Field, vector: np.ndarray, reduced: np.ndarray, pivots: Sequence[int]
) -> np.ndarray:
    """Residual of ``vector`` modulo the row space of an RREF matrix."""
    out = vector.copy()
    for i, c in enumerate(pivots):
        coefficient = out[c]
        if coefficient:
            out = field.reduce_array(out - coefficient * reduced[i])
    return out


class _UnionFind:
    def __init__(self) -> None:
        self.parent: dict[int, int] = {}

    def find(self, x: int) -> int:
        parent = self.parent
        parent.setdefault(x, x)
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


@dataclass(frozen=True, eq=False)
class _Block:
    columns: tuple[int, ...]
    index: dict[int, int]
    reduced: np.ndarray
    pivots: tuple[int, ...]


class RowSpace:
    """Row space of sparse rows, eliminated block by block.

    Columns touched by a common row belong to the same block; rows never mix
    blocks, so the row space is the direct sum of the block row spaces and each
    block is reduced densely on its own.
    """

    def __init__(self, field: Field, ncols: int, blocks: list[_Block]) -> None:
        self.field = field
        self.ncols = ncols
        self._blocks = blocks
        self._block_of: dict[int, int] = {}
        for b, block in enumerate(blocks):
            for c in block.columns:
                self._block_of[c] = b

    @classmethod
    def from_sparse_rows(
        cls, field: Field, ncols: int, rows: Iterable[SparseVector]
    ) -> RowSpace:
        unique: set[tuple[tuple[int, Scalar], ...]] = set()
        for row in rows:
            items = sorted((c, field.normalize(v)) for c, v in row.items())
            items = [(c, v) for c, v in items if v != 0]
            if not items:
                continue
            lead = field.inv(items[0][1])
            unique.add(tuple((c, field.normalize(v * lead)) for c, v in items))

        uf = _UnionFind()
        for key in unique:
            first = key[0][0]
            uf.find(first)
            for c, _ in key[1:]:
                uf.union(first, c)
        grouped: dict[int, list[tuple[tuple[int, Scalar], ...]]] = {}
        for key in unique:
            grouped.setdefault(uf.find(key[0][0]), []).append(key)

        columns_of: dict[int, set[int]] = {}
        for c in list(uf.parent):
            columns_of.setdefault(uf.find(c), set()).add(c)

        blocks = []
        for root in sorted(grouped):
            columns = tuple(sorted(columns_of[root]))
            blocks.append(cls._eliminate_block(field, columns, sorted(grouped[root])))
        return cls(field, ncols, blocks)

    @staticmethod
    def _eliminate_block(
        field: Field, columns: tuple[int, ...], rows: list[tuple[tuple[int, Scalar], ...]]
    ) -> _Block:
        index = {c: i for i, c in enumerate(columns)}
        width = len(columns)
        basis = field.zeros((0, width))
        pivots: list[int] = []
        step = max(CHUNK_ROWS, width)
        for start in range(0, len(rows), step):
            chunk = field.zeros((min(step, len(rows) - start), width))
            for k, row in enumerate(rows[start : start + step]):
                for c, v in row:
                    chunk[k, index[c]] = v
            reduced, pivots = _rref_array(field, np.vstack([basis, chunk]))
            basis = reduced[: len(pivots)]
        return _Block(columns, index, basis, tuple(pivots))

    @property
    def rank(self) -> int:
        return sum(len(block.pivots) for block in self._blocks)

    @property
    def block_sizes(self) -> list[tuple[int, int]]:
        """(rank, width) per block."""
        return [(len(b.pivots), len(b.columns)) for b in self._blocks]

    def basis_vectors(self) -> list[dict[int, Scalar]]:
        """Rows of the reduced echelon bases of all blocks."""
        out = []
        for block in self._blocks:
            for row in block.reduced:
                nonzero = np.flatnonzero(row)
                out.append({block.columns[int(i)]: self.field.normalize(row[i]) for i in nonzero})
        return out

    def residual(self, vector: SparseVector) -> dict[int, Scalar]:
        """Nonzero entries of ``vector`` reduced modulo the row space."""
        field = self.field
        out: dict[int, Scalar] = {}
        per_block: dict[int, dict[int, Scalar]] = {}
        for c, v in vector.items():
            v = field.normalize(v)
            if v == 0:
                continue
            b = self._block_of.get(c)
            if b is None:
                out[c] = v
            else:
                per_block.setdefault(b, {})[c] = v
        for b, entries in per_block.items():
            block = self._blocks[b]
            dense = field.zeros((len(block.columns),))
            for c, v in entries.items():
                dense[block.index[c]] = v
            dense = _reduce_against(field, dense, block.reduced, block.pivots)
            for i in np.flatnonzero(dense):
                out[block.columns[int(i)]] = field.normalize(dense[i])
        return out

    def contains(self, vector: SparseVector) -> bool:
        return not self.residual(vector)


def independent_subset(field: Field, vectors: Sequence[SparseVector]) -> list[int]:
    """Indices of the earliest maximal linearly independent subset of ``vectors``."""
    support = sorted({c for v in vectors for c, x in v.items() if field.normalize(x) != 0})
    if not support:
        return []
    position = {c: i for i, c in enumerate(support)}
    # Vectors become columns so pivot columns name the kept vectors.
    array = field.zeros((len(support), len(vectors)))
    for j, v in enumerate(vectors):
        for c, x in v.items():
            if c in position:
                array[position[c], j] = field.normalize(x)
    _, pivots = _rref_array(field, array)
    return pivots
