"""Sparse linear algebra over GF(2).

Rows are stored as sorted column-index lists; all elimination work happens on
Python-int bitmasks (bit j of a row mask = entry in column j), which keeps the
inner loops at C speed while the sparse supports stay the source of truth.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "BitVector",
    "SparseBitMatrix",
    "ReducedSystem",
    "rank",
    "row_reduce",
    "solve_affine",
    "nullspace_basis",
    "in_row_space",
    "bits_from_indices",
    "iter_bits",
    "lexmin_in_coset",
]


def bits_from_indices(indices: Iterable[int], length: int) -> int:
    """Pack a collection of bit positions into one integer bitmask."""
    buf = bytearray(length // 8 + 1)
    for i in indices:
        if not 0 <= i < length:
            raise ValueError(f"index {i} out of range for length {length}")
        buf[i >> 3] |= 1 << (i & 7)
    return int.from_bytes(buf, "little")


def iter_bits(mask: int):
    """Yield the set bit positions of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class BitVector:
    """Fixed-length vector over GF(2), stored as an integer bitmask."""

    __slots__ = ("length", "bits")

    def __init__(self, length: int, bits: int = 0):
        if bits < 0 or bits >> length:
            raise ValueError("bits outside vector length")
        self.length = length
        self.bits = bits

    @classmethod
    def zeros(cls, length: int) -> "BitVector":
        return cls(length, 0)

    @classmethod
    def from_support(cls, length: int, indices: Iterable[int]) -> "BitVector":
        return cls(length, bits_from_indices(indices, length))

    def support(self) -> list[int]:
        return list(iter_bits(self.bits))

    def weight(self) -> int:
        return self.bits.bit_count()

    def copy(self) -> "BitVector":
        return BitVector(self.length, self.bits)

    def __getitem__(self, i: int) -> int:
        return (self.bits >> i) & 1

    def set(self, i: int, value: int) -> None:
        if value & 1:
            self.bits |= 1 << i
        else:
            self.bits &= ~(1 << i)

    def __xor__(self, other: "BitVector") -> "BitVector":
        if self.length != other.length:
            raise ValueError("length mismatch")
        return BitVector(self.length, self.bits ^ other.bits)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitVector)
            and self.length == other.length
            and self.bits == other.bits
        )

    def __hash__(self) -> int:
        return hash((self.length, self.bits))

    def __len__(self) -> int:
        return self.length

    def to_numpy(self) -> np.ndarray:
        out = np.zeros(self.length, dtype=np.uint8)
        out[self.support()] = 1
        return out

    def __repr__(self) -> str:
        return f"BitVector({self.length}, support={self.support()})"


class SparseBitMatrix:
    """Binary matrix held as per-row sorted column supports.

    Mutation goes through :meth:`set_row` so the derived caches (row masks,
    column supports, row-space basis) stay coherent.
    """

    __slots__ = ("num_rows", "num_cols", "rows", "_masks", "_col_support", "_row_basis")

    def __init__(self, num_rows: int, num_cols: int, rows: Sequence[Sequence[int]]):
        if len(rows) != num_rows:
            raise ValueError("row count mismatch")
        clean: list[list[int]] = []
        for r, support in enumerate(rows):
            sup = sorted(support)
            if sup and (sup[0] < 0 or sup[-1] >= num_cols):
                raise ValueError(f"row {r}: column index out of range")
            if any(a == b for a, b in zip(sup, sup[1:])):
                raise ValueError(f"row {r}: duplicate column index")
            clean.append(sup)
        self.num_rows = num_rows
        self.num_cols = num_cols
        self.rows = clean
        self._masks: list[int] | None = None
        self._col_support: list[list[int]] | None = None
        self._row_basis: dict[int, int] | None = None

    @classmethod
    def zeros(cls, num_rows: int, num_cols: int) -> "SparseBitMatrix":
        return cls(num_rows, num_cols, [[] for _ in range(num_rows)])

    @classmethod
    def identity(cls, n: int) -> "SparseBitMatrix":
        return cls(n, n, [[i] for i in range(n)])

    @classmethod
    def from_dense(cls, array) -> "SparseBitMatrix":
        arr = np.asarray(array) % 2
        rows = [list(np.flatnonzero(arr[i])) for i in range(arr.shape[0])]
        return cls(arr.shape[0], arr.shape[1], rows)

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.num_rows, self.num_cols), dtype=np.uint8)
        for i, sup in enumerate(self.rows):
            out[i, sup] = 1
        return out

    def set_row(self, i: int, support: Iterable[int]) -> None:
        sup = sorted(support)
        if sup and (sup[0] < 0 or sup[-1] >= self.num_cols):
            raise ValueError("column index out of range")
        if any(a == b for a, b in zip(sup, sup[1:])):
            raise ValueError("duplicate column index")
        self.rows[i] = sup
        self._masks = None
        self._col_support = None
        self._row_basis = None

    def row_masks(self) -> list[int]:
        if self._masks is None:
            n = self.num_cols
            self._masks = [bits_from_indices(sup, n) for sup in self.rows]
        return self._masks

    def column_supports(self) -> list[list[int]]:
        if self._col_support is None:
            cols: list[list[int]] = [[] for _ in range(self.num_cols)]
            for r, sup in enumerate(self.rows):
                for c in sup:
                    cols[c].append(r)
            self._col_support = cols
        return self._col_support

    def row_space_basis(self) -> dict[int, int]:
        """Forward-eliminated basis of the row space, pivot column -> row mask."""
        if self._row_basis is None:
            self._row_basis = _forward_basis(self.row_masks())
        return self._row_basis

    def transpose(self) -> "SparseBitMatrix":
        return SparseBitMatrix(self.num_cols, self.num_rows, self.column_supports())

    def mul_vec(self, v: BitVector) -> BitVector:
        if v.length != self.num_cols:
            raise ValueError("vector length must equal num_cols")
        bits = 0
        out = bytearray(self.num_rows // 8 + 1)
        vb = v.bits
        for r, mask in enumerate(self.row_masks()):
            if (mask & vb).bit_count() & 1:
                out[r >> 3] |= 1 << (r & 7)
        bits = int.from_bytes(out, "little")
        return BitVector(self.num_rows, bits)

    def copy(self) -> "SparseBitMatrix":
        return SparseBitMatrix(self.num_rows, self.num_cols, [list(r) for r in self.rows])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SparseBitMatrix)
            and self.num_rows == other.num_rows
            and self.num_cols == other.num_cols
            and self.rows == other.rows
        )

    def __repr__(self) -> str:
        return f"SparseBitMatrix({self.num_rows}x{self.num_cols}, nnz={sum(len(r) for r in self.rows)})"


@dataclass
class ReducedSystem:
    """Outcome of Gaussian elimination: pivot structure and solvability."""

    pivot_map: dict[int, int]
    free_columns: list[int]
    consistent: bool


def _low_bit(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def _forward_basis(masks: Iterable[int]) -> dict[int, int]:
    """Row-echelon basis keyed by pivot column (lowest set bit)."""
    basis: dict[int, int] = {}
    for mask in masks:
        while mask:
            p = _low_bit(mask)
            row = basis.get(p)
            if row is None:
                basis[p] = mask
                break
            mask ^= row
    return basis


def _full_rref(masks: Iterable[int]) -> dict[int, int]:
    """Fully reduced basis: no stored row contains another row's pivot."""
    basis: dict[int, int] = {}
    for mask in masks:
        while mask:
            p = _low_bit(mask)
            row = basis.get(p)
            if row is None:
                break
            mask ^= row
        if not mask:
            continue
        # clear remaining pivot bits above p, then eliminate p everywhere else
        for q, row in basis.items():
            if (mask >> q) & 1:
                mask ^= row
        for q, row in basis.items():
            if (row >> p) & 1:
                basis[q] = row ^ mask
        basis[p] = mask
    return basis


def rank(m: SparseBitMatrix) -> int:
    """GF(2) rank of ``m``."""
    return len(m.row_space_basis())


def rank_of_masks(masks: Iterable[int]) -> int:
    """Rank of a collection of row bitmasks (no matrix object needed)."""
    return len(_forward_basis(masks))


def row_reduce(
    m: SparseBitMatrix, rhs: BitVector
) -> tuple[ReducedSystem, SparseBitMatrix, BitVector]:
    """Reduced row echelon form of ``[m | rhs]``.

    Pivots are selected at the lowest eligible column first; the RREF of a
    given row space is unique, so identical inputs give bit-identical output.
    Inconsistency (a zero row with rhs 1) is reported, not raised.
    """
    if rhs.length != m.num_rows:
        raise ValueError("rhs length must equal num_rows")
    n = m.num_cols
    aug_bit = 1 << n
    masks = [
        mask | (aug_bit if rhs[r] else 0) for r, mask in enumerate(m.row_masks())
    ]
    basis = _full_rref(masks)
    consistent = n not in basis
    pivots = sorted(c for c in basis if c < n)
    pivot_map = {c: r for r, c in enumerate(pivots)}
    free_columns = [c for c in range(n) if c not in basis]

    col_mask = aug_bit - 1
    out_rows: list[list[int]] = []
    out_rhs_bits = 0
    for r, c in enumerate(pivots):
        mask = basis[c]
        out_rows.append(list(iter_bits(mask & col_mask)))
        if mask >> n:
            out_rhs_bits |= 1 << r
    if not consistent:
        out_rhs_bits |= 1 << len(out_rows)
        out_rows.append([])
    while len(out_rows) < m.num_rows:
        out_rows.append([])
    reduced = SparseBitMatrix(m.num_rows, n, out_rows)
    return (
        ReducedSystem(pivot_map, free_columns, consistent),
        reduced,
        BitVector(m.num_rows, out_rhs_bits),
    )


def solve_affine(m: SparseBitMatrix, rhs: BitVector) -> BitVector | None:
    """One solution of ``m x = rhs`` with every free variable set to 0.

    Returns ``None`` when the system is inconsistent.
    """
    if rhs.length != m.num_rows:
        raise ValueError("rhs length must equal num_rows")
    n = m.num_cols
    aug_bit = 1 << n
    masks = [
        mask | (aug_bit if rhs[r] else 0) for r, mask in enumerate(m.row_masks())
    ]
    basis = _full_rref(masks)
    if n in basis:
        return None
    bits = 0
    for c, mask in basis.items():
        if mask >> n:
            bits |= 1 << c
    return BitVector(n, bits)


def nullspace_basis(m: SparseBitMatrix) -> list[BitVector]:
    """Basis of the right kernel, one vector per free column, ascending."""
    n = m.num_cols
    basis = _full_rref(m.row_masks())
    pivots = sorted(basis)
    out: list[BitVector] = []
    for f in range(n):
        if f in basis:
            continue
        bits = 1 << f
        for c in pivots:
            if (basis[c] >> f) & 1:
                bits |= 1 << c
        out.append(BitVector(n, bits))
    return out


def in_row_space(m: SparseBitMatrix, v: BitVector) -> bool:
    """True iff ``v`` is a GF(2) combination of the rows of ``m``."""
    if v.length != m.num_cols:
        raise ValueError("vector length must equal num_cols")
    return reduces_to_zero(m.row_space_basis(), v.bits)


def reduces_to_zero(basis: dict[int, int], bits: int) -> bool:
    """Reduce ``bits`` against a forward basis; True iff it lands on zero."""
    while bits:
        p = _low_bit(bits)
        row = basis.get(p)
        if row is None:
            return False
        bits ^= row
    return True


def lexmin_in_coset(bits: int, coset_basis: Iterable[int]) -> int:
    """Lexicographically smallest element of ``bits + span(coset_basis)``.

    Lex order compares bit 0 first: the minimum is the unique coset element
    with a 0 in every pivot column of the reduced basis.
    """
    basis = _forward_basis(coset_basis)
    for p in sorted(basis):
        if (bits >> p) & 1:
            bits ^= basis[p]
    return bits
