"""Exact reference decoding and erasure-pattern dimension oracles.

Everything here goes through one full Gaussian elimination per call, with no
peeling shortcuts, so it stays an independent check on the fast decoders.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .codes import CssCode
from .decoders import DecodeResult, DecodeStats, DecodeStatus
from .gf2 import (
    BitVector,
    SparseBitMatrix,
    _forward_basis,
    _full_rref,
    bits_from_indices,
    lexmin_in_coset,
)

__all__ = [
    "OraclePrediction",
    "ml_decode_ge",
    "fully_erased_dim",
    "erased_logical_dim",
    "predict",
]


@dataclass
class OraclePrediction:
    """Erasure-pattern structure: stabilizer and logical degrees of freedom.

    Over the erasure channel every syndrome-consistent error is equally
    likely, so a decoder with any fixed tie-break fails with probability
    exactly 1 - 2^(-l) where l counts erased logical degrees of freedom.
    """

    fully_erased_dim: int
    erased_logical_dim: int
    ml_failure_probability: Fraction


def ml_decode_ge(h: SparseBitMatrix, erased: list[int], s: BitVector) -> DecodeResult:
    """Solve the erased system by full elimination.

    Returns the lexicographically smallest consistent error (the shared ML
    tie-break); non-convergent only for syndromes no erasure pattern explains.
    """
    n = h.num_cols
    erased = sorted(erased)
    erased_bits = bits_from_indices(erased, n)
    aug = 1 << n
    rows = [
        (mask & erased_bits) | (aug if s[r] else 0)
        for r, mask in enumerate(h.row_masks())
    ]
    basis = _full_rref(rows)
    stats = DecodeStats(core_dim=len(erased))
    if n in basis:
        return DecodeResult(BitVector.zeros(n), DecodeStatus.NON_CONVERGENT, stats)
    bits = 0
    for c, mask in basis.items():
        if mask >> n:
            bits |= 1 << c
    pivots = sorted(basis)
    null_vecs = []
    for f in erased:
        if f in basis:
            continue
        nu = 1 << f
        for c in pivots:
            if (basis[c] >> f) & 1:
                nu |= 1 << c
        null_vecs.append(nu)
    bits = lexmin_in_coset(bits, null_vecs)
    return DecodeResult(BitVector(n, bits), DecodeStatus.SOLVED, stats)


def _known_bits(known: Iterable[int] | int, n: int) -> int:
    if isinstance(known, int):
        return known
    return bits_from_indices(known, n)


def fully_erased_dim(hx: SparseBitMatrix, known: Iterable[int] | int) -> int:
    """Dimension of the stabilizer combinations supported inside the erasure.

    Equals rank(hx) minus the rank of hx restricted to the known columns.
    """
    kb = _known_bits(known, hx.num_cols)
    masks = hx.row_masks()
    full_rank = len(_forward_basis(masks))
    known_rank = len(_forward_basis(m & kb for m in masks))
    return full_rank - known_rank


def erased_logical_dim(code: CssCode, erased: list[int], side: str) -> int:
    """Number of independent erased logical degrees of freedom.

    The kernel of the erased check submatrix splits into fully erased
    stabilizers and erased logicals; subtracting the former leaves l.
    """
    n = code.n
    erased_bits = bits_from_indices(erased, n)
    h = code.check_matrix(side)
    kernel_dim = len(erased) - len(_forward_basis(m & erased_bits for m in h.row_masks()))
    full = (1 << n) - 1
    return kernel_dim - fully_erased_dim(code.stab_matrix(side), full ^ erased_bits)


def predict(code: CssCode, erased: list[int], side: str) -> OraclePrediction:
    """Bundle the two dimensions with the exact ML failure probability."""
    n = code.n
    erased_bits = bits_from_indices(erased, n)
    full = (1 << n) - 1
    stab_dim = fully_erased_dim(code.stab_matrix(side), full ^ erased_bits)
    h = code.check_matrix(side)
    kernel_dim = len(erased) - len(_forward_basis(m & erased_bits for m in h.row_masks()))
    logical_dim = kernel_dim - stab_dim
    return OraclePrediction(
        fully_erased_dim=stab_dim,
        erased_logical_dim=logical_dim,
        ml_failure_probability=Fraction(1) - Fraction(1, 2**logical_dim),
    )
