"""Erasure decoders on the syndrome system H_E x_E = s.

All three engines share queue-based peeling over the Tanner graph restricted
to the erased columns. Hard guessing pins stalled columns to 0; inactivation
turns them into symbolic guesses, tracks every solved bit as an affine
function of (syndrome, guesses), and settles the guesses with one small
Gaussian elimination at the end.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum

from .codes import CssCode
from .gf2 import (
    BitVector,
    SparseBitMatrix,
    _full_rref,
    bits_from_indices,
    lexmin_in_coset,
    reduces_to_zero,
)

__all__ = [
    "DecodeStatus",
    "Outcome",
    "DecodeStats",
    "DecodeResult",
    "peel",
    "hard_guess_peel",
    "inactivation_decode",
    "classify",
]


class DecodeStatus(Enum):
    SOLVED = "solved"
    NON_CONVERGENT = "non_convergent"


class Outcome(Enum):
    SUCCESS = "success"
    DEGENERATE_SUCCESS = "degenerate_success"
    LOGICAL_FAILURE = "logical_failure"
    NON_CONVERGENT = "non_convergent"


@dataclass
class DecodeStats:
    num_inactivations: int = 0
    core_dim: int = 0
    num_hard_guesses: int = 0
    num_fixed_bits: int = 0
    peel_steps: int = 0


@dataclass
class DecodeResult:
    estimate: BitVector
    status: DecodeStatus
    stats: DecodeStats = field(default_factory=DecodeStats)


class _PeelRun:
    """Shared peeling state: residual degrees, column id XOR sums, syndrome.

    The XOR-sum trick recovers the unique active column of a degree-1 check
    in O(1). A dequeued check whose degree moved on is silently discarded.
    """

    __slots__ = (
        "h",
        "erased",
        "col_support",
        "active",
        "count",
        "xor_sum",
        "s_cur",
        "queue",
        "ones",
        "steps",
        "num_active",
    )

    def __init__(self, h: SparseBitMatrix, erased: list[int], s: BitVector):
        self.h = h
        self.erased = erased
        col_support = h.column_supports()
        self.col_support = col_support
        active = bytearray(h.num_cols)
        count = [0] * h.num_rows
        xor_sum = [0] * h.num_rows
        touched: list[int] = []
        for j in erased:
            active[j] = 1
            for r in col_support[j]:
                if count[r] == 0:
                    touched.append(r)
                count[r] += 1
                xor_sum[r] ^= j
        s_cur = bytearray(h.num_rows)
        for r in s.support():
            s_cur[r] = 1
        self.active = active
        self.count = count
        self.xor_sum = xor_sum
        self.s_cur = s_cur
        self.queue = deque(sorted(r for r in touched if count[r] == 1))
        self.ones: list[int] = []
        self.steps = 0
        self.num_active = len(erased)

    def drain(self, max_steps: int | None = None) -> None:
        queue = self.queue
        count = self.count
        xor_sum = self.xor_sum
        s_cur = self.s_cur
        active = self.active
        col_support = self.col_support
        ones = self.ones
        while queue:
            r = queue.popleft()
            if count[r] != 1:
                continue
            j = xor_sum[r]
            v = s_cur[r]
            active[j] = 0
            self.num_active -= 1
            if v:
                ones.append(j)
            for r2 in col_support[j]:
                count[r2] -= 1
                xor_sum[r2] ^= j
                if v:
                    s_cur[r2] ^= 1
                if count[r2] == 1:
                    queue.append(r2)
            self.steps += 1
            if max_steps is not None and self.steps >= max_steps:
                return

    def force_zero(self, j: int) -> None:
        """Remove column j from the system with value 0."""
        self.active[j] = 0
        self.num_active -= 1
        queue = self.queue
        count = self.count
        xor_sum = self.xor_sum
        for r2 in self.col_support[j]:
            count[r2] -= 1
            xor_sum[r2] ^= j
            if count[r2] == 1:
                queue.append(r2)

    def residual(self) -> list[int]:
        active = self.active
        return [j for j in self.erased if active[j]]

    def estimate_bits(self) -> int:
        return bits_from_indices(self.ones, self.h.num_cols)


def _degree_order(col_support: list[list[int]], erased: list[int]) -> list[int]:
    # Residual column weight never changes while a column is active (checks
    # only drop out together with a column), so the static degree suffices.
    return sorted(erased, key=lambda j: (-len(col_support[j]), j))


def _syndrome_of_bits(h: SparseBitMatrix, bits: int) -> int:
    out = 0
    for r, mask in enumerate(h.row_masks()):
        if (mask & bits).bit_count() & 1:
            out |= 1 << r
    return out


def peel(
    h: SparseBitMatrix, erased: list[int], s: BitVector, max_steps: int | None = None
) -> tuple[DecodeResult, list[int]]:
    """Pure peeling. Solved iff the residual stopping set is empty.

    With ``max_steps`` the run halts early after that many resolutions,
    leaving the rest of the erasure as residual.
    """
    erased = sorted(erased)
    run = _PeelRun(h, erased, s)
    run.drain(max_steps)
    residual = run.residual()
    status = DecodeStatus.SOLVED if not residual else DecodeStatus.NON_CONVERGENT
    result = DecodeResult(
        estimate=BitVector(h.num_cols, run.estimate_bits()),
        status=status,
        stats=DecodeStats(peel_steps=run.steps),
    )
    return result, residual


def hard_guess_peel(h: SparseBitMatrix, erased: list[int], s: BitVector) -> DecodeResult:
    """Peeling that pins the heaviest stalled column to 0 and keeps going.

    The final assignment is checked against the syndrome; a mismatch means
    some guess was wrong and the decode is non-convergent.
    """
    erased = sorted(erased)
    run = _PeelRun(h, erased, s)
    order = _degree_order(run.col_support, erased)
    ptr = 0
    guesses = 0
    run.drain()
    while run.num_active:
        while not run.active[order[ptr]]:
            ptr += 1
        run.force_zero(order[ptr])
        guesses += 1
        run.drain()
    bits = run.estimate_bits()
    ok = _syndrome_of_bits(h, bits) == s.bits
    return DecodeResult(
        estimate=BitVector(h.num_cols, bits),
        status=DecodeStatus.SOLVED if ok else DecodeStatus.NON_CONVERGENT,
        stats=DecodeStats(num_hard_guesses=guesses, peel_steps=run.steps),
    )


def inactivation_decode(h: SparseBitMatrix, erased: list[int], s: BitVector) -> DecodeResult:
    """Peeling plus symbolic guessing; exact once the guess core is solved.

    Solved variables are stored as (constant, guess mask). Unused check rows
    become the core equations over the guesses; the core is eliminated with
    free guesses at 0 and the result is mapped onto the lexicographically
    smallest consistent error, the tie-break shared with the ML oracle.
    """
    erased = sorted(erased)
    n = h.num_cols
    run = _PeelRun(h, erased, s)
    col_support = run.col_support
    gmask = [0] * h.num_rows
    expr_const: dict[int, int] = {}
    expr_mask: dict[int, int] = {}
    guesses: list[int] = []
    order = _degree_order(col_support, erased)
    ptr = 0

    queue = run.queue
    count = run.count
    xor_sum = run.xor_sum
    s_cur = run.s_cur
    active = run.active
    while True:
        while queue:
            r = queue.popleft()
            if count[r] != 1:
                continue
            j = xor_sum[r]
            c = s_cur[r]
            gm = gmask[r]
            expr_const[j] = c
            expr_mask[j] = gm
            active[j] = 0
            run.num_active -= 1
            for r2 in col_support[j]:
                count[r2] -= 1
                xor_sum[r2] ^= j
                if c:
                    s_cur[r2] ^= 1
                if gm:
                    gmask[r2] ^= gm
                if count[r2] == 1:
                    queue.append(r2)
            run.steps += 1
        if not run.num_active:
            break
        while not active[order[ptr]]:
            ptr += 1
        j = order[ptr]
        gbit = 1 << len(guesses)
        guesses.append(j)
        expr_const[j] = 0
        expr_mask[j] = gbit
        active[j] = 0
        run.num_active -= 1
        for r2 in col_support[j]:
            count[r2] -= 1
            xor_sum[r2] ^= j
            gmask[r2] ^= gbit
            if count[r2] == 1:
                queue.append(r2)

    lx = len(guesses)
    core_rows = []
    for r in range(h.num_rows):
        gm = gmask[r]
        if gm or s_cur[r]:
            core_rows.append(gm | (s_cur[r] << lx))
    stats = DecodeStats(
        num_inactivations=lx,
        core_dim=max(len(core_rows), lx),
        peel_steps=run.steps,
    )
    basis = _full_rref(core_rows)
    if lx in basis:
        return DecodeResult(BitVector.zeros(n), DecodeStatus.NON_CONVERGENT, stats)
    g0 = 0
    for c, mask in basis.items():
        if (mask >> lx) & 1:
            g0 |= 1 << c

    ones = []
    for j in erased:
        if expr_const[j] ^ ((expr_mask[j] & g0).bit_count() & 1):
            ones.append(j)
    est = bits_from_indices(ones, n)

    free_guesses = [f for f in range(lx) if f not in basis]
    if free_guesses:
        pivots = sorted(basis)
        null_vecs = []
        for f in free_guesses:
            nu = 1 << f
            for c in pivots:
                if (basis[c] >> f) & 1:
                    nu |= 1 << c
            w = [j for j in erased if (expr_mask[j] & nu).bit_count() & 1]
            null_vecs.append(bits_from_indices(w, n))
        est = lexmin_in_coset(est, null_vecs)

    return DecodeResult(BitVector(n, est), DecodeStatus.SOLVED, stats)


def classify(
    estimate: BitVector,
    truth: BitVector,
    code: CssCode,
    side: str,
    status: DecodeStatus,
) -> Outcome:
    """Four-way outcome of a decode attempt against the hidden error.

    Exact match is a success; a stabilizer difference is a degenerate
    success; a syndrome-invisible difference is a logical failure; anything
    else (including a non-convergent status) is non-convergent.
    """
    if status is DecodeStatus.NON_CONVERGENT:
        return Outcome.NON_CONVERGENT
    diff = estimate.bits ^ truth.bits
    if diff == 0:
        return Outcome.SUCCESS
    if reduces_to_zero(code.stab_row_basis(side), diff):
        return Outcome.DEGENERATE_SUCCESS
    if _syndrome_of_bits(code.check_matrix(side), diff) == 0:
        return Outcome.LOGICAL_FAILURE
    return Outcome.NON_CONVERGENT
