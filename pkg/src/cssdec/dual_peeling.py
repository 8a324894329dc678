"""Dual peeling: stabilizer row elimination guided by the known qubit set.

Two moves run to exhaustion on full-width row masks. Known-column weight-2
elimination merges the two rows sharing a known column (the column cancels);
known-degree-1 row peeling uses a row whose known support is a single column
as a pivot to clear that column everywhere else. Any live row whose known
degree hits zero is a fully erased stabilizer: one erased qubit in its
support is fixed to 0 and immediately treated as known, which removes one
degree of freedom and lets the row itself act as a later pivot.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable

from .channel import ErasureInstance
from .codes import CssCode
from .decoders import (
    DecodeResult,
    hard_guess_peel,
    inactivation_decode,
    peel,
)
from .gf2 import BitVector, SparseBitMatrix, _low_bit, bits_from_indices, iter_bits

__all__ = ["DualState", "DualPeelResult", "dual_peel", "rule2_repass", "stab_assisted_decode"]

ENGINES = ("peel", "hard", "inactivation")


@dataclass
class DualPeelResult:
    fully_erased: list[BitVector]
    fixed_qubits: list[int]
    known_after: list[int]
    state: "DualState"


class DualState:
    """Mutable elimination state over copies of the stabilizer rows."""

    def __init__(self, stab: SparseBitMatrix, known: Iterable[int] | int):
        self.num_cols = stab.num_cols
        self.rows: list[int] = list(stab.row_masks())
        m = len(self.rows)
        self.live = [True] * m
        if isinstance(known, int):
            self.known_bits = known
        else:
            self.known_bits = bits_from_indices(known, stab.num_cols)
        kb = self.known_bits
        self.kdeg = [(row & kb).bit_count() for row in self.rows]
        col_rows: dict[int, set[int]] = {}
        for r, row in enumerate(self.rows):
            mask = row & kb
            while mask:
                low = mask & -mask
                mask ^= low
                c = low.bit_length() - 1
                s = col_rows.get(c)
                if s is None:
                    col_rows[c] = {r}
                else:
                    s.add(r)
        self.col_rows = col_rows
        self.fully_erased: list[BitVector] = []
        self.fixed_qubits: list[int] = []
        self._rule1: list[int] = [c for c, s in self.col_rows.items() if len(s) == 2]
        heapq.heapify(self._rule1)
        self._rule2: list[int] = [r for r in range(m) if self.rows[r] and self.kdeg[r] == 1]
        heapq.heapify(self._rule2)
        self._zero: list[int] = [r for r in range(m) if self.rows[r] and self.kdeg[r] == 0]
        heapq.heapify(self._zero)

    # -- bookkeeping -------------------------------------------------------

    def _push_row(self, r: int) -> None:
        if not self.live[r]:
            return
        d = self.kdeg[r]
        if d == 0:
            heapq.heappush(self._zero, r)
        elif d == 1:
            heapq.heappush(self._rule2, r)

    def _push_col(self, c: int) -> None:
        if len(self.col_rows.get(c, ())) == 2:
            heapq.heappush(self._rule1, c)

    def _make_known(self, q: int) -> None:
        """Move column q into the known set and rebuild its bookkeeping."""
        bit = 1 << q
        self.known_bits |= bit
        members = {r for r in range(len(self.rows)) if self.live[r] and self.rows[r] & bit}
        self.col_rows[q] = members
        for r in members:
            self.kdeg[r] += 1
            self._push_row(r)
        self._push_col(q)

    def _record_and_fix(self, r: int) -> None:
        row = self.rows[r]
        self.fully_erased.append(BitVector(self.num_cols, row))
        q = _low_bit(row)
        self.fixed_qubits.append(q)
        self._make_known(q)

    def _drain_zero(self) -> None:
        while self._zero:
            r = heapq.heappop(self._zero)
            if not self.live[r] or self.kdeg[r] != 0:
                continue
            if self.rows[r] == 0:
                self.live[r] = False
                continue
            self._record_and_fix(r)

    # -- elimination moves -------------------------------------------------

    def rule1_applicable(self, j: int) -> bool:
        return len(self.col_rows.get(j, ())) == 2

    def rule1_step(self, j: int) -> int:
        """Merge the two live rows incident to known column j; column j dies.

        The row with the larger known degree keeps the XOR (ties keep the
        lower id) so membership updates walk the sparser support; a zero
        merge removes both rows. Returns the surviving row id (-1 if none).
        """
        members = self.col_rows.get(j)
        if members is None or len(members) != 2:
            raise ValueError(f"column {j} does not have known weight 2")
        i1, i2 = sorted(members)
        keep, drop = (i2, i1) if self.kdeg[i2] > self.kdeg[i1] else (i1, i2)
        old_keep = self.rows[keep]
        merged = old_keep ^ self.rows[drop]
        kb = self.known_bits
        col_rows = self.col_rows
        rule1 = self._rule1
        mask = self.rows[drop] & kb
        while mask:
            low = mask & -mask
            mask ^= low
            c = low.bit_length() - 1
            s = col_rows[c]
            s.discard(drop)
            if old_keep & low:
                s.discard(keep)
            else:
                s.add(keep)
            if len(s) == 2:
                heapq.heappush(rule1, c)
        self.live[drop] = False
        self.rows[drop] = 0
        if merged == 0:
            self.live[keep] = False
            self.rows[keep] = 0
            return -1
        self.rows[keep] = merged
        self.kdeg[keep] = (merged & kb).bit_count()
        self._push_row(keep)
        return keep

    def rule2_step(self, i: int) -> bool:
        """Pivot on the unique known column of row i, clearing it elsewhere.

        Returns False (a no-op) when no other live row contains the column.
        """
        if not self.live[i] or self.kdeg[i] != 1:
            raise ValueError(f"row {i} does not have known degree 1")
        pivot = self.rows[i]
        j = _low_bit(pivot & self.known_bits)
        others = sorted(self.col_rows[j] - {i})
        if not others:
            return False
        for k in others:
            self.rows[k] ^= pivot
            self.kdeg[k] -= 1
            self.col_rows[j].discard(k)
            self._push_row(k)
        return True

    # -- drivers -----------------------------------------------------------

    def run(self) -> None:
        """Alternate: rule 1 to exhaustion, then a single rule-2 pivot."""
        self._drain_zero()
        while True:
            while self._rule1:
                j = heapq.heappop(self._rule1)
                if self.rule1_applicable(j):
                    self.rule1_step(j)
                    self._drain_zero()
            moved = False
            while self._rule2:
                i = heapq.heappop(self._rule2)
                if not self.live[i] or self.kdeg[i] != 1:
                    continue
                if self.rule2_step(i):
                    self._drain_zero()
                    moved = True
                    break
            if not moved:
                return

    def run_rule2_only(self) -> None:
        self._drain_zero()
        while self._rule2:
            i = heapq.heappop(self._rule2)
            if not self.live[i] or self.kdeg[i] != 1:
                continue
            if self.rule2_step(i):
                self._drain_zero()


def dual_peel(stab: SparseBitMatrix, known: Iterable[int] | int) -> DualPeelResult:
    """Exhaust both rules; fix one erased qubit per fully erased stabilizer."""
    state = DualState(stab, known)
    state.run()
    return DualPeelResult(
        fully_erased=state.fully_erased,
        fixed_qubits=state.fixed_qubits,
        known_after=list(iter_bits(state.known_bits)),
        state=state,
    )


def rule2_repass(state: DualState, newly_known: Iterable[int]) -> list[BitVector]:
    """Mark extra columns known, rerun rule 2 only, return any new records.

    After a full dual-peeling pass, growing the known set (as primal peeling
    does) never lowers a known degree, so this is expected to find nothing.
    """
    before = len(state.fully_erased)
    for q in sorted(set(newly_known)):
        if not (state.known_bits >> q) & 1:
            state._make_known(q)
    state.run_rule2_only()
    return state.fully_erased[before:]


def stab_assisted_decode(
    code: CssCode,
    instance: ErasureInstance,
    side: str,
    engine: str = "inactivation",
) -> DecodeResult:
    """Dual peeling preprocessing, then a classical engine on what remains.

    Each fixed qubit's error bit is pinned to 0 and leaves the erased set
    before the engine runs; the count lands in stats.num_fixed_bits.
    """
    if engine not in ENGINES:
        raise ValueError(f"unknown engine {engine!r}; expected one of {ENGINES}")
    stab = code.stab_matrix(side)
    h = code.check_matrix(side)
    s = instance.s_x if side == "x" else instance.s_z
    full = (1 << code.n) - 1
    result = dual_peel(stab, full ^ instance.erased_bits)
    fixed = set(result.fixed_qubits)
    reduced = [j for j in instance.erased if j not in fixed]
    if engine == "peel":
        out, _ = peel(h, reduced, s)
    elif engine == "hard":
        out = hard_guess_peel(h, reduced, s)
    else:
        out = inactivation_decode(h, reduced, s)
    out.stats.num_fixed_bits = len(fixed)
    return out
