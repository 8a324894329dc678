"""Erasure sampling and syndrome measurement.

Trial randomness is a pure function of (master_seed, trial_index): each trial
owns a counter-derived NumPy generator, so trials can be replayed or run in
any order without perturbing each other.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .codes import CssCode
from .gf2 import BitVector, SparseBitMatrix

__all__ = ["TrialSeed", "ErasureInstance", "sample", "syndrome"]


@dataclass(frozen=True)
class TrialSeed:
    master_seed: int
    trial_index: int

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(entropy=self.master_seed, spawn_key=(self.trial_index,))
        return np.random.Generator(np.random.PCG64(seq))


@dataclass
class ErasureInstance:
    """One channel realization: erased set, hidden Pauli error, syndromes."""

    erased: list[int]
    erased_bits: int
    x_error: BitVector
    z_error: BitVector
    s_x: BitVector
    s_z: BitVector


def syndrome(h: SparseBitMatrix, e: BitVector) -> BitVector:
    """h e over GF(2)."""
    return h.mul_vec(e)


def sample(code: CssCode, p: float, seed: TrialSeed) -> ErasureInstance:
    """Erase each qubit independently with probability p.

    Draw order is fixed: one uniform per qubit in ascending index order, then
    an X bit and a Z bit for each erased qubit, again ascending.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"erasure probability must lie in [0, 1], got {p}")
    rng = seed.generator()
    n = code.n
    u = rng.random(n)
    erased_idx = np.flatnonzero(u < p)
    num_erased = int(erased_idx.size)
    pauli_bits = rng.integers(0, 2, size=2 * num_erased, dtype=np.uint8)

    x_flags = np.zeros(n, dtype=np.uint8)
    z_flags = np.zeros(n, dtype=np.uint8)
    e_flags = np.zeros(n, dtype=np.uint8)
    e_flags[erased_idx] = 1
    x_flags[erased_idx] = pauli_bits[0::2]
    z_flags[erased_idx] = pauli_bits[1::2]

    x_error = BitVector(n, _flags_to_int(x_flags))
    z_error = BitVector(n, _flags_to_int(z_flags))
    return ErasureInstance(
        erased=[int(j) for j in erased_idx],
        erased_bits=_flags_to_int(e_flags),
        x_error=x_error,
        z_error=z_error,
        s_x=syndrome(code.hz, x_error),
        s_z=syndrome(code.hx, z_error),
    )


def _flags_to_int(flags: np.ndarray) -> int:
    return int.from_bytes(np.packbits(flags, bitorder="little").tobytes(), "little")
