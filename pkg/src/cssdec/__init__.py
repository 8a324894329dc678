"""Erasure decoding toolkit for CSS quantum codes.

Peeling, hard-guess peeling, and inactivation decoding on the erased
syndrome system; dual peeling over the stabilizer matrix to fix fully erased
stabilizer degrees of freedom; a union-find fast path for planar surface
codes; exact ML oracles; and a seeded Monte Carlo sweep engine with a CLI.
"""

from .channel import ErasureInstance, TrialSeed, sample, syndrome
from .codes import (
    CssCode,
    LogicalBasis,
    SurfaceLattice,
    ValidationError,
    example_hgp,
    hgp,
    load,
    logical_basis,
    save,
    surface_code,
    validate,
)
from .decoders import (
    DecodeResult,
    DecodeStats,
    DecodeStatus,
    Outcome,
    classify,
    hard_guess_peel,
    inactivation_decode,
    peel,
)
from .dual_peeling import DualState, dual_peel, rule2_repass, stab_assisted_decode
from .gf2 import (
    BitVector,
    ReducedSystem,
    SparseBitMatrix,
    in_row_space,
    nullspace_basis,
    rank,
    row_reduce,
    solve_affine,
)
from .ml_oracle import OraclePrediction, erased_logical_dim, fully_erased_dim, ml_decode_ge, predict
from .surface_fast import FacePartition, contract_known_edges, surface_ml_decode
from .sweep import (
    DECODER_NAMES,
    SweepConfig,
    SweepRow,
    decode_side,
    run_sweep,
    verify_code,
    write_csv,
)

__version__ = "0.1.0"
