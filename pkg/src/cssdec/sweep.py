"""Monte Carlo sweeps over erasure rates and the oracle cross-check harness.

Each trial decodes both error sides with the same engine; a trial fails when
either side ends in a logical failure or does not converge. Per-trial seeds
are counter-derived (rate index r, trial t -> trial_index r*trials + t), so
results are independent of worker count and of which rates are swept.
"""

from __future__ import annotations

import math
import os
import time
from dataclasses import dataclass
from fractions import Fraction
from multiprocessing import Pool

from .channel import ErasureInstance, TrialSeed, sample
from .codes import CssCode
from .decoders import (
    DecodeResult,
    DecodeStatus,
    Outcome,
    classify,
    hard_guess_peel,
    inactivation_decode,
    peel,
)
from .dual_peeling import dual_peel, rule2_repass, stab_assisted_decode
from .gf2 import bits_from_indices
from .ml_oracle import fully_erased_dim, ml_decode_ge, predict
from .surface_fast import surface_ml_decode

__all__ = [
    "DECODER_NAMES",
    "SweepConfig",
    "SweepRow",
    "decode_side",
    "run_sweep",
    "write_csv",
    "CSV_COLUMNS",
    "verify_code",
    "VerifyReport",
]

DECODER_NAMES = ("peel", "dual-peel", "hard", "inact", "stab-inact", "surface-fast", "ml-oracle")

FAILED_OUTCOMES = (Outcome.LOGICAL_FAILURE, Outcome.NON_CONVERGENT)

CSV_COLUMNS = (
    "code,decoder,p,trials,failures,failure_rate,mean_inactivations,"
    "mean_core_dim,mean_fixed_bits,mean_hard_guesses,seed,wall_seconds"
)


@dataclass
class SweepConfig:
    code: CssCode
    decoders: list[str]
    rates: list[float]
    trials: int
    master_seed: int
    workers: int = 1

    def check(self) -> None:
        for name in self.decoders:
            if name not in DECODER_NAMES:
                raise ValueError(f"unknown decoder {name!r}")
            if name == "surface-fast" and self.code.lattice is None:
                raise ValueError("surface-fast requires a code with lattice metadata")
        if any(not 0.0 <= p <= 1.0 for p in self.rates):
            raise ValueError("erasure rates must lie in [0, 1]")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass
class SweepRow:
    code_name: str
    decoder: str
    p: float
    trials: int
    failures: int
    failure_rate: float
    mean_inactivations: float
    mean_core_dim: float
    mean_fixed_bits: float
    mean_hard_guesses: float
    master_seed: int
    wall_seconds: float


def decode_side(code: CssCode, instance: ErasureInstance, side: str, decoder: str) -> DecodeResult:
    """Run one named decoder on one side of one erasure instance."""
    h = code.check_matrix(side)
    s = instance.s_x if side == "x" else instance.s_z
    if decoder == "peel":
        return peel(h, instance.erased, s)[0]
    if decoder == "hard":
        return hard_guess_peel(h, instance.erased, s)
    if decoder == "inact":
        return inactivation_decode(h, instance.erased, s)
    if decoder == "dual-peel":
        return stab_assisted_decode(code, instance, side, engine="peel")
    if decoder == "stab-inact":
        return stab_assisted_decode(code, instance, side, engine="inactivation")
    if decoder == "surface-fast":
        return surface_ml_decode(code, instance, side)[0]
    if decoder == "ml-oracle":
        return ml_decode_ge(h, instance.erased, s)
    raise ValueError(f"unknown decoder {decoder!r}")


def _run_chunk(
    code: CssCode,
    decoder: str,
    p: float,
    master_seed: int,
    trial_base: int,
    t0: int,
    t1: int,
) -> tuple[int, int, int, int, int]:
    failures = 0
    sum_inact = sum_core = sum_fixed = sum_hard = 0
    for t in range(t0, t1):
        instance = sample(code, p, TrialSeed(master_seed, trial_base + t))
        failed = False
        for side in ("x", "z"):
            result = decode_side(code, instance, side, decoder)
            truth = instance.x_error if side == "x" else instance.z_error
            outcome = classify(result.estimate, truth, code, side, result.status)
            if outcome in FAILED_OUTCOMES:
                failed = True
            st = result.stats
            sum_inact += st.num_inactivations
            sum_core += st.core_dim
            sum_fixed += st.num_fixed_bits
            sum_hard += st.num_hard_guesses
        if failed:
            failures += 1
    return failures, sum_inact, sum_core, sum_fixed, sum_hard


_WORKER_CTX: tuple | None = None


def _init_worker(code, decoder, p, master_seed, trial_base):
    global _WORKER_CTX
    _WORKER_CTX = (code, decoder, p, master_seed, trial_base)


def _worker_chunk(bounds: tuple[int, int]):
    assert _WORKER_CTX is not None
    return _run_chunk(*_WORKER_CTX, bounds[0], bounds[1])


def _point(
    code: CssCode, decoder: str, p: float, trials: int, master_seed: int, trial_base: int, workers: int
) -> tuple[int, int, int, int, int]:
    if workers <= 1 or trials < 4 * workers:
        return _run_chunk(code, decoder, p, master_seed, trial_base, 0, trials)
    nchunks = workers * 4
    step = (trials + nchunks - 1) // nchunks
    bounds = [(i, min(i + step, trials)) for i in range(0, trials, step)]
    with Pool(
        processes=workers,
        initializer=_init_worker,
        initargs=(code, decoder, p, master_seed, trial_base),
    ) as pool:
        parts = pool.map(_worker_chunk, bounds)
    totals = [0, 0, 0, 0, 0]
    for part in parts:
        for i, v in enumerate(part):
            totals[i] += v
    return tuple(totals)


def run_sweep(config: SweepConfig) -> list[SweepRow]:
    """One row per (decoder, rate); aggregation is exact integer sums."""
    config.check()
    rows: list[SweepRow] = []
    trials = config.trials
    for decoder in config.decoders:
        for r, p in enumerate(config.rates):
            start = time.perf_counter()
            failures, s_inact, s_core, s_fixed, s_hard = _point(
                config.code, decoder, p, trials, config.master_seed, r * trials, config.workers
            )
            wall = time.perf_counter() - start
            sides = 2 * trials
            rows.append(
                SweepRow(
                    code_name=config.code.name,
                    decoder=decoder,
                    p=p,
                    trials=trials,
                    failures=failures,
                    failure_rate=failures / trials,
                    mean_inactivations=s_inact / sides,
                    mean_core_dim=s_core / sides,
                    mean_fixed_bits=s_fixed / sides,
                    mean_hard_guesses=s_hard / sides,
                    master_seed=config.master_seed,
                    wall_seconds=wall,
                )
            )
    return rows


def write_csv(rows: list[SweepRow], path: str) -> None:
    """Append rows, writing the commented header only for a fresh file."""
    fresh = not (os.path.exists(path) and os.path.getsize(path) > 0)
    with open(path, "a") as fh:
        if fresh:
            fh.write("# cssdec sweep; a trial fails when either side is logical_failure or non_convergent\n")
            fh.write("# mean_* columns average over decoded sides (two per trial)\n")
            fh.write(CSV_COLUMNS + "\n")
        for row in rows:
            fh.write(
                f"{row.code_name},{row.decoder},{row.p!r},{row.trials},{row.failures},"
                f"{row.failure_rate!r},{row.mean_inactivations!r},{row.mean_core_dim!r},"
                f"{row.mean_fixed_bits!r},{row.mean_hard_guesses!r},{row.master_seed},"
                f"{row.wall_seconds:.3f}\n"
            )


@dataclass
class VerifyReport:
    """Per-decoder ML agreement plus structural property counters."""

    code_name: str
    p: float
    trials: int
    master_seed: int
    sides: int
    oracle_mean_failure: float
    oracle_sigma: float
    decoder_rates: dict[str, float]
    identity_mismatches: int
    consistency_violations: int
    count_disagreements: int
    repass_discoveries: int
    rate_deviations: dict[str, float]

    @property
    def hard_violations(self) -> int:
        out = self.identity_mismatches + self.consistency_violations
        out += self.count_disagreements + self.repass_discoveries
        out += sum(1 for dev in self.rate_deviations.values() if dev > 3.0)
        return out

    def lines(self) -> list[str]:
        out = [
            f"verify {self.code_name} p={self.p} trials={self.trials} seed={self.master_seed}",
            f"  oracle mean failure rate: {self.oracle_mean_failure:.6g} (sigma {self.oracle_sigma:.3g})",
        ]
        for name, rate in self.decoder_rates.items():
            out.append(
                f"  {name}: failure rate {rate:.6g}, deviation {self.rate_deviations[name]:.2f} sigma"
            )
        out.append(f"  ml/inactivation estimate mismatches: {self.identity_mismatches}")
        out.append(f"  syndrome consistency violations: {self.consistency_violations}")
        out.append(f"  fully-erased count disagreements: {self.count_disagreements}")
        out.append(f"  rule-2 repass new stabilizers: {self.repass_discoveries}")
        out.append(f"  hard violations: {self.hard_violations}")
        return out


def verify_code(code: CssCode, p: float, trials: int, master_seed: int) -> VerifyReport:
    """Cross-check the ML-matching decoders against the exact oracle.

    Counts per-side failures, checks ml/inactivation estimate identity on
    every side, recomputes the fully erased dimension three ways on lattice
    codes, and reruns rule-2 dual peeling after a full primal peel.
    """
    decoders = ["inact", "stab-inact"]
    if code.lattice is not None:
        decoders.append("surface-fast")
    fail_counts = {name: 0 for name in decoders}
    oracle_sum = Fraction(0)
    oracle_var = 0.0
    identity_mismatches = 0
    consistency = 0
    disagreements = 0
    discoveries = 0
    full = (1 << code.n) - 1
    for t in range(trials):
        instance = sample(code, p, TrialSeed(master_seed, t))
        erased_bits = bits_from_indices(instance.erased, code.n)
        for side in ("x", "z"):
            h = code.check_matrix(side)
            s = instance.s_x if side == "x" else instance.s_z
            truth = instance.x_error if side == "x" else instance.z_error
            pred = predict(code, instance.erased, side)
            pf = pred.ml_failure_probability
            oracle_sum += pf
            oracle_var += float(pf) * (1.0 - float(pf))

            ml = ml_decode_ge(h, instance.erased, s)
            results = {name: decode_side(code, instance, side, name) for name in decoders}
            if results["inact"].estimate != ml.estimate:
                identity_mismatches += 1
            for name, res in results.items():
                if res.status is DecodeStatus.SOLVED:
                    if code.check_matrix(side).mul_vec(res.estimate) != s:
                        consistency += 1
                outcome = classify(res.estimate, truth, code, side, res.status)
                if outcome in FAILED_OUTCOMES:
                    fail_counts[name] += 1

            stab = code.stab_matrix(side)
            dual = dual_peel(stab, full ^ erased_bits)
            if code.lattice is not None:
                _, info = surface_ml_decode(code, instance, side)
                oracle_dim = fully_erased_dim(stab, full ^ erased_bits)
                if not (len(dual.fixed_qubits) == info.num_fully_erased == oracle_dim):
                    disagreements += 1
            fixed = set(dual.fixed_qubits)
            reduced = [j for j in instance.erased if j not in fixed]
            _, residual = peel(h, reduced, s)
            solved = [j for j in reduced if j not in set(residual)]
            discoveries += len(rule2_repass(dual.state, solved))

    sides = 2 * trials
    oracle_mean = float(oracle_sum) / sides
    sigma = math.sqrt(oracle_var) / sides
    rates = {name: count / sides for name, count in fail_counts.items()}
    deviations = {
        name: (abs(rate - oracle_mean) / sigma if sigma > 0 else (0.0 if rate == oracle_mean else math.inf))
        for name, rate in rates.items()
    }
    return VerifyReport(
        code_name=code.name,
        p=p,
        trials=trials,
        master_seed=master_seed,
        sides=sides,
        oracle_mean_failure=oracle_mean,
        oracle_sigma=sigma,
        decoder_rates=rates,
        identity_mismatches=identity_mismatches,
        consistency_violations=consistency,
        count_disagreements=disagreements,
        repass_discoveries=discoveries,
        rate_deviations=deviations,
    )
