"""Acceptance suite: one test per criterion, one printed pass/fail line each.

Run with `pytest tests/test_acceptance.py -v -s`. The Monte Carlo criteria
use every available core; the whole module takes several minutes.
"""

import math
import os
import subprocess
import sys
import time

import numpy as np
import pytest

from cssdec.channel import TrialSeed, sample
from cssdec.codes import example_hgp, hgp, load, surface_code
from cssdec.decoders import classify, inactivation_decode, peel
from cssdec.dual_peeling import dual_peel, rule2_repass, stab_assisted_decode
from cssdec.ml_oracle import fully_erased_dim, ml_decode_ge, predict
from cssdec.surface_fast import surface_ml_decode
from cssdec.sweep import FAILED_OUTCOMES, SweepConfig, run_sweep

from conftest import random_regular_rows

WORKERS = min(2, os.cpu_count() or 1)


def report(criterion: int, ok: bool, detail: str) -> None:
    print(f"ACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, detail


def random_hgp_3x6(seed: int):
    rng = np.random.default_rng(seed)
    h1 = random_regular_rows(rng, 3, 6, 3)
    h2 = random_regular_rows(rng, 3, 6, 3)
    return hgp(h1, h2, name=f"hgp_rand_{seed}")


def test_criterion_1_ml_equivalence():
    """Bit-identical ml/inactivation estimates; stab-assisted matches the
    oracle failure probability within 3 sigma. Budget: under two minutes."""
    settings = [
        (surface_code(3), (0.3, 0.4)),
        (surface_code(5), (0.3, 0.4)),
        (random_hgp_3x6(2026), (0.2, 0.3)),
    ]
    trials = 10_000
    start = time.perf_counter()
    mismatches = 0
    details = []
    for code, rates in settings:
        for p in rates:
            stab_fails = 0
            expected = 0.0
            variance = 0.0
            for t in range(trials):
                inst = sample(code, p, TrialSeed(1000 + int(p * 100), t))
                for side in ("x", "z"):
                    h = code.check_matrix(side)
                    s = inst.s_x if side == "x" else inst.s_z
                    truth = inst.x_error if side == "x" else inst.z_error
                    if ml_decode_ge(h, inst.erased, s).estimate != inactivation_decode(
                        h, inst.erased, s
                    ).estimate:
                        mismatches += 1
                    res = stab_assisted_decode(code, inst, side)
                    out = classify(res.estimate, truth, code, side, res.status)
                    stab_fails += out in FAILED_OUTCOMES
                    pf = float(predict(code, inst.erased, side).ml_failure_probability)
                    expected += pf
                    variance += pf * (1.0 - pf)
            sigma = math.sqrt(variance) if variance > 0 else 1.0
            dev = abs(stab_fails - expected) / sigma
            details.append(f"{code.name}@{p}: stab dev {dev:.2f} sigma")
            assert dev <= 3.0, details[-1]
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and elapsed < 120.0
    report(1, ok, f"0 estimate mismatches expected (got {mismatches}), {elapsed:.0f}s; " + "; ".join(details))


def test_criterion_2_surface_fast_equals_inactivation():
    """Union-find + peeling fails exactly as often as inactivation (3 sigma),
    d in {3, 5, 13}, p in {0.3, 0.4}, 1e5 trials per point."""
    trials = 100_000
    details = []
    for d in (3, 5, 13):
        code = surface_code(d)
        rows = run_sweep(
            SweepConfig(
                code=code,
                decoders=["inact", "surface-fast"],
                rates=[0.3, 0.4],
                trials=trials,
                master_seed=2026,
                workers=WORKERS,
            )
        )
        by = {(r.decoder, r.p): r for r in rows}
        for p in (0.3, 0.4):
            r1 = by[("inact", p)].failure_rate
            r2 = by[("surface-fast", p)].failure_rate
            sigma = math.sqrt((r1 * (1 - r1) + r2 * (1 - r2)) / trials)
            sigma = max(sigma, 1.0 / trials)
            dev = abs(r1 - r2) / sigma
            details.append(f"d{d}@{p}: {r1:.5g} vs {r2:.5g} ({dev:.2f} sigma)")
            assert dev <= 3.0, details[-1]
    report(2, True, "; ".join(details))


def test_criterion_3_fully_erased_count_three_routes():
    """Dual peeling, union-find contraction, and the rank oracle agree
    exactly on the fully erased dimension: d in {3,5,7}, 1e3 patterns per p."""
    checked = 0
    for d in (3, 5, 7):
        code = surface_code(d)
        full = (1 << code.n) - 1
        for pi, p in enumerate((0.2, 0.5, 0.8)):
            for t in range(1000):
                inst = sample(code, p, TrialSeed(3000 + pi, t))
                known = full ^ inst.erased_bits
                for side in ("x", "z"):
                    stab = code.stab_matrix(side)
                    dual_count = len(dual_peel(stab, known).fixed_qubits)
                    _, info = surface_ml_decode(code, inst, side)
                    oracle = fully_erased_dim(stab, known)
                    assert dual_count == oracle, (d, p, t, side, dual_count, oracle)
                    assert info.num_fully_erased == oracle, (d, p, t, side)
                    checked += 1
    report(3, True, f"{checked} side-patterns, exact equality on all three routes")


def test_criterion_4_rule2_repass_finds_nothing():
    """After one full dual pass plus any primal-peeling prefix, rule-2-only
    dual peeling uncovers zero new fully erased stabilizers (1e3 triples)."""
    rng = np.random.default_rng(404)
    new_found = 0
    for trial in range(1000):
        shape = rng.choice([0, 1])
        if shape == 0:
            h1 = random_regular_rows(rng, 3, 6, 3)
            h2 = random_regular_rows(rng, 3, 6, 3)
        else:
            h1 = random_regular_rows(rng, 4, 8, 3)
            h2 = random_regular_rows(rng, 4, 8, 3)
        code = hgp(h1, h2)
        p = float(rng.uniform(0.15, 0.85))
        inst = sample(code, p, TrialSeed(4000, trial))
        side = "x" if trial % 2 == 0 else "z"
        stab = code.stab_matrix(side)
        h = code.check_matrix(side)
        s = inst.s_x if side == "x" else inst.s_z
        res = dual_peel(stab, ((1 << code.n) - 1) ^ inst.erased_bits)
        fixed = set(res.fixed_qubits)
        reduced = [j for j in inst.erased if j not in fixed]
        prefix = int(rng.integers(0, len(reduced) + 1))
        _, residual = peel(h, reduced, s, max_steps=prefix)
        solved = sorted(set(reduced) - set(residual))
        new_found += len(rule2_repass(res.state, solved))
    report(4, new_found == 0, f"1000 (code, erasure, prefix) triples, {new_found} new stabilizers")


def test_criterion_5_inactivation_reduction_d11():
    """Stabilizer assistance removes at least 90% of the mean inactivation
    count on the distance-11 surface code at p = 0.38 (1e5 trials), and the
    absolute means stay within a factor 3 of the reference points."""
    code = surface_code(11)
    rows = run_sweep(
        SweepConfig(
            code=code,
            decoders=["inact", "stab-inact"],
            rates=[0.38],
            trials=100_000,
            master_seed=1138,
            workers=WORKERS,
        )
    )
    by = {r.decoder: r for r in rows}
    plain = by["inact"].mean_inactivations
    assisted = by["stab-inact"].mean_inactivations
    reduction = 1.0 - assisted / plain
    ok = assisted < plain and reduction >= 0.90
    ok = ok and (4.38 / 3 <= plain <= 4.38 * 3) and (0.038 / 3 <= assisted <= 0.038 * 3)
    report(
        5,
        ok,
        f"mean inactivations {plain:.4f} -> {assisted:.4f} ({100 * reduction:.1f}% reduction; "
        f"reference points 4.38 / 0.038)",
    )


def test_criterion_5b_fig2_point_d13():
    """Companion check: distance-13 mean inactivations at p = 0.38 within a
    factor 3 of the reference 5.93 (lattice-convention sensitive)."""
    code = surface_code(13)
    rows = run_sweep(
        SweepConfig(
            code=code, decoders=["inact"], rates=[0.38], trials=20_000,
            master_seed=1313, workers=WORKERS,
        )
    )
    mean = rows[0].mean_inactivations
    ok = 5.934 / 3 <= mean <= 5.934 * 3
    report(5, ok, f"(companion) d13 p0.38 mean inactivations {mean:.3f} vs reference 5.935")


def test_criterion_6_fig1_point_d13():
    """Distance-13 inactivation failure rate at p = 0.34 within a factor 3 of
    the reference 2.13e-3 (our trials fail when either side fails)."""
    code = surface_code(13)
    rows = run_sweep(
        SweepConfig(
            code=code, decoders=["inact"], rates=[0.34], trials=300_000,
            master_seed=634, workers=WORKERS,
        )
    )
    rate = rows[0].failure_rate
    target = 2.13e-3
    ok = target / 3 <= rate <= target * 3
    report(6, ok, f"failure rate {rate:.6f} over 3e5 trials vs reference {target}")


B1_BUNDLE = os.environ.get("CSSDEC_B1_BUNDLE", os.path.join(os.path.dirname(__file__), "..", "codes", "b1"))


def test_criterion_7_symbolic_guess_reduction():
    """At the highest swept rate the stabilizer-assisted decoder needs at
    least 20% fewer symbolic guesses on the shipped HGP instance."""
    code = example_hgp()
    rows = run_sweep(
        SweepConfig(
            code=code,
            decoders=["inact", "stab-inact"],
            rates=[0.3, 0.4, 0.48],
            trials=20_000,
            master_seed=748,
            workers=WORKERS,
        )
    )
    by = {(r.decoder, r.p): r for r in rows}
    plain = by[("inact", 0.48)].mean_inactivations
    assisted = by[("stab-inact", 0.48)].mean_inactivations
    reduction = 1.0 - assisted / plain
    report(
        7,
        reduction >= 0.20,
        f"{code.name} at p=0.48: {plain:.3f} -> {assisted:.3f} ({100 * reduction:.1f}% reduction)",
    )


@pytest.mark.skipif(not os.path.isdir(B1_BUNDLE), reason="B1 bundle not supplied")
def test_criterion_7_b1_bundle():
    """Gated: with externally supplied B1 matrices, reproduce the >20%
    reduction in symbolic guesses at p = 0.48."""
    code = load(B1_BUNDLE)
    rows = run_sweep(
        SweepConfig(
            code=code,
            decoders=["inact", "stab-inact"],
            rates=[0.48],
            trials=2_000,
            master_seed=4801,
            workers=WORKERS,
        )
    )
    by = {r.decoder: r for r in rows}
    plain = by["inact"].mean_inactivations
    assisted = by["stab-inact"].mean_inactivations
    reduction = 1.0 - assisted / plain
    report(7, reduction >= 0.20, f"B1 at p=0.48: {plain:.2f} -> {assisted:.2f} ({100 * reduction:.1f}%)")


def test_criterion_8_near_linear_scaling():
    """Mean union-find decode time grows close to linearly: the d=64 to d=32
    ratio stays at or below 5.0 while n grows about fourfold."""
    times = {}
    for d in (32, 64):
        code = surface_code(d)
        instances = [sample(code, 0.4, TrialSeed(800 + d, t)) for t in range(1000)]
        surface_ml_decode(code, instances[0], "x")  # warm caches
        surface_ml_decode(code, instances[0], "z")
        start = time.perf_counter()
        for inst in instances:
            surface_ml_decode(code, inst, "x")
            surface_ml_decode(code, inst, "z")
        times[d] = (time.perf_counter() - start) / len(instances)
    ratio = times[64] / times[32]
    report(
        8,
        ratio <= 5.0,
        f"mean decode time {times[32] * 1e3:.2f} ms (d=32) vs {times[64] * 1e3:.2f} ms (d=64), ratio {ratio:.2f}",
    )


def test_criterion_9_simulate_determinism(tmp_path):
    """Identical simulate flags give identical CSV apart from wall_seconds."""
    args = [
        sys.executable, "-m", "cssdec", "simulate", "--code", "surface:5",
        "--decoders", "inact,stab-inact,surface-fast", "--p", "0.2,0.35",
        "--trials", "2000", "--seed", "99", "--workers", str(WORKERS),
    ]
    out_a = tmp_path / "a.csv"
    out_b = tmp_path / "b.csv"
    for out in (out_a, out_b):
        proc = subprocess.run([*args, "--out", str(out)], capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr

    def strip_wall(path):
        kept = []
        for line in path.read_text().splitlines():
            if line.startswith("#") or line.startswith("code,"):
                kept.append(line)
            else:
                kept.append(line.rsplit(",", 1)[0])
        return kept

    same = strip_wall(out_a) == strip_wall(out_b)
    report(9, same, "two runs, CSV identical modulo wall_seconds")
