import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cssdec.channel import TrialSeed, sample, syndrome
from cssdec.codes import surface_code
from cssdec.gf2 import BitVector


def test_sample_p_zero(surface3):
    inst = sample(surface3, 0.0, TrialSeed(1, 0))
    assert inst.erased == []
    assert inst.x_error.bits == 0 and inst.z_error.bits == 0
    assert inst.s_x.bits == 0 and inst.s_z.bits == 0


def test_sample_p_one(surface3):
    inst = sample(surface3, 1.0, TrialSeed(1, 0))
    assert len(inst.erased) == surface3.n


def test_sample_rejects_bad_p(surface3):
    with pytest.raises(ValueError):
        sample(surface3, 1.5, TrialSeed(0, 0))


def test_sample_binomial_mean(surface3):
    trials = 100_000
    p = 0.3
    total = 0
    for t in range(trials):
        total += len(sample(surface3, p, TrialSeed(99, t)).erased)
    mean = total / (trials * surface3.n)
    sigma = math.sqrt(p * (1 - p) / (surface3.n * trials))
    assert abs(mean - p) <= 3 * sigma


def test_sample_replay_is_bit_identical(surface3):
    a = sample(surface3, 0.4, TrialSeed(123, 45))
    b = sample(surface3, 0.4, TrialSeed(123, 45))
    assert a.erased == b.erased
    assert a.x_error == b.x_error and a.z_error == b.z_error
    assert a.s_x == b.s_x and a.s_z == b.s_z
    c = sample(surface3, 0.4, TrialSeed(123, 46))
    assert (a.erased, a.x_error.bits, a.z_error.bits) != (c.erased, c.x_error.bits, c.z_error.bits)


def test_error_support_inside_erasure(surface3):
    for t in range(10_000):
        inst = sample(surface3, 0.5, TrialSeed(7, t))
        eb = inst.erased_bits
        assert inst.x_error.bits & ~eb == 0
        assert inst.z_error.bits & ~eb == 0
        assert inst.s_x == surface3.hz.mul_vec(inst.x_error)
        assert inst.s_z == surface3.hx.mul_vec(inst.z_error)


def test_syndrome_zero_error(surface3):
    assert syndrome(surface3.hz, BitVector.zeros(surface3.n)).bits == 0


def test_syndrome_of_stabilizer_rows_vanishes(surface3):
    for sup in surface3.hx.rows:
        v = BitVector.from_support(surface3.n, sup)
        assert syndrome(surface3.hz, v).bits == 0


def test_syndrome_single_bit_is_column(surface3):
    h = surface3.hz
    cols = h.column_supports()
    for j in (0, 5, 12):
        s = syndrome(h, BitVector.from_support(surface3.n, [j]))
        assert s.support() == cols[j]


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=30, deadline=None)
def test_syndrome_degeneracy_invariance(seed):
    code = surface_code(3)
    rng = np.random.default_rng(seed)
    inst = sample(code, 0.5, TrialSeed(seed, 0))
    row = code.hx.rows[int(rng.integers(0, code.hx.num_rows))]
    shifted = inst.x_error ^ BitVector.from_support(code.n, row)
    assert syndrome(code.hz, shifted) == syndrome(code.hz, inst.x_error)
