import pytest

from cssdec.channel import TrialSeed, sample
from cssdec.codes import example_hgp
from cssdec.decoders import (
    DecodeStatus,
    Outcome,
    classify,
    hard_guess_peel,
    inactivation_decode,
    peel,
)
from cssdec.gf2 import BitVector, SparseBitMatrix

# four edges bounding the interior face (a=0, j=1) of the d=3 surface code
FACE_CYCLE = [1, 4, 9, 10]


def tanner_four_cycle() -> SparseBitMatrix:
    # two checks on the same two variables: a length-4 cycle in the Tanner graph
    return SparseBitMatrix(2, 2, [[0, 1], [0, 1]])


def test_peel_empty_erasure(surface3):
    result, residual = peel(surface3.hz, [], BitVector.zeros(surface3.hz.num_rows))
    assert result.status is DecodeStatus.SOLVED
    assert residual == []
    assert result.estimate.bits == 0


def test_peel_tree_always_solves(surface3):
    # a path of horizontal edges plus a vertical spur: acyclic erased subgraph
    erased = [0, 1, 9]
    truth = BitVector.from_support(surface3.n, [1, 9])
    s = surface3.hz.mul_vec(truth)
    result, residual = peel(surface3.hz, erased, s)
    assert result.status is DecodeStatus.SOLVED
    assert residual == []
    assert result.estimate == truth


def test_peel_face_cycle_is_stopping_set(surface3):
    result, residual = peel(surface3.hz, FACE_CYCLE, BitVector.zeros(surface3.hz.num_rows))
    assert result.status is DecodeStatus.NON_CONVERGENT
    assert residual == FACE_CYCLE


def test_peel_max_steps_prefix(surface3):
    erased = [0, 1, 9]
    truth = BitVector.from_support(surface3.n, [0, 1])
    s = surface3.hz.mul_vec(truth)
    result, residual = peel(surface3.hz, erased, s, max_steps=1)
    assert result.stats.peel_steps == 1
    assert len(residual) == 2


def test_hard_guess_matches_peel_when_peelable(surface3):
    erased = [0, 1, 9]
    truth = BitVector.from_support(surface3.n, [0])
    s = surface3.hz.mul_vec(truth)
    plain, _ = peel(surface3.hz, erased, s)
    hard = hard_guess_peel(surface3.hz, erased, s)
    assert hard.status is DecodeStatus.SOLVED
    assert hard.estimate == plain.estimate
    assert hard.stats.num_hard_guesses == 0


def test_hard_guess_face_cycle_degenerate_success(surface3):
    truth = BitVector.from_support(surface3.n, FACE_CYCLE)
    s = surface3.hz.mul_vec(truth)
    assert s.bits == 0
    result = hard_guess_peel(surface3.hz, FACE_CYCLE, s)
    assert result.status is DecodeStatus.SOLVED
    assert result.estimate.bits == 0
    assert result.stats.num_hard_guesses == 1
    assert classify(result.estimate, truth, surface3, "x", result.status) is Outcome.DEGENERATE_SUCCESS


def test_hard_guess_contradiction_is_non_convergent():
    h = tanner_four_cycle()
    s = BitVector.from_support(2, [0])  # odd parity forced on the guessed pair
    result = hard_guess_peel(h, [0, 1], s)
    assert result.status is DecodeStatus.NON_CONVERGENT
    assert result.stats.num_hard_guesses >= 1


def test_inactivation_matches_peel_when_peelable(surface3):
    erased = [0, 1, 9]
    truth = BitVector.from_support(surface3.n, [9])
    s = surface3.hz.mul_vec(truth)
    plain, _ = peel(surface3.hz, erased, s)
    inact = inactivation_decode(surface3.hz, erased, s)
    assert inact.status is DecodeStatus.SOLVED
    assert inact.stats.num_inactivations == 0
    assert inact.estimate == plain.estimate == truth


def test_inactivation_face_cycle_one_guess(surface3):
    result = inactivation_decode(surface3.hz, FACE_CYCLE, BitVector.zeros(surface3.hz.num_rows))
    assert result.status is DecodeStatus.SOLVED
    assert result.stats.num_inactivations == 1
    assert result.estimate.bits == 0


def test_inactivation_inconsistent_core_non_convergent():
    h = tanner_four_cycle()
    result = inactivation_decode(h, [0, 1], BitVector.from_support(2, [0]))
    assert result.status is DecodeStatus.NON_CONVERGENT


@pytest.mark.parametrize("p", [0.2, 0.45])
def test_inactivation_invariants_on_sampled_instances(surface3, p):
    hz = surface3.hz
    for t in range(600):
        inst = sample(surface3, p, TrialSeed(31, t))
        result = inactivation_decode(hz, inst.erased, inst.s_x)
        assert result.status is DecodeStatus.SOLVED  # never non-convergent on real syndromes
        assert hz.mul_vec(result.estimate) == inst.s_x
        assert result.estimate.bits & ~inst.erased_bits == 0
        assert result.stats.num_inactivations <= len(inst.erased)
        plain, residual = peel(hz, inst.erased, inst.s_x)
        assert (result.stats.num_inactivations == 0) == (residual == [])
        if residual == []:
            assert result.estimate == plain.estimate


def test_inactivation_invariants_on_hgp():
    code = example_hgp()
    for t in range(300):
        inst = sample(code, 0.35, TrialSeed(77, t))
        for side, s, truth in (("x", inst.s_x, inst.x_error), ("z", inst.s_z, inst.z_error)):
            h = code.check_matrix(side)
            result = inactivation_decode(h, inst.erased, s)
            assert result.status is DecodeStatus.SOLVED
            assert h.mul_vec(result.estimate) == s
            outcome = classify(result.estimate, truth, code, side, result.status)
            assert outcome is not Outcome.NON_CONVERGENT


def test_classify_success(surface3):
    v = BitVector.from_support(surface3.n, [2, 5])
    assert classify(v, v, surface3, "x", DecodeStatus.SOLVED) is Outcome.SUCCESS


def test_classify_degenerate(surface3):
    truth = BitVector.from_support(surface3.n, [2])
    est = truth ^ BitVector.from_support(surface3.n, surface3.hx.rows[0])
    assert classify(est, truth, surface3, "x", DecodeStatus.SOLVED) is Outcome.DEGENERATE_SUCCESS


def test_classify_logical_failure(surface3):
    from cssdec.codes import logical_basis

    logical = logical_basis(surface3).x_logicals[0]
    truth = BitVector.zeros(surface3.n)
    assert classify(logical, truth, surface3, "x", DecodeStatus.SOLVED) is Outcome.LOGICAL_FAILURE


def test_classify_non_convergent_status_wins(surface3):
    v = BitVector.zeros(surface3.n)
    assert classify(v, v, surface3, "x", DecodeStatus.NON_CONVERGENT) is Outcome.NON_CONVERGENT


def test_classify_syndrome_mismatch_non_convergent(surface3):
    truth = BitVector.zeros(surface3.n)
    est = BitVector.from_support(surface3.n, [0])
    assert classify(est, truth, surface3, "x", DecodeStatus.SOLVED) is Outcome.NON_CONVERGENT


def test_classify_stabilizer_invariance(surface3):
    truth = BitVector.from_support(surface3.n, [1, 7])
    for row in surface3.hx.rows:
        est = truth ^ BitVector.from_support(surface3.n, row)
        out = classify(est, truth, surface3, "x", DecodeStatus.SOLVED)
        assert out in (Outcome.SUCCESS, Outcome.DEGENERATE_SUCCESS)
