import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import brute_convolve
from fbshare import (
    EvaluatorState,
    OutputFrame,
    SignalFrame,
    compare_outputs,
    direct_convolve,
    plan_grouping,
    shared_evaluate,
    step,
    validate_bank,
)
from fbshare.core import build_partition
from fbshare.errors import AccumulatorOverflowRisk, PlanMismatch, SampleOutOfRange, ShapeMismatch
from fbshare.evaluate import delay_matrix, subset_sums
from fbshare.rng import random_bank


def test_direct_hand_example():
    bank = validate_bank([[1, -1, 1, -1]])
    assert direct_convolve(bank, [1, 2, 3, 4]).outputs.tolist() == [[1, 1, 2, 2]]


def test_direct_identity_and_zero():
    assert direct_convolve(validate_bank([[1]]), [5, -7]).outputs.tolist() == [[5, -7]]
    bank = random_bank(3, 9, seed=1)
    assert not direct_convolve(bank, np.zeros(20, dtype=int)).outputs.any()


def test_direct_matches_numpy_convolve(rng):
    bank = random_bank(4, 37, seed=8)
    x = rng.integers(-2**15 + 1, 2**15, size=150)
    y = direct_convolve(bank, x).outputs
    for k in range(4):
        ref = np.convolve(x, bank.coefficients[k].astype(np.int64))[: x.size]
        assert np.array_equal(y[k], ref)


def test_headroom_precondition():
    bank = validate_bank([[1]])
    with pytest.raises(AccumulatorOverflowRisk):
        direct_convolve(bank, SignalFrame(np.array([1]), sample_width=63))
    with pytest.raises(SampleOutOfRange):
        SignalFrame(np.array([2**15]))


def test_shared_pair_example(pair_bank):
    y = shared_evaluate(pair_bank, plan_grouping(2, 1), [1, 2, 3, 4])
    assert y == direct_convolve(pair_bank, [1, 2, 3, 4])
    assert y.outputs[:, 3].tolist() == [2, 4]


def test_shared_single_filter_stages():
    bank = validate_bank([[1, 1, -1]])
    x = np.array([3, -1, 4, 1, -5, 9])
    part = build_partition(bank, [1])
    t = subset_sums(part, delay_matrix(x, 3))
    xp = np.concatenate([[0, 0], x])
    t1 = xp[2:] + xp[1:-1]
    t0 = xp[:-2]
    assert np.array_equal(t[:, 1], t1) and np.array_equal(t[:, 0], t0)
    assert shared_evaluate(bank, plan_grouping(1, 1), x).outputs[0].tolist() == (t1 - t0).tolist()


def test_shared_plan_mismatch(pair_bank):
    with pytest.raises(PlanMismatch):
        shared_evaluate(pair_bank, plan_grouping(3, 1), [1])


def test_shared_matches_brute_force_on_seeded_banks():
    gen = np.random.default_rng(50)
    for trial in range(50):
        K = int(gen.integers(1, 9))
        M = int(gen.integers(1, 129))
        bank = random_bank(K, M, seed=100 + trial)
        x = gen.integers(-2**15 + 1, 2**15, size=int(gen.integers(1, 60)))
        G = int(gen.integers(1, K + 1))
        got = shared_evaluate(bank, plan_grouping(K, G), x)
        assert got.outputs.tolist() == brute_convolve(bank.tolist(), x.tolist())


@settings(max_examples=40, deadline=None)
@given(K=st.integers(1, 6), M=st.integers(1, 48), seed=st.integers(0, 10**6))
def test_grouping_does_not_change_values_and_is_linear(K, M, seed):
    bank = random_bank(K, M, seed)
    gen = np.random.default_rng(seed)
    x = gen.integers(-2**14, 2**14, size=3 * M)
    x2 = gen.integers(-2**14, 2**14, size=3 * M)
    ref = direct_convolve(bank, x)
    for G in range(1, K + 1):
        assert shared_evaluate(bank, plan_grouping(K, G), x) == ref
    plan = plan_grouping(K, 1)
    lhs = shared_evaluate(bank, plan, x + x2).outputs
    rhs = shared_evaluate(bank, plan, x).outputs + shared_evaluate(bank, plan, x2).outputs
    assert np.array_equal(lhs, rhs)


def test_stage_one_conserves_taps():
    bank = random_bank(5, 33, seed=4)
    x = np.arange(-40, 40)
    X = delay_matrix(x, 33)
    for G in range(1, 6):
        for g in plan_grouping(5, G).groups:
            t = subset_sums(build_partition(bank, g), X)
            assert np.array_equal(t.sum(axis=1), X.sum(axis=1))


def test_streaming_matches_batch(pair_bank):
    state = EvaluatorState(pair_bank, plan_grouping(2, 1))
    assert step(state, 0) == (0, 0)
    state = EvaluatorState(pair_bank, plan_grouping(2, 1))
    outs = [step(state, v) for v in [1, 2, 3, 4]]
    assert outs[-1] == (2, 4)
    batch = shared_evaluate(pair_bank, plan_grouping(2, 1), [1, 2, 3, 4]).outputs.T.tolist()
    assert [list(o) for o in outs] == batch


def test_streaming_states_are_independent():
    bank = random_bank(4, 20, seed=9)
    plan = plan_grouping(4, 2)
    a, b = EvaluatorState(bank, plan), EvaluatorState(bank, plan)
    x = np.random.default_rng(2).integers(-1000, 1000, size=60)
    out_a, out_b = [], []
    for v in x:
        out_a.append(a.step(v))
        out_b.append(b.step(v))
    assert out_a == out_b
    assert np.array_equal(np.array(out_a).T, direct_convolve(bank, x).outputs)


def test_compare_outputs():
    a = OutputFrame(np.zeros((3, 10), dtype=np.int64))
    assert compare_outputs(a, a).equal
    changed = a.outputs.copy()
    changed[1, 7] = 3
    rep = compare_outputs(a, OutputFrame(changed))
    assert (rep.equal, rep.first_mismatch, rep.max_abs_diff) == (False, (2, 7), 3)
    with pytest.raises(ShapeMismatch):
        compare_outputs(a, OutputFrame(np.zeros((2, 10), dtype=np.int64)))


def test_compare_direct_vs_shared_seeded():
    for seed in range(5):
        bank = random_bank(6, 50, seed)
        x = np.random.default_rng(seed).integers(-2**15 + 1, 2**15, size=200)
        rep = compare_outputs(direct_convolve(bank, x), shared_evaluate(bank, plan_grouping(6, 3), x))
        assert rep.equal
