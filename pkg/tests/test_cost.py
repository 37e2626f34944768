import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fbshare import (
    CostMode,
    actual_cost,
    direct_cost,
    expected_cost_discrete,
    expected_cost_grouped,
    expected_cost_ungrouped,
    monte_carlo_cost,
    partition_grouped,
    plan_grouping,
    serialized_cost,
    validate_bank,
)
from fbshare.errors import BadFactor, BadGroupCount, Overflow, PlanMismatch
from fbshare.rng import random_bank

MAC, PYR = CostMode.MAC_OUTER, CostMode.PYRAMID_OUTER


def occupancy(J, M):
    # P(pattern empty) = (1 - 2**-J)**M, summed over 2**J patterns
    return 2**J * (1 - (1 - 2.0**-J) ** M)


def test_ungrouped_examples():
    assert expected_cost_ungrouped(8, 120, MAC).total_macs == 2168
    assert expected_cost_ungrouped(1, 10, PYR).total_ops == 11
    rep = expected_cost_ungrouped(8, 120, PYR)
    assert (rep.inner_macs, rep.outer_adds, rep.total_ops) == (120, 2040, 2160)
    assert rep.outer_macs == 0
    with pytest.raises(Overflow):
        expected_cost_ungrouped(51, 10)


def test_grouped_examples():
    assert expected_cost_grouped(8, 120, 2, MAC).total_macs == 368
    assert expected_cost_grouped(8, 120, 2, PYR).total_ops == 360
    for K in range(1, 10):
        assert expected_cost_grouped(K, 50, K, MAC).total_macs == K * 50 + 2 * K
    rep = expected_cost_grouped(8, 120, 2.5, MAC)
    assert rep.total_macs == pytest.approx(2.5 * 120 + 2 ** 3.2 * 8)
    with pytest.raises(BadGroupCount):
        expected_cost_grouped(8, 120, 0.5)


def test_discrete_examples():
    assert expected_cost_discrete(8, 120, 3, MAC).total_macs == 416
    assert expected_cost_discrete(8, 120, 2, MAC).total_macs == 368
    assert expected_cost_discrete(8, 120, 8, MAC).total_macs == 976


def test_discrete_equals_continuous_when_divisible():
    for K in range(1, 17):
        for G in range(1, K + 1):
            if K % G:
                continue
            for mode in (MAC, PYR):
                assert expected_cost_discrete(K, 77, G, mode).total == expected_cost_grouped(K, 77, G, mode).total


def test_report_invariants():
    for mode in (MAC, PYR):
        rep = expected_cost_discrete(7, 33, 3, mode)
        assert rep.total_macs == rep.inner_macs + rep.outer_macs
        assert rep.total_ops == rep.inner_macs + rep.outer_macs + rep.outer_adds
        assert (rep.outer_macs == 0) if mode is PYR else (rep.outer_adds == 0)


def test_actual_pair_bank(pair_bank):
    plan = plan_grouping(2, 1)
    rep = actual_cost(partition_grouped(pair_bank, plan), plan, PYR)
    assert (rep.inner_macs, rep.outer_adds, rep.total_ops) == (4, 6, 10)


def test_actual_identical_filters():
    bank = validate_bank([[1, 1, 1], [1, 1, 1]])
    plan = plan_grouping(2, 1)
    assert actual_cost(partition_grouped(bank, plan), plan, PYR).outer_adds == 0


def test_actual_seeded_k8():
    bank = random_bank(8, 120, seed=50)
    plan = plan_grouping(8, 2)
    parts = partition_grouped(bank, plan)
    rep = actual_cost(parts, plan, MAC)
    assert 352 <= rep.total_macs <= 368
    assert (rep.total_macs == 368) == all(p.n_nonempty == 16 for p in parts)


def test_actual_plan_mismatch(pair_bank):
    parts = partition_grouped(pair_bank, plan_grouping(2, 2))
    with pytest.raises(PlanMismatch):
        actual_cost(parts, plan_grouping(2, 1))


@settings(max_examples=60, deadline=None)
@given(K=st.integers(1, 8), M=st.integers(1, 200), seed=st.integers(0, 2**32), data=st.data())
def test_actual_bounded_by_expected(K, M, seed, data):
    G = data.draw(st.integers(1, K))
    bank = random_bank(K, M, seed)
    plan = plan_grouping(K, G)
    parts = partition_grouped(bank, plan)
    rep = actual_cost(parts, plan, MAC)
    assert rep.inner_macs == G * M
    assert rep.total_macs <= expected_cost_discrete(K, M, G, MAC).total_macs
    assert rep.total_ops <= expected_cost_discrete(K, M, G, MAC).total_ops
    assert isinstance(rep.total_macs, int)


def test_serialization():
    rep = expected_cost_grouped(8, 120, 2, MAC)
    assert serialized_cost(rep, 1) == rep
    folded = serialized_cost(serialized_cost(rep, 2, "inner"), 4, "outer")
    assert (folded.inner_macs, folded.inner_rate, folded.outer_macs, folded.outer_rate) == (120, 2, 32, 4)
    assert folded.rate_multiplier == 4
    full = serialized_cost(direct_cost(8, 120), 8, "outer")
    assert (full.total_macs, full.outer_rate) == (120, 8)
    assert serialized_cost(rep, 3, "inner").inner_macs == math.ceil(240 / 3)
    for bad in (0, -2, 1.5):
        with pytest.raises(BadFactor):
            serialized_cost(rep, bad)


def test_monte_carlo_k1():
    st_ = monte_carlo_cost(1, 13, 1, PYR, trials=200, seed=5)
    assert st_.inner_min == st_.inner_max == 13
    assert st_.mean_nonempty <= 2


def test_monte_carlo_is_deterministic():
    a = monte_carlo_cost(3, 10, 1, MAC, trials=50, seed=7)
    b = monte_carlo_cost(3, 10, 1, MAC, trials=50, seed=7)
    assert a == b
    assert monte_carlo_cost(3, 10, 1, MAC, trials=50, seed=8) != a


@pytest.mark.parametrize("K, M, G", [(4, 32, 1), (6, 40, 2), (3, 12, 1)])
def test_monte_carlo_converges_to_occupancy(K, M, G):
    trials = 1500
    stats = monte_carlo_cost(K, M, G, PYR, trials=trials, seed=11)
    J = K // G
    assert abs(stats.mean_nonempty - occupancy(J, M)) <= 3 * stats.stderr_nonempty
    # pyramid total = G*M + (nonempty - 1) * K for equal groups
    predicted = G * M + (occupancy(J, M) - 1) * K
    stderr_total = stats.std_total / math.sqrt(trials)
    assert abs(stats.mean_total - predicted) <= 3 * stderr_total
