"""Operation-count models for shared filter banks.

Counts are split by stage:

``inner_macs``
    first-stage accumulations, one per tap per group;
``outer_macs``
    second stage done by multiply-accumulate, one per (subset, filter) pair;
``outer_adds``
    second stage done by a two-input adder pyramid, ``subsets - 1`` per filter.

Expected counts follow the iid equiprobable-coefficient model, in which a
group of ``s`` filters occupies all ``2**s`` sign patterns.  Actual counts
are taken from a concrete partition and only charge non-empty subsets.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from .core import GroupingPlan, SubsetPartition, build_partition, plan_grouping
from .errors import BadFactor, BadGroupCount, Overflow, PlanMismatch
from .rng import random_bank

MAX_UNGROUPED_K = 50


class CostMode(enum.Enum):
    MAC_OUTER = "mac"
    PYRAMID_OUTER = "pyramid"

    @classmethod
    def parse(cls, value) -> "CostMode":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown cost mode {value!r}; expected 'mac' or 'pyramid'") from None


MAC = CostMode.MAC_OUTER
PYRAMID = CostMode.PYRAMID_OUTER


@dataclass(frozen=True)
class CostReport:
    inner_macs: float
    outer_macs: float
    outer_adds: float
    mode: CostMode
    kind: str  # "expected", "actual" or "direct"
    K: int
    M: int
    G: float
    inner_rate: int = 1
    outer_rate: int = 1

    @property
    def total_macs(self):
        return self.inner_macs + self.outer_macs

    @property
    def total_ops(self):
        return self.inner_macs + self.outer_macs + self.outer_adds

    @property
    def total(self):
        """The figure being minimised: MACs in MAC mode, all ops otherwise."""
        return self.total_macs if self.mode is MAC else self.total_ops

    @property
    def rate_multiplier(self) -> int:
        return max(self.inner_rate, self.outer_rate)


def _outer_per_group(size: int, mode: CostMode):
    if mode is MAC:
        return 2**size * size
    return (2**size - 1) * size


def _report(inner, outer, mode, kind, K, M, G) -> CostReport:
    if mode is MAC:
        return CostReport(inner, outer, 0, mode, kind, K, M, G)
    return CostReport(inner, 0, outer, mode, kind, K, M, G)


def _check_km(K, M):
    if K < 1 or M < 1:
        raise BadGroupCount(f"K and M must be positive, got K={K}, M={M}")


def expected_cost_ungrouped(K: int, M: int, mode=MAC) -> CostReport:
    mode = CostMode.parse(mode)
    _check_km(K, M)
    if K > MAX_UNGROUPED_K:
        raise Overflow(f"2**K * K is out of counter range for K={K}")
    return _report(M, _outer_per_group(K, mode), mode, "expected", K, M, 1)


def expected_cost_grouped(K: int, M: int, G: float, mode=MAC) -> CostReport:
    """Continuous relaxation: every group holds ``K/G`` filters, G real."""
    mode = CostMode.parse(mode)
    _check_km(K, M)
    if not 1 <= G <= K:
        raise BadGroupCount(f"G={G} outside [1, {K}]")
    per = K / G
    if mode is MAC:
        outer = 2**per * K
    else:
        outer = K * (2**per - 1)
    if float(G).is_integer() and float(per).is_integer():
        G, outer = int(G), int(outer)
    return _report(G * M, outer, mode, "expected", K, M, G)


def expected_cost_discrete(K: int, M: int, G: int, mode=MAC) -> CostReport:
    """Integer grouping: ``K mod G`` groups of one extra filter."""
    mode = CostMode.parse(mode)
    _check_km(K, M)
    plan = plan_grouping(K, G)
    outer = plan.n_large * _outer_per_group(plan.size_large, mode) + plan.n_small * _outer_per_group(
        plan.size_small, mode
    )
    return _report(plan.G * M, outer, mode, "expected", K, M, plan.G)


def direct_cost(K: int, M: int) -> CostReport:
    """Conventional bank: one MAC per coefficient, booked as outer MACs."""
    _check_km(K, M)
    return CostReport(0, K * M, 0, MAC, "direct", K, M, K)


def actual_cost(partitions: list[SubsetPartition], plan: GroupingPlan, mode=MAC) -> CostReport:
    mode = CostMode.parse(mode)
    if len(partitions) != plan.G or any(
        p.filters != g for p, g in zip(partitions, plan.groups)
    ):
        raise PlanMismatch("partitions do not follow the grouping plan")
    inner = 0
    outer = 0
    for part in partitions:
        inner += part.tap_count
        for j in range(1, part.K + 1):
            n = part.participating(j)
            outer += n if mode is MAC else max(n - 1, 0)
    M = partitions[0].M if partitions else 0
    return _report(inner, outer, mode, "actual", plan.K, M, plan.G)


def serialized_cost(report: CostReport, factor: int, stage: str = "both") -> CostReport:
    """Fold a stage onto ``factor`` times fewer operators clocked ``factor`` times faster.

    Pure bookkeeping: counts become ``ceil(count / factor)`` and the stage's
    rate multiplies by ``factor``.  Output values are unaffected.
    """
    if isinstance(factor, bool) or int(factor) != factor or factor < 1:
        raise BadFactor(f"serialization factor must be an integer >= 1, got {factor!r}")
    factor = int(factor)
    if stage not in ("inner", "outer", "both"):
        raise ValueError(f"stage must be inner, outer or both, got {stage!r}")
    changes = {}
    if stage in ("inner", "both"):
        changes["inner_macs"] = math.ceil(report.inner_macs / factor)
        changes["inner_rate"] = report.inner_rate * factor
    if stage in ("outer", "both"):
        changes["outer_macs"] = math.ceil(report.outer_macs / factor)
        changes["outer_adds"] = math.ceil(report.outer_adds / factor)
        changes["outer_rate"] = report.outer_rate * factor
    return replace(report, **changes)


@dataclass(frozen=True)
class McStats:
    trials: int
    seed: int
    mean_total: float
    std_total: float
    mean_nonempty: float  # per group, averaged over groups and trials
    std_nonempty: float
    inner_min: int
    inner_max: int
    mean_inner: float

    @property
    def stderr_nonempty(self) -> float:
        return self.std_nonempty / math.sqrt(self.trials)


def occupancy_expectation(J: int, M: int) -> float:
    """Expected number of non-empty patterns when M taps fall uniformly into 2**J."""
    cells = 2.0**J
    return cells * (1.0 - (1.0 - 1.0 / cells) ** M)


def monte_carlo_cost(K: int, M: int, G: int, mode=MAC, trials: int = 1000, seed: int = 50) -> McStats:
    """Actual costs over ``trials`` random banks.

    Trial ``i`` uses substream ``i`` of ``seed``, so the result does not
    depend on the order trials are run in.
    """
    mode = CostMode.parse(mode)
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    plan = plan_grouping(K, G)
    totals = np.empty(trials)
    inners = np.empty(trials, dtype=np.int64)
    nonempty = np.empty((trials, plan.G))
    for i in range(trials):
        bank = random_bank(K, M, seed, stream=i)
        parts = [build_partition(bank, g) for g in plan.groups]
        rep = actual_cost(parts, plan, mode)
        totals[i] = rep.total
        inners[i] = rep.inner_macs
        nonempty[i] = [p.n_nonempty for p in parts]
    per_trial_nonempty = nonempty.ravel()
    return McStats(
        trials=trials,
        seed=seed,
        mean_total=float(totals.mean()),
        std_total=float(totals.std(ddof=1)) if trials > 1 else 0.0,
        mean_nonempty=float(per_trial_nonempty.mean()),
        std_nonempty=float(per_trial_nonempty.std(ddof=1)) if per_trial_nonempty.size > 1 else 0.0,
        inner_min=int(inners.min()),
        inner_max=int(inners.max()),
        mean_inner=float(inners.mean()),
    )
