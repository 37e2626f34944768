"""Choice of the group count G.

Splitting K filters into G groups trades inner-stage work (``G * M``)
against outer-stage work (about ``2**(K/G) * K``).  The discrete search
evaluates every integer G; the continuous relaxation treats G as real and
finds the stationary point of the convex objective by bisection.

Feasibility: a candidate is kept only if every group still has at least
``rho`` taps per sign pattern on average, i.e. ``M / 2**size >= rho`` for
each group size present.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect

from .cost import CostMode, CostReport, MAC, expected_cost_discrete, expected_cost_grouped
from .errors import BadThreshold

DEFAULT_RHO = 1.0
CONTINUOUS_STEP = 0.1


@dataclass(frozen=True)
class CurvePoint:
    G: float
    cost: float
    feasible: bool
    ratio: float
    report: CostReport


@dataclass(frozen=True)
class OptResult:
    best_G: float
    best_cost: float
    curve: tuple[CurvePoint, ...]
    mode: CostMode
    constraint_ratio: float
    feasible: bool
    K: int
    M: int
    rho: float


def _check(K, M, rho):
    if not rho > 0 or not math.isfinite(rho):
        raise BadThreshold(f"rho must be a positive finite number, got {rho!r}")
    if K < 1 or M < 1:
        raise ValueError(f"K and M must be positive, got K={K}, M={M}")


def discrete_ratio(K: int, M: int, G: int) -> float:
    """``M / 2**size`` for the largest group size actually present."""
    biggest = -(-K // G)
    return M / 2**biggest


def optimize_G_discrete(K: int, M: int, mode=MAC, rho: float = DEFAULT_RHO) -> OptResult:
    mode = CostMode.parse(mode)
    _check(K, M, rho)
    curve = []
    for G in range(1, K + 1):
        rep = expected_cost_discrete(K, M, G, mode)
        ratio = discrete_ratio(K, M, G)
        curve.append(CurvePoint(G, rep.total, ratio >= rho, ratio, rep))

    pool = [p for p in curve if p.feasible]
    feasible = bool(pool)
    if not feasible:
        warnings.warn(
            f"no G in 1..{K} satisfies M/2**size >= {rho} for M={M}; "
            "returning the unconstrained minimum",
            RuntimeWarning,
            stacklevel=2,
        )
        pool = curve
    # min() keeps the first minimum, so ties go to the smallest G
    best = min(pool, key=lambda p: p.cost)
    return OptResult(best.G, best.cost, tuple(curve), mode, best.ratio, feasible, K, M, rho)


def continuous_objective(K: int, M: int, G, mode=MAC):
    mode = CostMode.parse(mode)
    G = np.asarray(G, dtype=float)
    outer = 2.0 ** (K / G) * K
    if mode is not MAC:
        outer = outer - K
    return G * M + outer


def continuous_derivative(K: int, M: int, G: float) -> float:
    # identical for both modes; increasing in G
    return M - (K * K * math.log(2) / (G * G)) * 2.0 ** (K / G)


def _stationary_point(K: int, M: int) -> float:
    if K == 1 or continuous_derivative(K, M, 1.0) >= 0:
        return 1.0
    if continuous_derivative(K, M, float(K)) <= 0:
        return float(K)
    return bisect(lambda g: continuous_derivative(K, M, g), 1.0, float(K), xtol=1e-12, rtol=1e-15)


def optimize_G_continuous(K: int, M: int, mode=MAC, rho: float = DEFAULT_RHO) -> OptResult:
    """Real-valued G minimising the relaxed cost on ``[1, K]``.

    The ratio ``M / 2**(K/G)`` grows with G, so the feasible set is
    ``G >= K / log2(M / rho)``; the constrained optimum of a convex function
    is then the larger of that bound and the stationary point.
    """
    mode = CostMode.parse(mode)
    _check(K, M, rho)
    g_star = _stationary_point(K, M)
    feasible = True
    if M / rho > 1:
        g_min = K / math.log2(M / rho)
        if g_min > K:
            feasible = False
        else:
            g_star = max(g_star, g_min)
    else:
        feasible = False
    if not feasible:
        warnings.warn(
            f"no real G in [1, {K}] satisfies M/2**(K/G) >= {rho} for M={M}; "
            "returning the unconstrained minimum",
            RuntimeWarning,
            stacklevel=2,
        )

    n = int(round((K - 1) / CONTINUOUS_STEP)) + 1
    curve = []
    for G in np.linspace(1.0, float(K), n):
        rep = expected_cost_grouped(K, M, float(G), mode)
        ratio = M / 2.0 ** (K / G)
        curve.append(CurvePoint(float(G), float(rep.total), ratio >= rho, ratio, rep))
    best = float(continuous_objective(K, M, g_star, mode))
    return OptResult(g_star, best, tuple(curve), mode, M / 2.0 ** (K / g_star), feasible, K, M, rho)


@dataclass(frozen=True)
class SweepEntry:
    M: int
    discrete: OptResult
    continuous: OptResult

    def breakdown(self) -> list[tuple[int, float, float]]:
        """``(G, inner ops, outer ops)`` for every discrete G."""
        return [
            (p.G, p.report.inner_macs, p.report.outer_macs + p.report.outer_adds)
            for p in self.discrete.curve
        ]


def sweep(K: int, M_list, mode=MAC, rho: float = DEFAULT_RHO) -> list[SweepEntry]:
    M_list = list(M_list)
    if not M_list:
        raise ValueError("M_list is empty")
    return [
        SweepEntry(M, optimize_G_discrete(K, M, mode, rho), optimize_G_continuous(K, M, mode, rho))
        for M in M_list
    ]
