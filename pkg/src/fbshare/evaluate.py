"""Bit-exact filter-bank evaluation.

Two routes compute the same outputs:

* :func:`direct_convolve` is the plain convolution ``y_k[n] = sum_m x[n-m] h_k[m]``
  and serves as the oracle;
* :func:`shared_evaluate` first sums the input over each tap subset, then
  combines the subset sums with signs, group by group.

Both use a zero-initialised delay line and return as many output samples as
input samples.  Arithmetic is int64 throughout; :func:`check_headroom`
rejects inputs whose worst-case accumulation would not fit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .core import FilterBank, GroupingPlan, SubsetPartition, partition_grouped, sign_of
from .errors import AccumulatorOverflowRisk, PlanMismatch, SampleOutOfRange, ShapeMismatch

DEFAULT_WIDTH = 16


@dataclass(frozen=True, eq=False)
class SignalFrame:
    samples: np.ndarray
    sample_width: int = DEFAULT_WIDTH

    def __post_init__(self):
        x = np.asarray(self.samples)
        if x.ndim != 1:
            raise ShapeMismatch("signal must be one-dimensional")
        if x.size and not np.issubdtype(x.dtype, np.integer):
            if not np.all(np.equal(np.mod(x, 1), 0)):
                raise SampleOutOfRange("signal samples must be integers")
        x = x.astype(np.int64)
        lim = 2 ** (self.sample_width - 1)
        if x.size and int(np.abs(x).max()) >= lim:
            raise SampleOutOfRange(
                f"sample magnitude {int(np.abs(x).max())} needs more than {self.sample_width} bits"
            )
        x.setflags(write=False)
        object.__setattr__(self, "samples", x)

    def __len__(self):
        return self.samples.size


@dataclass(frozen=True, eq=False)
class OutputFrame:
    """K x N integer outputs, row k-1 belonging to filter k."""

    outputs: np.ndarray

    @property
    def K(self) -> int:
        return self.outputs.shape[0]

    def __len__(self):
        return self.outputs.shape[1]

    def __eq__(self, other):
        if not isinstance(other, OutputFrame):
            return NotImplemented
        return self.outputs.shape == other.outputs.shape and np.array_equal(
            self.outputs, other.outputs
        )

    __hash__ = None


def as_signal(signal, sample_width: int = DEFAULT_WIDTH) -> SignalFrame:
    if isinstance(signal, SignalFrame):
        return signal
    return SignalFrame(np.asarray(signal), sample_width)


def check_headroom(M: int, sample_width: int) -> None:
    if M * 2 ** (sample_width - 1) >= 2**62:
        raise AccumulatorOverflowRisk(
            f"M={M} taps of {sample_width}-bit samples may exceed the 64-bit accumulator"
        )


def delay_matrix(x: np.ndarray, M: int) -> np.ndarray:
    """N x M read-only view with ``[n, m] = x[n - m]`` (zero before start)."""
    padded = np.concatenate([np.zeros(M - 1, dtype=np.int64), x])
    return sliding_window_view(padded, M)[:, ::-1]


def direct_convolve(bank: FilterBank, signal) -> OutputFrame:
    sig = as_signal(signal)
    check_headroom(bank.M, sig.sample_width)
    X = delay_matrix(sig.samples, bank.M)
    y = X @ bank.coefficients.astype(np.int64).T
    return OutputFrame(np.ascontiguousarray(y.T))


def _sign_matrix(part: SubsetPartition) -> np.ndarray:
    # rows: filters of the group, columns: subsets in entries() order
    cols = [
        [sign_of(j, p, care) for j in range(1, part.K + 1)]
        for p, care, _ in part.entries()
    ]
    if not cols:
        return np.zeros((part.K, 0), dtype=np.int64)
    return np.array(cols, dtype=np.int64).T


def subset_sums(part: SubsetPartition, X: np.ndarray) -> np.ndarray:
    """Inner stage: N x P matrix of per-subset input sums."""
    cols = [X[:, list(taps)].sum(axis=1) for _, _, taps in part.entries()]
    if not cols:
        return np.zeros((X.shape[0], 0), dtype=np.int64)
    return np.stack(cols, axis=1)


def shared_evaluate(
    bank: FilterBank,
    plan: GroupingPlan,
    signal,
    partitions: list[SubsetPartition] | None = None,
) -> OutputFrame:
    """Two-stage evaluation of ``bank`` under ``plan``.

    ``partitions`` may be passed to reuse ones already built for this
    bank and plan.
    """
    sig = as_signal(signal)
    check_headroom(bank.M, sig.sample_width)
    if plan.K != bank.K:
        raise PlanMismatch(f"plan is for K={plan.K}, bank has K={bank.K}")
    if partitions is None:
        partitions = partition_grouped(bank, plan)
    X = delay_matrix(sig.samples, bank.M)
    y = np.zeros((bank.K, len(sig)), dtype=np.int64)
    for part in partitions:
        t = subset_sums(part, X)
        rows = [k - 1 for k in part.filters]
        y[rows] = (t @ _sign_matrix(part).T).T
    return OutputFrame(y)


class EvaluatorState:
    """Streaming form of :func:`shared_evaluate`, one sample per call.

    Holds mutable delay-line state; use one instance per stream.
    """

    def __init__(self, bank: FilterBank, plan: GroupingPlan, sample_width: int = DEFAULT_WIDTH):
        check_headroom(bank.M, sample_width)
        self.K = bank.K
        self.plan = plan
        self.partitions = partition_grouped(bank, plan)
        self.sample_width = sample_width
        self.delay_line = [0] * bank.M
        self._stages = [
            (
                [k - 1 for k in part.filters],
                [list(taps) for _, _, taps in part.entries()],
                _sign_matrix(part).tolist(),
            )
            for part in self.partitions
        ]

    def step(self, sample: int) -> tuple[int, ...]:
        if abs(int(sample)) >= 2 ** (self.sample_width - 1):
            raise SampleOutOfRange(f"sample {sample} exceeds {self.sample_width} bits")
        self.delay_line.insert(0, int(sample))
        self.delay_line.pop()
        line = self.delay_line
        out = [0] * self.K
        for rows, subsets, signs in self._stages:
            t = [sum(line[m] for m in taps) for taps in subsets]
            for row, srow in zip(rows, signs):
                out[row] = sum(s * v for s, v in zip(srow, t))
        return tuple(out)


def step(state: EvaluatorState, sample: int) -> tuple[int, ...]:
    return state.step(sample)


@dataclass(frozen=True)
class EquivalenceReport:
    equal: bool
    first_mismatch: tuple[int, int] | None  # (filter k, 1-based; time n)
    max_abs_diff: int


def compare_outputs(a: OutputFrame, b: OutputFrame) -> EquivalenceReport:
    if a.outputs.shape != b.outputs.shape:
        raise ShapeMismatch(f"frames differ in shape: {a.outputs.shape} vs {b.outputs.shape}")
    diff = np.abs(a.outputs.astype(np.int64) - b.outputs.astype(np.int64))
    if not diff.any():
        return EquivalenceReport(True, None, 0)
    # earliest time first, then lowest filter
    n, k = np.argwhere(diff.T)[0]
    return EquivalenceReport(False, (int(k) + 1, int(n)), int(diff.max()))
