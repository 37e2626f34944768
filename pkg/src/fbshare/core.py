"""Filter-bank representation, subset partitioning and grouping plans.

A PN filter bank holds ``K`` filters of ``M`` taps, every tap ``+1`` or
``-1``.  For a group of filters, each tap index has a sign pattern across
the group; taps sharing a pattern are summed once (the inner stage) and each
filter output is a signed sum of those subset sums (the outer stage).

Index conventions used throughout the package:

* filters are numbered from 1 (``filter_subset=[1, 2]``),
* taps and time samples are numbered from 0,
* bit ``j - 1`` of a pattern belongs to the ``j``-th filter of the group, so
  pattern ``0b01`` for the pair ``(h1, h2)`` means ``h1 = +1, h2 = -1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .errors import (
    BadFilterIndex,
    BadGroupCount,
    EmptyBank,
    NonUnitCoefficient,
    PlanMismatch,
    RaggedBank,
    TooManyFiltersInGroup,
)

MAX_GROUP_FILTERS = 30


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class FilterBank:
    """K x M matrix of signed unit coefficients.

    ``padding`` is ``None`` for an ordinary bank.  Polyphase decomposition of
    a prototype whose length is not a multiple of the ratio produces phases
    of unequal length; those are stored zero-padded to a common length with
    the padded positions flagged ``True`` in ``padding`` (coefficient 0
    there, excluded from partitions and costs).
    """

    coefficients: np.ndarray
    padding: np.ndarray | None = None

    @property
    def K(self) -> int:
        return self.coefficients.shape[0]

    @property
    def M(self) -> int:
        return self.coefficients.shape[1]

    @property
    def real_taps(self) -> np.ndarray:
        """Boolean K x M mask of non-padding taps."""
        if self.padding is None:
            return np.ones(self.coefficients.shape, dtype=bool)
        return ~self.padding

    def row(self, k: int) -> np.ndarray:
        """Coefficients of filter ``k`` (1-based)."""
        return self.coefficients[k - 1]

    def tolist(self) -> list[list[int]]:
        return self.coefficients.astype(int).tolist()

    def __eq__(self, other):
        if not isinstance(other, FilterBank):
            return NotImplemented
        pads = (self.padding is None) == (other.padding is None) and (
            self.padding is None or np.array_equal(self.padding, other.padding)
        )
        return pads and np.array_equal(self.coefficients, other.coefficients)

    __hash__ = None


def validate_bank(raw: Sequence[Sequence[int]], padding=None) -> FilterBank:
    """Check a nested integer sequence and wrap it as a :class:`FilterBank`.

    Raises
    ------
    EmptyBank
        No filters, or filters with no taps.
    RaggedBank
        Rows of unequal length.
    NonUnitCoefficient
        A real tap that is not exactly +1 or -1.  The error carries the
        1-based filter index and 0-based tap position.
    """
    if isinstance(raw, np.ndarray):
        rows = [list(r) for r in raw] if raw.ndim == 2 else [list(raw)]
    else:
        rows = [list(r) for r in raw]
    if not rows:
        raise EmptyBank("filter bank has no filters")
    lengths = {len(r) for r in rows}
    if len(lengths) > 1:
        raise RaggedBank(f"filters have unequal lengths {sorted(lengths)}")
    if 0 in lengths:
        raise EmptyBank("filters have no taps")

    pad = None
    if padding is not None:
        pad = np.asarray(padding, dtype=bool)
        if pad.shape != (len(rows), len(rows[0])):
            raise RaggedBank("padding mask does not match bank shape")

    coeffs = np.zeros((len(rows), len(rows[0])), dtype=np.int8)
    for k, row in enumerate(rows):
        for m, v in enumerate(row):
            if pad is not None and pad[k, m]:
                if v != 0:
                    raise NonUnitCoefficient(k + 1, m, v)
                continue
            if isinstance(v, bool) or v not in (1, -1) or int(v) != v:
                raise NonUnitCoefficient(k + 1, m, v)
            coeffs[k, m] = int(v)
    if pad is not None and not pad.any():
        pad = None
    return FilterBank(_readonly(coeffs), None if pad is None else _readonly(pad.copy()))


@dataclass(frozen=True)
class SubsetPartition:
    """Tap indices of one filter group, split by sign pattern.

    ``subsets`` maps a pattern (``J`` meaningful bits) to the ascending tap
    indices where every filter of the group has that sign; only non-empty
    patterns appear, in ascending order.

    ``ragged`` holds taps where some group filters are padding.  Keys are
    ``(pattern, care)`` with ``care`` marking the filters that have a real
    tap there; pattern bits outside ``care`` are zero.  It is empty for any
    bank without padding.
    """

    K: int
    M: int
    filters: tuple[int, ...]
    subsets: dict[int, tuple[int, ...]]
    ragged: dict[tuple[int, int], tuple[int, ...]] = field(default_factory=dict)

    @property
    def full_care(self) -> int:
        return (1 << self.K) - 1

    def entries(self) -> Iterator[tuple[int, int, tuple[int, ...]]]:
        """Yield ``(pattern, care, taps)`` for every non-empty subset."""
        full = self.full_care
        for p, taps in self.subsets.items():
            yield p, full, taps
        for (p, care), taps in self.ragged.items():
            yield p, care, taps

    @property
    def n_nonempty(self) -> int:
        return len(self.subsets) + len(self.ragged)

    @property
    def tap_count(self) -> int:
        return sum(len(t) for _, _, t in self.entries())

    def participating(self, j: int) -> int:
        """Number of subsets that feed the ``j``-th filter of the group."""
        bit = 1 << (j - 1)
        return len(self.subsets) + sum(1 for (_, care) in self.ragged if care & bit)


def sign_of(j: int, pattern: int, care: int | None = None) -> int:
    """Sign with which the subset ``pattern`` enters the ``j``-th filter.

    Returns 0 when ``care`` is given and excludes filter ``j``.
    """
    bit = 1 << (j - 1)
    if care is not None and not care & bit:
        return 0
    return 1 if pattern & bit else -1


def build_partition(bank: FilterBank, filter_subset: Sequence[int]) -> SubsetPartition:
    filters = tuple(int(k) for k in filter_subset)
    if not filters:
        raise BadFilterIndex("filter subset is empty")
    if len(set(filters)) != len(filters):
        raise BadFilterIndex(f"duplicate filter index in {list(filters)}")
    for k in filters:
        if not 1 <= k <= bank.K:
            raise BadFilterIndex(f"filter index {k} outside 1..{bank.K}")
    J = len(filters)
    if J > MAX_GROUP_FILTERS:
        raise TooManyFiltersInGroup(f"{J} filters in one group (limit {MAX_GROUP_FILTERS})")

    rows = bank.coefficients[[k - 1 for k in filters]]
    real = bank.real_taps[[k - 1 for k in filters]]
    weights = np.int64(1) << np.arange(J, dtype=np.int64)
    patterns = ((rows > 0) * weights[:, None]).sum(axis=0)
    cares = (real * weights[:, None]).sum(axis=0)

    full = (1 << J) - 1
    subsets: dict[int, list[int]] = {}
    ragged: dict[tuple[int, int], list[int]] = {}
    for m, (p, c) in enumerate(zip(patterns.tolist(), cares.tolist())):
        if c == full:
            subsets.setdefault(p, []).append(m)
        elif c:
            ragged.setdefault((p, c), []).append(m)
    return SubsetPartition(
        K=J,
        M=bank.M,
        filters=filters,
        subsets={p: tuple(subsets[p]) for p in sorted(subsets)},
        ragged={key: tuple(ragged[key]) for key in sorted(ragged)},
    )


@dataclass(frozen=True)
class GroupingPlan:
    """Split of K filters into G contiguous groups.

    The first ``n_large`` groups hold ``size_large`` filters and the
    remaining ``n_small`` groups hold ``size_small``.  When G divides K,
    ``n_large`` is 0 and ``size_large`` is unused.
    """

    K: int
    G: int
    groups: tuple[tuple[int, ...], ...]
    n_large: int
    size_large: int
    n_small: int
    size_small: int

    def group_sizes(self) -> list[int]:
        return [len(g) for g in self.groups]


def _as_int(name: str, v) -> int:
    if isinstance(v, bool) or int(v) != v:
        raise BadGroupCount(f"{name} must be an integer, got {v!r}")
    return int(v)


def plan_grouping(K: int, G: int) -> GroupingPlan:
    K = _as_int("K", K)
    G = _as_int("G", G)
    if K < 1 or G < 1 or G > K:
        raise BadGroupCount(f"group count G={G} outside 1..K={K}")
    rem = K % G
    base = (K - rem) // G
    sizes = [base + 1] * rem + [base] * (G - rem)
    groups = []
    start = 1
    for s in sizes:
        groups.append(tuple(range(start, start + s)))
        start += s
    return GroupingPlan(
        K=K,
        G=G,
        groups=tuple(groups),
        n_large=rem,
        size_large=base + 1,
        n_small=G - rem,
        size_small=base,
    )


def partition_grouped(bank: FilterBank, plan: GroupingPlan) -> list[SubsetPartition]:
    if plan.K != bank.K:
        raise PlanMismatch(f"plan is for K={plan.K}, bank has K={bank.K}")
    return [build_partition(bank, g) for g in plan.groups]
