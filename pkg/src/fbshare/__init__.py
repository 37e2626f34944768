"""Two-stage coefficient sharing for parallel PN (+/-1) FIR filter banks."""

from .core import (
    FilterBank,
    GroupingPlan,
    SubsetPartition,
    build_partition,
    partition_grouped,
    plan_grouping,
    sign_of,
    validate_bank,
)
from .cost import (
    CostMode,
    CostReport,
    McStats,
    actual_cost,
    direct_cost,
    expected_cost_discrete,
    expected_cost_grouped,
    expected_cost_ungrouped,
    monte_carlo_cost,
    occupancy_expectation,
    serialized_cost,
)
from .evaluate import (
    EquivalenceReport,
    EvaluatorState,
    OutputFrame,
    SignalFrame,
    compare_outputs,
    direct_convolve,
    shared_evaluate,
    step,
)
from .graph import DataflowGraph, build_graph, evaluate_graph, export_graph, import_graph, latency_of
from .optimize import OptResult, optimize_G_continuous, optimize_G_discrete, sweep
from .polyphase import PolyphaseSpec, interpolate_direct, interpolate_shared, polyphase_decompose
from .rng import random_bank, random_signal

__version__ = "0.1.0"
