"""Explicit two-stage dataflow graph of a shared filter bank.

Layout: one ``tap`` node per delay-line position (shared by every group),
one ``subset_acc`` node per non-empty subset per group, a combine network
per filter, and one ``output`` node per filter.  Subtraction is expressed by
a ``-1`` sign on the edge entering a combine node, never by extra nodes.

Combine networks:

* pyramid mode builds a balanced binary tree of ``add``/``sub`` nodes; an
  odd operand at any level is carried up unchanged, so the depth is
  ``ceil(log2(n))`` for ``n`` operands;
* MAC mode chains one ``mac`` node per operand.
"""

from __future__ import annotations

import graphlib
import json
from dataclasses import dataclass

import numpy as np

from .core import FilterBank, GroupingPlan, partition_grouped, sign_of
from .cost import CostMode, MAC
from .errors import BadFormat, PlanMismatch
from .evaluate import OutputFrame, as_signal, check_headroom, delay_matrix
from .io import atomic_write_text

NODE_KINDS = ("tap", "subset_acc", "add", "sub", "mac", "output")
COMBINE_KINDS = ("add", "sub")


@dataclass(frozen=True)
class Node:
    id: int
    kind: str
    group: int  # -1 for the shared delay line
    stage: int


@dataclass(frozen=True)
class Edge:
    src: int
    dst: int
    sign: int


@dataclass(frozen=True)
class DataflowGraph:
    K: int
    M: int
    G: int
    mode: CostMode
    nodes: tuple[Node, ...]
    edges: tuple[Edge, ...]
    latency: tuple[int, ...]

    @property
    def taps(self) -> list[int]:
        return [n.id for n in self.nodes if n.kind == "tap"]

    @property
    def outputs(self) -> list[int]:
        """Output node ids in filter order."""
        return [n.id for n in self.nodes if n.kind == "output"]

    def inputs_of(self) -> dict[int, list[Edge]]:
        ins: dict[int, list[Edge]] = {n.id: [] for n in self.nodes}
        for e in self.edges:
            ins[e.dst].append(e)
        return ins

    def counts(self) -> dict[str, int]:
        """Node totals per kind plus ``inner_macs`` (edges into subset accumulators)."""
        out = {k: 0 for k in NODE_KINDS}
        for n in self.nodes:
            out[n.kind] += 1
        kinds = {n.id: n.kind for n in self.nodes}
        out["inner_macs"] = sum(1 for e in self.edges if kinds[e.dst] == "subset_acc")
        return out


class _Builder:
    def __init__(self):
        self.nodes: list[Node] = []
        self.edges: list[Edge] = []

    def node(self, kind, group, stage) -> int:
        nid = len(self.nodes)
        self.nodes.append(Node(nid, kind, group, stage))
        return nid

    def edge(self, src, dst, sign=1):
        self.edges.append(Edge(src, dst, sign))


def _pyramid(b: _Builder, operands, group):
    """Reduce ``(node, sign, stage)`` operands pairwise; returns the root operand."""
    level = operands
    while len(level) > 1:
        nxt = []
        for i in range(0, len(level) - 1, 2):
            (a, sa, ta), (c, sc, tc) = level[i], level[i + 1]
            kind = "sub" if -1 in (sa, sc) else "add"
            nid = b.node(kind, group, max(ta, tc) + 1)
            b.edge(a, nid, sa)
            b.edge(c, nid, sc)
            nxt.append((nid, 1, max(ta, tc) + 1))
        if len(level) % 2:
            nxt.append(level[-1])
        level = nxt
    return level[0] if level else None


def _mac_chain(b: _Builder, operands, group):
    prev = None
    for a, s, t in operands:
        stage = (prev[2] if prev else t) + 1
        nid = b.node("mac", group, stage)
        if prev is not None:
            b.edge(prev[0], nid, 1)
        b.edge(a, nid, s)
        prev = (nid, 1, stage)
    return prev


def build_graph(bank: FilterBank, plan: GroupingPlan, mode=MAC, partitions=None) -> DataflowGraph:
    mode = CostMode.parse(mode)
    if plan.K != bank.K:
        raise PlanMismatch(f"plan is for K={plan.K}, bank has K={bank.K}")
    if partitions is None:
        partitions = partition_grouped(bank, plan)
    b = _Builder()
    taps = [b.node("tap", -1, 0) for _ in range(bank.M)]
    roots = {}
    for gi, part in enumerate(partitions):
        accs = []
        for p, care, members in part.entries():
            acc = b.node("subset_acc", gi, 1)
            for m in members:
                b.edge(taps[m], acc, 1)
            accs.append((acc, p, care))
        for j, k in enumerate(part.filters, start=1):
            operands = [
                (acc, sign_of(j, p, care), 1)
                for acc, p, care in accs
                if sign_of(j, p, care) != 0
            ]
            reduce = _mac_chain if mode is MAC else _pyramid
            roots[k] = (gi, reduce(b, operands, gi))
    for k in range(1, bank.K + 1):
        gi, root = roots[k]
        if root is None:
            b.node("output", gi, 1)
            continue
        out = b.node("output", gi, root[2] + 1)
        b.edge(root[0], out, root[1])
    graph = DataflowGraph(bank.K, bank.M, plan.G, mode, tuple(b.nodes), tuple(b.edges), ())
    return DataflowGraph(
        graph.K, graph.M, graph.G, mode, graph.nodes, graph.edges, tuple(latency_of(graph))
    )


def _topological(graph: DataflowGraph) -> list[int]:
    ts = graphlib.TopologicalSorter({n.id: () for n in graph.nodes})
    for e in graph.edges:
        ts.add(e.dst, e.src)
    return list(ts.static_order())


def latency_of(graph: DataflowGraph) -> list[int]:
    """Pipeline delay of each output in cycles relative to a direct-form bank.

    Pyramid mode registers every adder level, so the delay is the number
    of ``add``/``sub`` nodes on the longest path into the output.  MAC mode
    maps onto cascaded DSP blocks and adds no delay.
    """
    if graph.mode is MAC:
        return [0] * len(graph.outputs)
    kinds = {n.id: n.kind for n in graph.nodes}
    ins = graph.inputs_of()
    depth: dict[int, int] = {}
    for nid in _topological(graph):
        d = max((depth[e.src] for e in ins[nid]), default=0)
        depth[nid] = d + (1 if kinds[nid] in COMBINE_KINDS else 0)
    return [depth[o] for o in graph.outputs]


def evaluate_graph(graph: DataflowGraph, signal) -> OutputFrame:
    """Run a signal through the graph node by node in topological order."""
    sig = as_signal(signal)
    check_headroom(graph.M, sig.sample_width)
    X = delay_matrix(sig.samples, graph.M)
    ins = graph.inputs_of()
    tap_index = {nid: m for m, nid in enumerate(graph.taps)}
    zero = np.zeros(len(sig), dtype=np.int64)
    values: dict[int, np.ndarray] = {}
    for nid in _topological(graph):
        if nid in tap_index:
            values[nid] = X[:, tap_index[nid]]
            continue
        acc = zero
        for e in ins[nid]:
            acc = acc + e.sign * values[e.src]
        values[nid] = acc
    return OutputFrame(np.stack([values[o] for o in graph.outputs]))


def export_graph(graph: DataflowGraph) -> str:
    doc = {
        "meta": {"K": graph.K, "M": graph.M, "G": graph.G, "mode": graph.mode.value},
        "nodes": [{"id": n.id, "kind": n.kind, "group": n.group, "stage": n.stage} for n in graph.nodes],
        "edges": [{"src": e.src, "dst": e.dst, "sign": e.sign} for e in graph.edges],
        "latency": list(graph.latency),
    }
    return json.dumps(doc, indent=1) + "\n"


def import_graph(text: str) -> DataflowGraph:
    try:
        doc = json.loads(text)
        meta = doc["meta"]
        nodes = tuple(Node(int(n["id"]), str(n["kind"]), int(n["group"]), int(n["stage"])) for n in doc["nodes"])
        edges = tuple(Edge(int(e["src"]), int(e["dst"]), int(e["sign"])) for e in doc["edges"])
        graph = DataflowGraph(
            int(meta["K"]), int(meta["M"]), int(meta["G"]), CostMode.parse(meta["mode"]),
            nodes, edges, tuple(int(v) for v in doc["latency"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise BadFormat(f"not a graph document: {exc}") from exc
    if [n.id for n in nodes] != list(range(len(nodes))):
        raise BadFormat("node ids must be dense from 0 in order")
    if any(n.kind not in NODE_KINDS for n in nodes):
        raise BadFormat("unknown node kind")
    return graph


def write_graph(graph: DataflowGraph, path) -> None:
    atomic_write_text(path, export_graph(graph))
