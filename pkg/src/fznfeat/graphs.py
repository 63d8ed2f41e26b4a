"""Constraint-graph and variable-graph statistics.

Two views of model structure: the constraint graph CG has one node per
effective constraint with an edge wherever two constraints share a
variable; the variable graph VG has one node per unbounded variable with
an edge wherever two variables occur in the same constraint.

Graph work runs under a single wall-clock budget shared by construction
and the statistics passes.  If the budget elapses anywhere, the whole
20-value block degrades to the sentinel -1: partial graph numbers would
not be comparable across instances.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field

from .fzn.ast import Model
from .fzn.model import ModelIndex
from .stats import SENTINEL, stat_summary

GRAPH_BUDGET_S = 2.0

_CHECK_EVERY = 256


class GraphTimeout(Exception):
    pass


class Deadline:
    """Cooperative wall-clock deadline, polled between units of work."""

    def __init__(self, budget_s: float | None):
        self._limit = None if budget_s is None else time.monotonic() + budget_s
        self._tick = 0
        if budget_s is not None and budget_s <= 0:
            raise GraphTimeout

    def check(self) -> None:
        if self._limit is None:
            return
        self._tick += 1
        if self._tick % _CHECK_EVERY == 0 and time.monotonic() > self._limit:
            raise GraphTimeout


@dataclass
class UndirectedGraph:
    n: int
    adj: list[set[int]] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not self.adj:
            self.adj = [set() for _ in range(self.n)]

    def add_edge(self, u: int, v: int) -> None:
        if u != v:
            self.adj[u].add(v)
            self.adj[v].add(u)

    def degree(self, u: int) -> int:
        return len(self.adj[u])

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adj]

    def edge_count(self) -> int:
        return sum(len(a) for a in self.adj) // 2


def build_constraint_graph(index: ModelIndex, deadline: Deadline | None = None) -> UndirectedGraph:
    """CG over the effective constraints, via an inverted index.

    The variable -> constraints index avoids the quadratic pairwise
    intersection test over constraints.
    """
    deadline = deadline or Deadline(None)
    g = UndirectedGraph(len(index.constraints))
    by_var: dict[str, list[int]] = {}
    for ci, occ in enumerate(index.constraints):
        deadline.check()
        for name in occ.var_set:
            by_var.setdefault(name, []).append(ci)
    for members in by_var.values():
        deadline.check()
        ms = set(members)
        for ci in members:
            g.adj[ci] |= ms
    for ci in range(g.n):
        g.adj[ci].discard(ci)
    return g


def build_variable_graph(index: ModelIndex, deadline: Deadline | None = None) -> tuple[UndirectedGraph, dict[str, int]]:
    """VG over the unbounded variables; returns the graph and name -> node id."""
    deadline = deadline or Deadline(None)
    node_of = {v.name: i for i, v in enumerate(index.free_vars)}
    g = UndirectedGraph(len(node_of))
    for occ in index.constraints:
        deadline.check()
        ids = {node_of[name] for name in occ.var_set}
        for u in ids:
            g.adj[u] |= ids
    for u in range(g.n):
        g.adj[u].discard(u)
    return g, node_of


def clustering_coefficients(g: UndirectedGraph, deadline: Deadline | None = None) -> list[float]:
    """Local clustering coefficient 2*E(N(v)) / (d(v)*(d(v)-1)) per node.

    Nodes of degree < 2 get coefficient 0.
    """
    deadline = deadline or Deadline(None)
    out: list[float] = []
    for v in range(g.n):
        deadline.check()
        nb = g.adj[v]
        d = len(nb)
        if d < 2:
            out.append(0.0)
            continue
        links2 = sum(len(g.adj[u] & nb) for u in nb)  # counts each edge twice
        out.append(links2 / (d * (d - 1)))
    return out


def node_diameters(g: UndirectedGraph, deadline: Deadline | None = None) -> list[float]:
    """Per-node eccentricity by BFS; unreachable pairs contribute distance 0."""
    deadline = deadline or Deadline(None)
    out: list[float] = []
    for src in range(g.n):
        deadline.check()
        dist = {src: 0}
        queue = deque([src])
        far = 0
        while queue:
            u = queue.popleft()
            du = dist[u]
            far = max(far, du)
            for w in g.adj[u]:
                if w not in dist:
                    dist[w] = du + 1
                    queue.append(w)
        out.append(float(far))
    return out


@dataclass(frozen=True)
class VariableGraphInfo:
    """VG measurements kept for the objective features."""

    degree: dict[str, int]
    eccentricity: dict[str, float]


def compute_graph_block(
    index: ModelIndex, budget_s: float | None = GRAPH_BUDGET_S
) -> tuple[list[float], VariableGraphInfo | None]:
    """The 20 graph features plus VG info for downstream consumers.

    On budget exhaustion every value is -1 and the VG info is None.
    """
    try:
        deadline = Deadline(budget_s)
        cg = build_constraint_graph(index, deadline)
        cg_cc = clustering_coefficients(cg, deadline)
        vg, node_of = build_variable_graph(index, deadline)
        vg_diam = node_diameters(vg, deadline)
    except GraphTimeout:
        return [SENTINEL] * 20, None
    values: list[float] = []
    values += stat_summary(float(d) for d in cg.degrees()).values()
    values += stat_summary(cg_cc).values()
    values += stat_summary(float(d) for d in vg.degrees()).values()
    values += stat_summary(vg_diam).values()
    info = VariableGraphInfo(
        degree={name: vg.degree(i) for name, i in node_of.items()},
        eccentricity={name: vg_diam[i] for name, i in node_of.items()},
    )
    return values, info


def graph_features(model: Model, budget_s: float | None = GRAPH_BUDGET_S) -> list[float]:
    """Stat summaries of CG degrees, CG clustering, VG degrees, VG diameters."""
    values, _ = compute_graph_block(ModelIndex.build(model), budget_s)
    return values
