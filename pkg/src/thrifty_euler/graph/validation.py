"""
Eulerian-ness checks, cycle verification and a brute-force cycle enumerator.
"""

from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from thrifty_euler.graph.graph_model import DirectedMultigraph, Edge

###############################################################################
# verdicts


@dataclass(frozen=True)
class Eulerian:
    ok = True

    def __str__(self):
        return "Eulerian"


@dataclass(frozen=True)
class DegreeImbalance:
    vertex: int
    out_degree: int = 0
    in_degree: int = 0
    ok = False

    def __str__(self):
        return (
            f"DegreeImbalance({self.vertex}): out-degree {self.out_degree}, "
            f"in-degree {self.in_degree}"
        )


@dataclass(frozen=True)
class NotStronglyConnected:
    """`target` cannot be reached from `source`."""

    source: int
    target: int
    ok = False

    def __str__(self):
        return (
            f"NotStronglyConnected({self.source}, {self.target}): "
            f"no path from {self.source} to {self.target}"
        )


EulerianVerdict = Union[Eulerian, DegreeImbalance, NotStronglyConnected]


@dataclass(frozen=True)
class Valid:
    ok = True

    def __str__(self):
        return "Valid"


@dataclass(frozen=True)
class NotATrail:
    position: int
    ok = False

    def __str__(self):
        return (
            f"NotATrail({self.position}): edge does not start where the "
            "previous one ended"
        )


@dataclass(frozen=True)
class EdgeNotInGraph:
    position: int
    edge: Edge
    ok = False

    def __str__(self):
        u, v = self.edge
        return f"EdgeNotInGraph({self.position}): {u} {v}"


@dataclass(frozen=True)
class MultiplicityMismatch:
    edge: Edge
    expected: int
    found: int
    ok = False

    def __str__(self):
        return (
            f"MultiplicityMismatch({self.edge[0]} {self.edge[1]}): "
            f"graph has {self.expected}, cycle has {self.found}"
        )


@dataclass(frozen=True)
class NotClosed:
    ok = False

    def __str__(self):
        return "NotClosed: the last edge does not end at the start vertex"


@dataclass(frozen=True)
class WrongStart:
    expected: int
    found: int
    ok = False

    def __str__(self):
        return (
            f"WrongStart: expected {self.expected}, "
            f"cycle starts at {self.found}"
        )


CycleVerdict = Union[
    Valid,
    NotATrail,
    EdgeNotInGraph,
    MultiplicityMismatch,
    NotClosed,
    WrongStart,
]


###############################################################################
# checks


def _reachable(offsets, values, n, root):
    """Vertices reachable from root following the given CSR."""
    seen = np.zeros(n + 1, dtype=bool)
    seen[root] = True
    stack = [root]
    while stack:
        u = stack.pop()
        for v in values[offsets[u] : offsets[u + 1]].tolist():
            if not seen[v]:
                seen[v] = True
                stack.append(v)
    return seen


def check_eulerian(g: DirectedMultigraph) -> EulerianVerdict:
    """
    Degree balance at every vertex, then strong connectivity over all
    vertices (a vertex without edges fails it).
    """
    out_deg = g.out_degrees()
    in_deg = g.in_degrees()
    unbalanced = np.flatnonzero(out_deg != in_deg)
    if len(unbalanced) > 0:
        v = int(unbalanced[0])
        return DegreeImbalance(v + 1, int(out_deg[v]), int(in_deg[v]))

    positive = np.flatnonzero(out_deg + in_deg)
    if len(positive) == 0:
        # no edges, no closed trail
        return NotStronglyConnected(1, 1)
    root = int(positive[0]) + 1

    forward = _reachable(g.out_offsets, g.out_targets, g.n, root)
    missing = np.flatnonzero(~forward[1:])
    if len(missing) > 0:
        return NotStronglyConnected(root, int(missing[0]) + 1)

    backward = _reachable(g.in_offsets, g.in_sources, g.n, root)
    missing = np.flatnonzero(~backward[1:])
    if len(missing) > 0:
        return NotStronglyConnected(int(missing[0]) + 1, root)

    return Eulerian()


def is_eulerian(g: DirectedMultigraph) -> bool:
    return check_eulerian(g).ok


def verify_cycle(
    g: DirectedMultigraph, seq: Sequence[Edge], v0: Optional[int] = None
) -> CycleVerdict:
    """
    Check that seq is a closed trail at v0 using every edge of g exactly
    once. Parallel edges are compared by endpoint multiplicity.
    v0 defaults to the source of the first edge.
    """
    seq = [(int(u), int(v)) for u, v in seq]
    graph_edges = Counter(g.edges())

    if len(seq) == 0:
        if g.m == 0:
            return Valid()
        edge, count = next(iter(graph_edges.items()))
        return MultiplicityMismatch(edge, count, 0)

    if v0 is not None and seq[0][0] != v0:
        return WrongStart(v0, seq[0][0])
    v0 = seq[0][0]

    for position, edge in enumerate(seq):
        if edge not in graph_edges:
            return EdgeNotInGraph(position, edge)

    # overused edges first, missing ones only after closure
    used = Counter(seq)
    for edge in used:
        if used[edge] > graph_edges[edge]:
            return MultiplicityMismatch(edge, graph_edges[edge], used[edge])

    for position in range(1, len(seq)):
        if seq[position - 1][1] != seq[position][0]:
            return NotATrail(position)

    if seq[-1][1] != v0:
        return NotClosed()

    for edge in graph_edges:
        if used[edge] != graph_edges[edge]:
            return MultiplicityMismatch(edge, graph_edges[edge], used[edge])

    return Valid()


###############################################################################
# brute force


@dataclass
class EnumerationResult:
    cycles: list[list[Edge]]
    truncated: bool

    def __len__(self):
        return len(self.cycles)

    def __contains__(self, seq):
        seq = [tuple(e) for e in seq]
        return any(seq == c for c in self.cycles)


def enumerate_eulerian_cycles(
    g: DirectedMultigraph,
    v0: int,
    cap: int = 10000,
    distinguish_parallel: bool = True,
) -> EnumerationResult:
    """
    All Eulerian cycles of g starting at v0, by exhaustive backtracking.
    input:
        cap - stop after this many cycles and flag the result as truncated
        distinguish_parallel - if False, parallel edge instances are
            interchangeable and each endpoint sequence is produced once
    Exponential; meant for graphs with about a dozen edges.
    """
    m = g.m
    out_off, out_tgt = g.out_offsets, g.out_targets
    used = np.zeros(m, dtype=bool)
    path: list[Edge] = []
    cycles: list[list[Edge]] = []
    truncated = False

    def extend(u):
        nonlocal truncated
        if len(path) == m:
            if u == v0:
                if len(cycles) >= cap:
                    truncated = True
                    return
                cycles.append(list(path))
            return

        tried = set()
        for e in range(int(out_off[u]), int(out_off[u + 1])):
            if used[e]:
                continue
            v = int(out_tgt[e])
            if not distinguish_parallel:
                if v in tried:
                    continue
                tried.add(v)
            used[e] = True
            path.append((u, v))
            extend(v)
            path.pop()
            used[e] = False
            if truncated:
                return

    if m > 0:
        extend(v0)
    return EnumerationResult(cycles, truncated)
