"""
Textbook Hierholzer: edge-centric depth-first search with an explicit
stack of vertices. Edges are emitted when popped, i.e. in reverse cycle
order, and reversed once at the end.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from thrifty_euler.algo.euler_core import NotEulerianDetected, check_start
from thrifty_euler.graph.graph_model import DirectedMultigraph, Edge


@dataclass
class BaselineResult:
    edges: list[Edge]
    peak_stack: int
    loop_iterations: int
    start: int


def run_baseline(
    g: DirectedMultigraph, v0: Optional[int] = None
) -> BaselineResult:
    """
    Eulerian cycle of g starting and ending at v0.
    input:
        g - Eulerian graph
        v0 - start vertex, lowest vertex with edges if None
    output:
        BaselineResult with the cycle and the peak stack depth
    """
    v0 = check_start(g, v0)

    out_off, out_tgt = g.out_offsets, g.out_targets
    # per-vertex cursor into its out-list
    cursor = out_off[:-1].copy()

    stack = [v0]
    peak = 1
    iterations = 0
    backtracked = []

    while stack:
        iterations += 1
        u = stack[-1]
        k = int(cursor[u])
        if k < out_off[u + 1]:
            cursor[u] = k + 1
            stack.append(int(out_tgt[k]))
            peak = max(peak, len(stack))
        else:
            stack.pop()
            if stack:
                backtracked.append((stack[-1], u))

    backtracked.reverse()

    if len(backtracked) != g.m or np.any(cursor != out_off[1:]):
        raise NotEulerianDetected(
            f"DFS from {v0} closed after {len(backtracked)} of {g.m} edges; "
            "the graph is not Eulerian.",
            v0,
            len(backtracked),
        )
    if backtracked[-1][1] != v0 or not _is_trail(backtracked):
        raise NotEulerianDetected(
            f"DFS from {v0} did not return a closed trail; "
            "the graph is not Eulerian.",
            v0,
            len(backtracked),
        )

    return BaselineResult(
        edges=backtracked,
        peak_stack=peak,
        loop_iterations=iterations,
        start=v0,
    )


def _is_trail(edges):
    return all(a[1] == b[0] for a, b in zip(edges, edges[1:]))
