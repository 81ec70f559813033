"""
Space-efficient Hierholzer traversal.

The graph is walked backwards along incoming edges; every time the walk
backtracks over an outgoing edge that edge is emitted, and the emitted
edges form the Eulerian cycle in order. Working memory is four per-vertex
arrays and a handful of scalar registers, nothing per edge:

    next_index[v]  how many of v's in- and out-entries have been consumed
    visited[v]     v has been current at least once
    skipped[v]     the first out-entry of v towards back[v] was deferred
    back[v]        vertex from which v was first reached, NO_VERTEX if none

The out-edge of v towards back[v] is backtracked last.
"""

import logging
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from thrifty_euler.algo.sinks import EdgeSink
from thrifty_euler.graph.graph_model import (
    NO_VERTEX,
    DirectedMultigraph,
    Edge,
    default_start,
)

logger = logging.getLogger(__name__)

# scalar registers: written, current, start, i, v. Between writes v keeps
# the target of the last written edge; the reverse step holds its
# predecessor in i, which is free once the in-entry is read.
SCALAR_REGISTERS = 5


class NotEulerianDetected(RuntimeError):
    """
    The traversal hit a state that is impossible on an Eulerian graph.
    """

    def __init__(self, msg, vertex=None, written=None):
        super().__init__(msg)
        self.vertex = vertex
        self.written = written


def counter_width(m: int) -> int:
    """
    Bits per per-vertex counter entry, ceil(lg(2m + 2)).
    next_index[v] never exceeds d(v) + 1 <= 2m + 1.
    """
    return (2 * m + 1).bit_length()


@dataclass
class AlgorithmState:
    """
    Copy of the traversal state. Arrays are indexed by v - 1.
    """

    next_index: np.ndarray
    visited: np.ndarray
    skipped: np.ndarray
    back: np.ndarray
    written: int
    current: int
    start: int
    m: int

    @property
    def n(self) -> int:
        return len(self.next_index)

    def field_widths(self) -> dict:
        """
        Declared bits per entry of every state field.
        back only needs ceil(lg(n + 1)) bits, it shares the counter width.
        """
        w = counter_width(self.m)
        return {
            "next_index": (self.n, w),
            "back": (self.n, w),
            "visited": (self.n, 1),
            "skipped": (self.n, 1),
            "registers": (SCALAR_REGISTERS, w),
        }

    def declared_bits(self) -> int:
        return sum(
            entries * width for entries, width in self.field_widths().values()
        )


@dataclass
class RunStats:
    loop_iterations: int = 0
    edges_written: int = 0
    aux_bits: int = 0
    elapsed_ns: int = 0
    start: int = NO_VERTEX


class EulerCursor:
    """
    Resumable traversal; each call to next_edge() runs the loop until the
    next edge is written.
    Holds one set of per-vertex arrays and no per-edge storage.
    """

    def __init__(self, g: DirectedMultigraph, v0: int):
        self.g = g
        self.m = g.m
        self.start = v0

        n = g.n
        # one extra slot so vertex ids index the arrays directly
        self._next = np.zeros(n + 1, dtype=np.min_scalar_type(2 * g.m + 2))
        self._visited = np.zeros(n + 1, dtype=bool)
        self._skipped = np.zeros(n + 1, dtype=bool)
        self._back = np.zeros(n + 1, dtype=np.min_scalar_type(n))

        self.written = 0
        self.iterations = 0
        self._u = v0
        self._v = v0
        self._visited[v0] = True
        self._failed = False

    def __iter__(self):
        return self

    def __next__(self) -> Edge:
        edge = self.next_edge()
        if edge is None:
            raise StopIteration
        return edge

    @property
    def done(self) -> bool:
        return self.written >= self.m

    def next_edge(self) -> Optional[Edge]:
        """
        Advance to the next emitted edge.
        Returns None once all m edges have been written.
        """
        if self.written >= self.m:
            return None
        if self._failed:
            raise NotEulerianDetected(
                "Cursor already failed.", self._u, self.written
            )

        g = self.g
        in_off, in_src = g.in_offsets, g.in_sources
        out_off, out_tgt = g.out_offsets, g.out_targets
        nxt, visited = self._next, self._visited
        skipped, back = self._skipped, self._back
        v0 = self.start
        u = self._u

        while True:
            self.iterations += 1
            nxt[u] += 1
            i = int(nxt[u])

            in_start = int(in_off[u])
            d_in = int(in_off[u + 1]) - in_start

            # reverse traversal
            if i <= d_in:
                v = int(in_src[in_start + i - 1])
                if not visited[v]:
                    if v != v0:
                        back[v] = u
                    visited[v] = True
                u = v
                continue

            # backtracking
            out_start = int(out_off[u])
            d_out = int(out_off[u + 1]) - out_start
            b = int(back[u])
            i -= d_in

            # the skip test only looks at real list entries
            if (
                i <= d_out
                and not skipped[u]
                and int(out_tgt[out_start + i - 1]) == b
            ):
                skipped[u] = True
                nxt[u] += 1
                i += 1

            if i > d_out:
                if b == NO_VERTEX or i > d_out + 1:
                    self._fail(
                        u,
                        f"Stuck at vertex {u} after {self.written} of "
                        f"{self.m} edges; the graph is not Eulerian.",
                    )
                v = b
            else:
                v = int(out_tgt[out_start + i - 1])

            # the written edges must chain into a closed trail at v0
            if u != self._v:
                self._fail(
                    u,
                    f"Edge ({u}, {v}) does not continue the trail ending at "
                    f"{self._v}; the graph is not Eulerian.",
                )
            if self.written + 1 == self.m and v != v0:
                self._fail(
                    u,
                    f"Last edge ({u}, {v}) does not return to {v0}; "
                    "the graph is not Eulerian.",
                )

            self.written += 1
            self._u = v
            self._v = v
            return u, v

    def _fail(self, u: int, msg: str):
        self._u = u
        self._failed = True
        raise NotEulerianDetected(msg, u, self.written)

    def snapshot_state(self) -> AlgorithmState:
        return AlgorithmState(
            next_index=self._next[1:].copy(),
            visited=self._visited[1:].copy(),
            skipped=self._skipped[1:].copy(),
            back=self._back[1:].copy(),
            written=self.written,
            current=self._u,
            start=self.start,
            m=self.m,
        )


def check_start(g: DirectedMultigraph, v0):
    """Resolve the start vertex, ValueError if the run cannot start there."""
    if v0 is None:
        v0 = default_start(g)
    if g.m == 0:
        raise ValueError("The graph has no edges, there is no cycle to emit.")
    if not 1 <= v0 <= g.n:
        raise ValueError(f"Start vertex {v0} out of range 1..{g.n}.")
    if g.out_degree(v0) + g.in_degree(v0) == 0:
        raise ValueError(f"Start vertex {v0} has no incident edges.")
    return v0


def open_run(g: DirectedMultigraph, v0: Optional[int] = None) -> EulerCursor:
    """
    Open a resumable run from v0 (default: lowest vertex with edges).
    """
    v0 = check_start(g, v0)
    return EulerCursor(g, v0)


def snapshot_state(cursor: EulerCursor) -> AlgorithmState:
    return cursor.snapshot_state()


def run(
    g: DirectedMultigraph, v0: Optional[int], sink: EdgeSink
) -> RunStats:
    """
    Emit an Eulerian cycle of g, starting and ending at v0, into sink.

    The graph must be Eulerian; NotEulerianDetected is raised when the run
    proves otherwise.
    """
    cursor = open_run(g, v0)
    write = sink.write

    t_start = time.perf_counter_ns()
    try:
        for u, v in cursor:
            write(u, v)
    finally:
        sink.close()
    elapsed = time.perf_counter_ns() - t_start

    stats = RunStats(
        loop_iterations=cursor.iterations,
        edges_written=cursor.written,
        aux_bits=cursor.snapshot_state().declared_bits(),
        elapsed_ns=elapsed,
        start=cursor.start,
    )
    logger.debug(
        "Run from %d wrote %d edges in %d iterations",
        stats.start,
        stats.edges_written,
        stats.loop_iterations,
    )
    return stats
