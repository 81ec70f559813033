"""
Colored reference traversal.

Runs the same traversal as euler_core but keeps an explicit mark on every
edge instance:

    Black   not traversed yet
    Red     traversed forward into a vertex reached for the first time
    Green   traversed forward into an already reached vertex
    Dashed  backtracked over, i.e. written to the output

Rules at the current vertex u:
    - u has a Black incoming edge: walk it backwards (Black -> Red/Green)
    - else u has a Green outgoing edge: backtrack along it (-> Dashed)
    - else u != v0: backtrack along the Red outgoing edge (-> Dashed)
    - else terminate

Ties are broken in adjacency order: lowest Black in-entry first, lowest
Green out-entry first. Parallel edges are separate instances keyed by
(source, out-index), matched to in-entries by rank.

Storage is O(m); this module is the test oracle for euler_core.
"""

import enum
from collections.abc import Iterator
from dataclasses import dataclass
from typing import Optional

import numpy as np

from thrifty_euler.algo.euler_core import NotEulerianDetected
from thrifty_euler.graph.graph_model import (
    NO_VERTEX,
    DirectedMultigraph,
    Edge,
    default_start,
)


class EdgeMark(enum.IntEnum):
    BLACK = 0
    RED = 1
    GREEN = 2
    DASHED = 3

    def __str__(self):
        return self.name.capitalize()


MARK_COST = {
    EdgeMark.BLACK: 3,
    EdgeMark.RED: 2,
    EdgeMark.GREEN: 2,
    EdgeMark.DASHED: 0,
}

ALLOWED_RECOLORING = {
    (EdgeMark.BLACK, EdgeMark.RED),
    (EdgeMark.BLACK, EdgeMark.GREEN),
    (EdgeMark.RED, EdgeMark.DASHED),
    (EdgeMark.GREEN, EdgeMark.DASHED),
}


class EventKind(enum.Enum):
    FORWARD = "Forward"
    BACKTRACK = "Backtrack"
    SKIP = "Skip"
    TERMINATE = "Terminate"

    def __str__(self):
        return self.value


class InvariantViolation(AssertionError):
    def __init__(self, invariant, step, detail=""):
        super().__init__(f"Step {step}: {invariant} violated. {detail}")
        self.invariant = invariant
        self.step = step


@dataclass(frozen=True)
class TraceEvent:
    step: int
    kind: EventKind
    edge: Optional[Edge]
    edge_id: Optional[int]
    old_mark: Optional[EdgeMark]
    new_mark: Optional[EdgeMark]
    current: int


class MarkState:
    """
    Marks of all edge instances plus the current vertex.

    Edge instance ids are positions in the out-CSR of the graph, so the
    instance (u, k) (k-th out-entry of u) has id out_offsets[u] + k - 1.
    """

    def __init__(self, g: DirectedMultigraph, v0: int):
        self.g = g
        self.start = v0
        self.current = v0
        self.mark = np.full(g.m, EdgeMark.BLACK, dtype=np.int8)
        # source of every instance, aligned with g.out_targets
        self.source = np.repeat(
            np.arange(g.n + 1, dtype=np.int64), np.diff(g.out_offsets)
        )
        self.dashed_seq: list[Edge] = []

    def copy(self) -> "MarkState":
        other = MarkState.__new__(MarkState)
        other.g = self.g
        other.start = self.start
        other.current = self.current
        other.mark = self.mark.copy()
        other.source = self.source
        other.dashed_seq = list(self.dashed_seq)
        return other

    def edge(self, edge_id: int) -> Edge:
        return int(self.source[edge_id]), int(self.g.out_targets[edge_id])

    def mark_counts(self, mark: EdgeMark) -> tuple[np.ndarray, np.ndarray]:
        """
        d+(v, mark) and d-(v, mark) for all v, arrays indexed by vertex id
        (entry 0 unused).
        """
        selected = self.mark == mark
        n = self.g.n
        out_counts = np.bincount(self.source[selected], minlength=n + 1)
        in_counts = np.bincount(
            self.g.out_targets[selected], minlength=n + 1
        )
        return out_counts, in_counts

    def all_dashed(self) -> bool:
        return bool(np.all(self.mark == EdgeMark.DASHED))


def needle_vertices(s: MarkState, v0: Optional[int] = None) -> set[int]:
    """
    Vertices w with d+(w, Black) = d-(w, Black) if w is current, or
    d+(w, Black) = d-(w, Black) + 1 otherwise.
    """
    black_out, black_in = s.mark_counts(EdgeMark.BLACK)
    surplus = black_out - black_in
    needles = set((np.flatnonzero(surplus[1:] == 1) + 1).tolist())
    needles.discard(s.current)
    if surplus[s.current] == 0:
        needles.add(s.current)
    return needles


def potential(s: MarkState) -> int:
    """Sum of mark costs: Black 3, Red 2, Green 2, Dashed 0."""
    counts = np.bincount(s.mark, minlength=len(EdgeMark))
    return int(sum(MARK_COST[mark] * counts[mark] for mark in EdgeMark))


def red_parent_map(s: MarkState) -> dict[int, int]:
    """Source -> target of every Red edge."""
    red = np.flatnonzero(s.mark == EdgeMark.RED)
    return {
        int(s.source[e]): int(s.g.out_targets[e]) for e in red.tolist()
    }


class _Tracer:
    def __init__(self, g: DirectedMultigraph, v0: int):
        self.g = g
        self.state = MarkState(g, v0)
        self.reached = np.zeros(g.n + 1, dtype=bool)
        self.reached[v0] = True
        # lowest in-entry / out-entry not yet handled, per vertex
        self.in_cursor = np.zeros(g.n + 1, dtype=np.int64)
        self.out_cursor = np.zeros(g.n + 1, dtype=np.int64)
        self.red_out = np.full(g.n + 1, -1, dtype=np.int64)
        self.skipped = np.zeros(g.n + 1, dtype=bool)
        self.step = 0
        self.finished = False

    def _event(self, kind, edge_id=None, old=None, new=None):
        self.step += 1
        s = self.state
        return TraceEvent(
            step=self.step,
            kind=kind,
            edge=None if edge_id is None else s.edge(edge_id),
            edge_id=edge_id,
            old_mark=old,
            new_mark=new,
            current=s.current,
        )

    def _recolor(self, edge_id, new):
        old = EdgeMark(int(self.state.mark[edge_id]))
        self.state.mark[edge_id] = new
        return old

    def advance(self) -> TraceEvent:
        g, s = self.g, self.state
        u = s.current

        # walk a Black incoming edge backwards
        j = int(self.in_cursor[u])
        if j < g.in_degree(u):
            self.in_cursor[u] = j + 1
            edge_id = int(g.in_to_out[g.in_offsets[u] + j])
            v = int(s.source[edge_id])
            if self.reached[v]:
                new = EdgeMark.GREEN
            else:
                new = EdgeMark.RED
                self.reached[v] = True
                self.red_out[v] = edge_id
            old = self._recolor(edge_id, new)
            s.current = v
            return self._event(EventKind.FORWARD, edge_id, old, new)

        # backtrack: Green out-entries in order, the Red one last
        start = int(g.out_offsets[u])
        d_out = g.out_degree(u)
        k = int(self.out_cursor[u])
        red = int(self.red_out[u])

        if k < d_out and start + k == red and not self.skipped[u]:
            self.skipped[u] = True
            self.out_cursor[u] = k + 1
            return self._event(
                EventKind.SKIP, red, EdgeMark.RED, EdgeMark.RED
            )

        if k < d_out:
            edge_id = start + k
            self.out_cursor[u] = k + 1
            if int(s.mark[edge_id]) != EdgeMark.GREEN:
                raise NotEulerianDetected(
                    f"Out-edge {s.edge(edge_id)} of vertex {u} is "
                    f"{EdgeMark(int(s.mark[edge_id]))} when backtracking.",
                    u,
                    len(s.dashed_seq),
                )
        elif red >= 0 and int(s.mark[red]) == EdgeMark.RED:
            edge_id = red
        elif u == s.start and len(s.dashed_seq) == g.m:
            self.finished = True
            return self._event(EventKind.TERMINATE)
        else:
            raise NotEulerianDetected(
                f"Stuck at vertex {u} after {len(s.dashed_seq)} of "
                f"{g.m} edges; the graph is not Eulerian.",
                u,
                len(s.dashed_seq),
            )

        old = self._recolor(edge_id, EdgeMark.DASHED)
        edge = s.edge(edge_id)
        s.dashed_seq.append(edge)
        s.current = edge[1]
        return self._event(EventKind.BACKTRACK, edge_id, old, EdgeMark.DASHED)


def iter_trace(
    g: DirectedMultigraph, v0: Optional[int] = None
) -> Iterator[tuple[TraceEvent, MarkState]]:
    """
    Yield (event, state) after every step, the Terminate event last.
    The state object is live and is mutated by the following step.
    """
    if v0 is None:
        v0 = default_start(g)
    if g.m == 0 or v0 == NO_VERTEX:
        raise ValueError("The graph has no edges, there is no cycle to trace.")
    if not 1 <= v0 <= g.n or g.in_degree(v0) + g.out_degree(v0) == 0:
        raise ValueError(f"Start vertex {v0} is not a vertex with edges.")

    tracer = _Tracer(g, v0)
    while not tracer.finished:
        event = tracer.advance()
        yield event, tracer.state


def trace(
    g: DirectedMultigraph, v0: Optional[int] = None
) -> tuple[list[TraceEvent], MarkState]:
    """
    Run the colored traversal to the end.
    output:
        events - every TraceEvent in order
        state - final MarkState (all edges Dashed on Eulerian input)
    """
    events = []
    state = None
    for event, state in iter_trace(g, v0):
        events.append(event)
    return events, state


def format_event(event: TraceEvent) -> str:
    """`step kind u v old_mark new_mark current`, '-' for absent fields."""
    u, v = event.edge if event.edge is not None else ("-", "-")
    old = "-" if event.old_mark is None else str(event.old_mark)
    new = "-" if event.new_mark is None else str(event.new_mark)
    return f"{event.step} {event.kind} {u} {v} {old} {new} {event.current}"


###############################################################################
# invariant suite


def _check_two_statements(s: MarkState, step):
    black_out, black_in = s.mark_counts(EdgeMark.BLACK)
    surplus = (black_out - black_in)[1:]
    off = np.flatnonzero(surplus)
    if len(off) == 0:
        return
    values = sorted(surplus[off].tolist())
    b_candidates = (np.flatnonzero(surplus == -1) + 1).tolist()
    if len(off) != 2 or values != [-1, 1] or b_candidates != [s.current]:
        raise InvariantViolation(
            "two-statements invariant",
            step,
            f"unbalanced vertices {(off + 1).tolist()} with surplus "
            f"{surplus[off].tolist()}, current {s.current}",
        )


def _check_red_tree(s: MarkState, step):
    red_out, _ = s.mark_counts(EdgeMark.RED)
    if np.any(red_out > 1):
        raise InvariantViolation(
            "at most one Red out-edge per vertex",
            step,
            f"vertices {(np.flatnonzero(red_out > 1)).tolist()}",
        )
    parent = red_parent_map(s)
    for v in parent:
        seen = {v}
        w = v
        while w in parent:
            w = parent[w]
            if w in seen:
                raise InvariantViolation(
                    "Red edges form a forest", step, f"cycle through {w}"
                )
            seen.add(w)
        if w != s.start:
            raise InvariantViolation(
                "Red chains end at the start vertex",
                step,
                f"chain from {v} ends at {w}",
            )


def check_step(
    event: TraceEvent,
    s: MarkState,
    needle_before: set[int],
    potential_before: int,
) -> int:
    """
    Check one step of a trace. Returns the new potential.
    needle_before and potential_before describe the state before the event.
    """
    step = event.step

    if event.kind in (EventKind.FORWARD, EventKind.BACKTRACK):
        if (event.old_mark, event.new_mark) not in ALLOWED_RECOLORING:
            raise InvariantViolation(
                "marks are monotone",
                step,
                f"{event.old_mark} -> {event.new_mark}",
            )
        expected_new = (
            {EdgeMark.RED, EdgeMark.GREEN}
            if event.kind == EventKind.FORWARD
            else {EdgeMark.DASHED}
        )
        if event.new_mark not in expected_new:
            raise InvariantViolation(
                f"{event.kind} recoloring", step, f"new mark {event.new_mark}"
            )

    if event.kind == EventKind.BACKTRACK:
        u = event.edge[0]
        if needle_before != {u}:
            raise InvariantViolation(
                "backtracking only at the needle vertex",
                step,
                f"backtracked from {u}, needle {needle_before}",
            )
        if event.old_mark == EdgeMark.RED:
            green_out, _ = s.mark_counts(EdgeMark.GREEN)
            if green_out[u] > 0:
                raise InvariantViolation(
                    "Red edge backtracked last",
                    step,
                    f"vertex {u} still has Green out-edges",
                )

    needles = needle_vertices(s)
    if len(needles) != 1:
        raise InvariantViolation(
            "exactly one needle vertex", step, f"needles {sorted(needles)}"
        )
    _check_two_statements(s, step)
    _check_red_tree(s, step)

    phi = potential(s)
    if event.kind in (EventKind.FORWARD, EventKind.BACKTRACK):
        if phi >= potential_before:
            raise InvariantViolation(
                "potential strictly decreases",
                step,
                f"{potential_before} -> {phi}",
            )
    elif phi != potential_before:
        raise InvariantViolation(
            "potential unchanged by Skip/Terminate",
            step,
            f"{potential_before} -> {phi}",
        )

    if event.kind == EventKind.TERMINATE:
        if s.current != s.start or not s.all_dashed() or phi != 0:
            raise InvariantViolation(
                "terminal state",
                step,
                f"current {s.current}, start {s.start}, potential {phi}",
            )

    return phi


def iter_checked_trace(
    g: DirectedMultigraph, v0: Optional[int] = None
) -> Iterator[tuple[TraceEvent, MarkState]]:
    """
    iter_trace with every invariant checked after every step.
    Raises InvariantViolation on the first failure.
    """
    initial = None

    for event, state in iter_trace(g, v0):
        if initial is None:
            # the state before the first event is the all-Black start
            initial = MarkState(g, state.start)
            phi = potential(initial)
            if phi != 3 * g.m:
                raise InvariantViolation(
                    "initial potential is 3m", 0, f"got {phi}"
                )
            needles = needle_vertices(initial)
            if needles != {initial.start}:
                raise InvariantViolation(
                    "initial needle is the start vertex", 0, f"{needles}"
                )
        phi = check_step(event, state, needles, phi)
        needles = needle_vertices(state)
        yield event, state


def check_trace(
    g: DirectedMultigraph, v0: Optional[int] = None
) -> tuple[list[TraceEvent], MarkState]:
    """
    Trace g and check every invariant after every step.
    Raises InvariantViolation on the first failure.
    """
    events = []
    state = None
    for event, state in iter_checked_trace(g, v0):
        events.append(event)
    return events, state
