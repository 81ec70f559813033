import pytest

from thrifty_euler._tests.conftest import FIG1_CYCLE, corpus_graph
from thrifty_euler.algo.euler_core import NotEulerianDetected, run
from thrifty_euler.algo.reference_tracer import (
    EdgeMark,
    EventKind,
    InvariantViolation,
    MarkState,
    TraceEvent,
    check_step,
    check_trace,
    format_event,
    iter_trace,
    needle_vertices,
    potential,
    red_parent_map,
    trace,
)
from thrifty_euler.algo.sinks import ListSink
from thrifty_euler.graph.graph_model import build_from_edge_list

# states (b) to (q) of the six-vertex example: the edge recolored, its
# new mark and the current vertex afterwards
FIG1_STEPS = [
    ((6, 1), "Red", 6),
    ((5, 6), "Red", 5),
    ((2, 5), "Red", 2),
    ((1, 2), "Green", 1),
    ((1, 2), "Dashed", 2),
    ((5, 2), "Green", 5),
    ((4, 5), "Red", 4),
    ((3, 4), "Red", 3),
    ((2, 3), "Green", 2),
    ((2, 3), "Dashed", 3),
    ((3, 4), "Dashed", 4),
    ((4, 5), "Dashed", 5),
    ((5, 2), "Dashed", 2),
    ((2, 5), "Dashed", 5),
    ((5, 6), "Dashed", 6),
    ((6, 1), "Dashed", 1),
]


def _marks_by_edge(state):
    return {
        state.edge(e): str(EdgeMark(int(x)))
        for e, x in enumerate(state.mark)
    }


def test_fig1_states(fig1_graph):
    """
    Every Forward/Backtrack step of the colored traversal matches the
    example's sequence of states; Skip steps change nothing.
    """
    steps = []
    for event, state in iter_trace(fig1_graph, 1):
        if event.kind in (EventKind.FORWARD, EventKind.BACKTRACK):
            steps.append((event.edge, str(event.new_mark), state.current))
    assert steps == FIG1_STEPS


def test_fig1_cumulative_marks(fig1_graph):
    """
    After state (h) of the example: 6->1, 5->6, 2->5 and 4->5 Red,
    1->2 Dashed, 5->2 Green, the rest Black.
    """
    productive = 0
    for event, state in iter_trace(fig1_graph, 1):
        if event.kind in (EventKind.FORWARD, EventKind.BACKTRACK):
            productive += 1
        if productive == 7:
            marks = _marks_by_edge(state)
            break

    assert marks == {
        (1, 2): "Dashed",
        (2, 3): "Black",
        (3, 4): "Black",
        (2, 5): "Red",
        (4, 5): "Red",
        (5, 6): "Red",
        (6, 1): "Red",
        (5, 2): "Green",
    }


def test_fig1_dashed_order(fig1_graph):
    events, state = trace(fig1_graph, 1)

    assert state.dashed_seq == FIG1_CYCLE
    assert state.all_dashed()
    assert events[-1].kind == EventKind.TERMINATE
    assert events[-1].current == 1

    skips = [e.edge for e in events if e.kind == EventKind.SKIP]
    assert skips == [(3, 4), (4, 5), (5, 6), (2, 5), (6, 1)]


def test_fig1_invariants(fig1_graph):
    events, state = check_trace(fig1_graph, 1)
    assert len(events) == 16 + 5 + 1
    assert potential(state) == 0


def test_triangle_trace_lines(triangle):
    events, _ = trace(triangle)
    lines = [format_event(e) for e in events]

    assert lines[0] == "1 Forward 3 1 Black Red 3"
    assert lines[3] == "4 Backtrack 1 2 Green Dashed 2"
    assert lines[4] == "5 Skip 2 3 Red Red 2"
    assert lines[-1] == "9 Terminate - - - - 1"
    assert len(lines) == 9


def test_initial_state(fig1_graph):
    s = MarkState(fig1_graph, 1)
    assert potential(s) == 3 * fig1_graph.m
    assert needle_vertices(s) == {1}
    assert red_parent_map(s) == {}


def test_red_parent_map_mid_trace(fig1_graph):
    for event, state in iter_trace(fig1_graph, 1):
        if event.step == 3:
            parents = red_parent_map(state)
            break
    assert parents == {6: 1, 5: 6, 2: 5}


def test_needle_moves_with_current(fig1_graph):
    """
    While a Red/Green walk is open the needle stays at the vertex the
    walk started from; once it closes the current vertex is the needle.
    """
    needles = []
    for _, state in iter_trace(fig1_graph, 1):
        needles.append(needle_vertices(state))
    # after three Forward steps the walk from 1 is still open
    assert needles[2] == {1}
    # the fourth closes it at 1
    assert needles[3] == {1}
    assert all(len(x) == 1 for x in needles)


def test_tracer_raises_on_split_graph(split_graph):
    with pytest.raises(NotEulerianDetected):
        trace(split_graph, 1)


def test_check_step_catches_bad_recoloring(triangle):
    s = MarkState(triangle, 1)
    event = TraceEvent(
        step=1,
        kind=EventKind.FORWARD,
        edge=(3, 1),
        edge_id=2,
        old_mark=EdgeMark.BLACK,
        new_mark=EdgeMark.DASHED,
        current=3,
    )
    with pytest.raises(InvariantViolation) as excinfo:
        check_step(event, s, {1}, 9)
    assert excinfo.value.step == 1
    assert excinfo.value.invariant == "marks are monotone"


def test_check_step_catches_flat_potential(triangle):
    s = MarkState(triangle, 1)
    s.mark[2] = EdgeMark.RED
    s.current = 3
    event = TraceEvent(
        step=1,
        kind=EventKind.FORWARD,
        edge=(3, 1),
        edge_id=2,
        old_mark=EdgeMark.BLACK,
        new_mark=EdgeMark.RED,
        current=3,
    )
    # the state before claimed a lower potential than now
    with pytest.raises(InvariantViolation, match="potential"):
        check_step(event, s, {1}, potential(s))


def test_tracer_mirrors_core_on_parallel_edges():
    """Parallel instances are matched by rank, so both emit the same."""
    g = build_from_edge_list(
        3, [(1, 2), (2, 1), (1, 2), (2, 3), (3, 2), (2, 1), (1, 1)]
    )
    sink = ListSink()
    run(g, 1, sink)
    _, state = check_trace(g, 1)
    assert state.dashed_seq == sink.edges


@pytest.mark.slow
def test_corpus_invariants():
    """
    200 seeded graphs with m <= 200: every invariant holds at every step
    and the dashed order equals the space-efficient output.
    """
    for seed in range(200):
        g = corpus_graph(seed, max_n=40, max_m=200)
        sink = ListSink()
        stats = run(g, None, sink)

        events, state = check_trace(g, stats.start)
        assert (
            state.dashed_seq == sink.edges
        ), f"seed {seed}: tracer and core disagree"
        productive = [
            e
            for e in events
            if e.kind in (EventKind.FORWARD, EventKind.BACKTRACK)
        ]
        assert len(productive) == 2 * g.m, f"seed {seed}"
