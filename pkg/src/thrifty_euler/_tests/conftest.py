from pathlib import Path

import pytest

from thrifty_euler.graph.generators import (
    SplitMix64,
    gen_cycle_union,
    gen_random_eulerian,
)
from thrifty_euler.graph.graph_model import build_from_edge_list, read_graph

FIXTURES = Path(__file__).parent / "fixtures"

# cycle emitted on the six-vertex example, in order
FIG1_CYCLE = [
    (1, 2),
    (2, 3),
    (3, 4),
    (4, 5),
    (5, 2),
    (2, 5),
    (5, 6),
    (6, 1),
]


def corpus_graph(seed, max_n=200, max_m=5000):
    """
    Seeded Eulerian graph for sweeps: random_eulerian on even seeds,
    cycle_union on odd ones.
    """
    rng = SplitMix64(seed)
    n = rng.randint(1, max_n)
    if seed % 2 == 0:
        # mostly sparse, every 25th graph up to max_m edges
        top = max_m if seed % 25 == 0 else min(max_m, 3 * n + 20)
        return gen_random_eulerian(n, rng.randint(n, max(n, top)), seed)
    k = rng.randint(1, 10)
    max_len = rng.randint(1, max(1, min(max_m // k, 2 * n)))
    return gen_cycle_union(n, k, max_len, seed)


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def fig1_path():
    return FIXTURES / "fig1.txt"


@pytest.fixture
def fig1_graph(fig1_path):
    """
    Six vertices, eight edges, with the in-list order that makes the
    traversal emit FIG1_CYCLE.
    """
    return read_graph(fig1_path)


@pytest.fixture
def triangle():
    return build_from_edge_list(3, [(1, 2), (2, 3), (3, 1)])


@pytest.fixture
def split_graph():
    """
    Balanced but not connected: the traversal gets stuck at vertex 1
    after two edges.
    """
    return build_from_edge_list(3, [(1, 2), (2, 1), (3, 3)])
