"""
Seeded generators of Eulerian multigraph families.

Randomness comes from SplitMix64 so that a (kind, parameters, seed) triple
gives the same edge list on every platform:

    state = (state + 0x9E3779B97F4A7C15) mod 2^64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) mod 2^64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) mod 2^64
    return z ^ (z >> 31)

Integers below a bound are drawn by rejection, shuffles are Fisher-Yates
from the last position down.
"""

import itertools
import logging
from collections.abc import Iterator
from dataclasses import dataclass, field

import numpy as np

from thrifty_euler.graph.graph_model import (
    DirectedMultigraph,
    build_from_edge_list,
)
from thrifty_euler.graph.validation import is_eulerian

logger = logging.getLogger(__name__)

_MASK64 = (1 << 64) - 1

# de Bruijn graphs above this many edges are refused
MAX_GENERATED_EDGES = 50_000_000


class SplitMix64:
    def __init__(self, seed: int):
        self.state = int(seed) & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def randbelow(self, bound: int) -> int:
        """Uniform integer in [0, bound)."""
        if bound < 1:
            raise ValueError(f"Bound must be positive, got {bound}.")
        limit = ((1 << 64) // bound) * bound
        while True:
            x = self.next_u64()
            if x < limit:
                return x % bound

    def randint(self, low: int, high: int) -> int:
        """Uniform integer in [low, high]."""
        return low + self.randbelow(high - low + 1)

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.randbelow(i + 1)
            items[i], items[j] = items[j], items[i]


###############################################################################
# families


def gen_cycle_union(
    n: int, k: int, max_len: int, seed: int
) -> DirectedMultigraph:
    """
    Union of k directed closed walks covering vertices 1..n.

    Every walk starts at a vertex already used by an earlier walk (the
    first one at a random vertex), so the union stays strongly connected.
    The n - 1 remaining vertices are shared out evenly between the walks;
    a walk has length max(randint(1, max_len), fresh + 1) and fills the
    positions beyond its fresh vertices with random used vertices.
    """
    if n < 1 or k < 1 or max_len < 1:
        raise ValueError(
            f"cycle_union needs n, k, max_len >= 1, got {n}, {k}, {max_len}."
        )
    rng = SplitMix64(seed)

    order = list(range(1, n + 1))
    rng.shuffle(order)
    used = [order[0]]
    fresh = iter(order[1:])

    edges = []
    base, extra = divmod(n - 1, k)
    for j in range(k):
        quota = base + (1 if j < extra else 0)
        length = max(rng.randint(1, max_len), quota + 1)

        walk = [used[rng.randbelow(len(used))]]
        for _ in range(quota):
            v = next(fresh)
            walk.append(v)
            used.append(v)
        while len(walk) < length:
            walk.append(used[rng.randbelow(len(used))])

        edges.extend(zip(walk, walk[1:] + walk[:1]))

    return build_from_edge_list(n, edges)


def gen_de_bruijn(k: int, w: int) -> DirectedMultigraph:
    """
    de Bruijn graph B(k, w): one vertex per word of length w over k
    symbols, one edge per word of length w + 1 (prefix -> suffix).
    Word x (base-k value) is vertex x + 1; edges follow lexicographic
    order of the long words.
    """
    if k < 2 or w < 1:
        raise ValueError(f"de_bruijn needs k >= 2 and w >= 1, got {k}, {w}.")
    m = k ** (w + 1)
    if m > MAX_GENERATED_EDGES:
        raise ValueError(
            f"de Bruijn graph B({k}, {w}) has {m} edges, "
            f"more than the limit of {MAX_GENERATED_EDGES}."
        )
    n = k**w

    words = np.arange(m, dtype=np.int64)
    edges = np.empty((m, 2), dtype=np.int64)
    edges[:, 0] = words // k + 1
    edges[:, 1] = words % n + 1
    return DirectedMultigraph(n, edges)


def gen_random_eulerian(
    n: int, target_m: int, seed: int
) -> DirectedMultigraph:
    """
    One random closed walk of exactly target_m steps through all n vertices.
    The walk positions are random vertices; n distinct positions are then
    overwritten with a permutation of 1..n so that every vertex occurs.
    """
    if not 1 <= n <= target_m:
        raise ValueError(
            f"random_eulerian needs 1 <= n <= target_m, got {n}, {target_m}."
        )
    rng = SplitMix64(seed)

    walk = [rng.randint(1, n) for _ in range(target_m)]

    perm = list(range(1, n + 1))
    rng.shuffle(perm)
    positions = list(range(target_m))
    rng.shuffle(positions)
    for v, pos in zip(perm, positions[:n]):
        walk[pos] = v

    return build_from_edge_list(n, zip(walk, walk[1:] + walk[:1]))


def gen_single_cycle(m: int) -> DirectedMultigraph:
    """The directed cycle 1 -> 2 -> ... -> m -> 1."""
    if m < 1:
        raise ValueError(f"single_cycle needs m >= 1, got {m}.")
    return build_from_edge_list(m, [(i, i % m + 1) for i in range(1, m + 1)])


def iter_small_eulerian(
    max_n: int, max_m: int
) -> Iterator[DirectedMultigraph]:
    """
    Every Eulerian edge multiset on n = 1..max_n vertices (all of them
    with edges) and m = 1..max_m edges, edges in sorted order.
    Isomorphic copies are not removed.
    """
    for n in range(1, max_n + 1):
        pairs = list(itertools.product(range(1, n + 1), repeat=2))
        for m in range(1, max_m + 1):
            for edges in itertools.combinations_with_replacement(pairs, m):
                balance = [0] * (n + 1)
                for u, v in edges:
                    balance[u] += 1
                    balance[v] -= 1
                if any(balance):
                    continue
                g = build_from_edge_list(n, edges)
                if is_eulerian(g):
                    yield g


###############################################################################
# specs


KIND_ALIASES = {
    "cycle_union": "cycle_union",
    "cycles": "cycle_union",
    "de_bruijn": "de_bruijn",
    "debruijn": "de_bruijn",
    "random_eulerian": "random_eulerian",
    "random": "random_eulerian",
    "single_cycle": "single_cycle",
    "single": "single_cycle",
}

# parameters each kind needs, besides the seed
KIND_PARAMS = {
    "cycle_union": ("n", "k", "max_len"),
    "de_bruijn": ("k", "w"),
    "random_eulerian": ("n", "m"),
    "single_cycle": ("m",),
}


def canonical_kind(kind: str) -> str:
    try:
        return KIND_ALIASES[kind]
    except KeyError:
        raise ValueError(
            f"Unknown generator kind '{kind}'. Use 'cycle_union', "
            "'de_bruijn', 'random_eulerian' or 'single_cycle'."
        ) from None


@dataclass
class GenSpec:
    kind: str
    params: dict = field(default_factory=dict)
    seed: int = 0
    graph_id: str = ""

    def __post_init__(self):
        self.kind = canonical_kind(self.kind)
        if not self.graph_id:
            values = "-".join(
                str(self.params[p])
                for p in KIND_PARAMS[self.kind]
                if p in self.params
            )
            self.graph_id = f"{self.kind}-{values}-s{self.seed}"


def generate(spec: GenSpec) -> DirectedMultigraph:
    """
    Build the graph a GenSpec describes.
    """
    missing = [p for p in KIND_PARAMS[spec.kind] if p not in spec.params]
    if missing:
        raise ValueError(
            f"Generator '{spec.kind}' is missing parameters: {missing}."
        )
    p = {name: int(spec.params[name]) for name in KIND_PARAMS[spec.kind]}

    if spec.kind == "cycle_union":
        g = gen_cycle_union(p["n"], p["k"], p["max_len"], spec.seed)
    elif spec.kind == "de_bruijn":
        g = gen_de_bruijn(p["k"], p["w"])
    elif spec.kind == "random_eulerian":
        g = gen_random_eulerian(p["n"], p["m"], spec.seed)
    else:
        g = gen_single_cycle(p["m"])

    logger.debug("Generated %s: %r", spec.graph_id, g)
    return g
