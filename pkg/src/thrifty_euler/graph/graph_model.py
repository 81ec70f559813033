"""
Read-only directed multigraph with 1-based vertex ids.

Both adjacency directions are stored in compressed sparse row form, so
degrees and the i-th in- or out-neighbour of a vertex are O(1) lookups.
Adjacency order is the order in which edges were given.
"""

import logging
import sys
from collections.abc import Iterable, Iterator
from pathlib import Path
from typing import TextIO, Union

import numpy as np

logger = logging.getLogger(__name__)

# vertex ids start at 1, 0 is the "unset" value of per-vertex arrays
NO_VERTEX = 0

Edge = tuple[int, int]


class GraphError(ValueError):
    pass


class GraphFormatError(GraphError):
    """
    Malformed graph input.
    `line` is the 1-based line in a graph file, `index` the 0-based
    position in an edge list; whichever applies is set.
    """

    def __init__(self, msg, line=None, index=None):
        super().__init__(msg)
        self.line = line
        self.index = index


class VertexQueryError(GraphError, IndexError):
    pass


def _build_csr(keys: np.ndarray, values: np.ndarray, n: int):
    """
    Group `values` by `keys` (1-based) keeping input order inside a group.

    Returns
    -------
    offsets : np.ndarray
        Length n + 2; entries of vertex v are values[offsets[v]:offsets[v+1]].
    grouped : np.ndarray
        Values reordered by key.
    order : np.ndarray
        Input positions in grouped order.
    """
    order = np.argsort(keys, kind="stable")
    counts = np.bincount(keys, minlength=n + 1)
    offsets = np.zeros(n + 2, dtype=np.int64)
    np.cumsum(counts, out=offsets[1:])
    return offsets, values[order], order


class DirectedMultigraph:
    """
    Immutable directed multigraph on vertices 1..n.

    Parallel edges are duplicate adjacency entries, a self-loop appears in
    both adjacency lists of its vertex.
    """

    def __init__(self, n: int, edges: np.ndarray):
        self._n = int(n)
        self._edges = edges
        self._edges.flags.writeable = False

        sources = edges[:, 0]
        targets = edges[:, 1]

        self._out_offsets, self._out_targets, out_order = _build_csr(
            sources, targets, self._n
        )
        self._in_offsets, self._in_sources, in_order = _build_csr(
            targets, sources, self._n
        )

        # out-CSR position of every input edge
        out_position = np.empty(len(edges), dtype=np.int64)
        out_position[out_order] = np.arange(len(edges), dtype=np.int64)
        # in-entry j of v is the same edge instance as out-entry
        # in_to_out[j] of its source
        self._in_to_out = out_position[in_order]

        for arr in (
            self._out_offsets,
            self._out_targets,
            self._in_offsets,
            self._in_sources,
            self._in_to_out,
        ):
            arr.flags.writeable = False

    def __repr__(self):
        return f"DirectedMultigraph with {self.n} vertices and {self.m} edges"

    @property
    def n(self) -> int:
        return self._n

    @property
    def m(self) -> int:
        return len(self._edges)

    # raw CSR views, used by the traversal hot loops
    @property
    def out_offsets(self) -> np.ndarray:
        return self._out_offsets

    @property
    def out_targets(self) -> np.ndarray:
        return self._out_targets

    @property
    def in_offsets(self) -> np.ndarray:
        return self._in_offsets

    @property
    def in_sources(self) -> np.ndarray:
        return self._in_sources

    @property
    def in_to_out(self) -> np.ndarray:
        return self._in_to_out

    def _check_vertex(self, v):
        if not 1 <= v <= self._n:
            raise VertexQueryError(
                f"Vertex {v} out of range, expected 1..{self._n}."
            )

    def out_degree(self, v: int) -> int:
        self._check_vertex(v)
        return int(self._out_offsets[v + 1] - self._out_offsets[v])

    def in_degree(self, v: int) -> int:
        self._check_vertex(v)
        return int(self._in_offsets[v + 1] - self._in_offsets[v])

    def degree(self, v: int, direction: str = "out") -> int:
        """
        d+(v) for direction "out", d-(v) for direction "in".
        """
        if direction == "out":
            return self.out_degree(v)
        elif direction == "in":
            return self.in_degree(v)
        else:
            raise ValueError(
                f"Unknown direction '{direction}'. Use 'out' or 'in'."
            )

    def neighbor(self, v: int, i: int, direction: str = "out") -> int:
        """
        The i-th (1-based) out- or in-neighbour of v.
        """
        if direction == "out":
            offsets, values = self._out_offsets, self._out_targets
        elif direction == "in":
            offsets, values = self._in_offsets, self._in_sources
        else:
            raise ValueError(
                f"Unknown direction '{direction}'. Use 'out' or 'in'."
            )

        self._check_vertex(v)
        d = int(offsets[v + 1] - offsets[v])
        if not 1 <= i <= d:
            raise VertexQueryError(
                f"Neighbour index {i} out of range for vertex {v} "
                f"({direction}-degree {d})."
            )
        return int(values[offsets[v] + i - 1])

    def out_neighbors(self, v: int) -> list[int]:
        self._check_vertex(v)
        start, stop = self._out_offsets[v], self._out_offsets[v + 1]
        return self._out_targets[start:stop].tolist()

    def in_neighbors(self, v: int) -> list[int]:
        self._check_vertex(v)
        start, stop = self._in_offsets[v], self._in_offsets[v + 1]
        return self._in_sources[start:stop].tolist()

    def out_degrees(self) -> np.ndarray:
        """Out-degrees of vertices 1..n (entry v-1 is vertex v)."""
        return np.diff(self._out_offsets)[1:]

    def in_degrees(self) -> np.ndarray:
        """In-degrees of vertices 1..n (entry v-1 is vertex v)."""
        return np.diff(self._in_offsets)[1:]

    def edges(self) -> Iterator[Edge]:
        """Edges in input order."""
        for u, v in self._edges.tolist():
            yield u, v

    def edge_array(self) -> np.ndarray:
        """Read-only (m, 2) array of edges in input order."""
        return self._edges


def build_from_edge_list(n: int, edges: Iterable[Edge]) -> DirectedMultigraph:
    """
    Build a graph from an ordered edge list.
    input:
        n - vertex count, vertices are 1..n
        edges - sequence of (u, v) pairs; their order fixes adjacency order
    output:
        DirectedMultigraph
    """
    if n < 1:
        raise GraphFormatError(f"Vertex count must be at least 1, got {n}.")

    edge_list = list(edges)
    arr = np.zeros((len(edge_list), 2), dtype=np.int64)

    for index, edge in enumerate(edge_list):
        try:
            u, v = edge
        except (TypeError, ValueError) as e:
            raise GraphFormatError(
                f"Edge {index} is not a (u, v) pair: {edge!r}", index=index
            ) from e
        if not (1 <= u <= n and 1 <= v <= n):
            raise GraphFormatError(
                f"Edge {index} ({u}, {v}) has an endpoint outside 1..{n}.",
                index=index,
            )
        arr[index] = (u, v)

    return DirectedMultigraph(n, arr)


def default_start(g: DirectedMultigraph) -> int:
    """
    Lowest vertex id with positive degree; NO_VERTEX if the graph has no edges.
    """
    total = g.out_degrees() + g.in_degrees()
    nonzero = np.flatnonzero(total)
    if len(nonzero) == 0:
        return NO_VERTEX
    return int(nonzero[0]) + 1


###############################################################################
# text format
#   n m
#   u v      (m lines)
# blank lines and lines starting with '#' are ignored


Source = Union[str, Path, TextIO]


def _open_source(source: Source):
    if hasattr(source, "read"):
        return source, False
    if str(source) == "-":
        return sys.stdin, False
    return open(source), True


def _data_lines(stream):
    for line_no, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield line_no, line


def _parse_pair(line, line_no):
    parts = line.split()
    if len(parts) != 2:
        raise GraphFormatError(
            f"Line {line_no}: expected two integers, got '{line}'.",
            line=line_no,
        )
    try:
        return int(parts[0]), int(parts[1])
    except ValueError as e:
        raise GraphFormatError(
            f"Line {line_no}: expected two integers, got '{line}'.",
            line=line_no,
        ) from e


def read_graph(source: Source) -> DirectedMultigraph:
    """
    Read a graph in the text format from a path, '-' (standard input) or an
    open text stream.
    """
    stream, close = _open_source(source)
    try:
        lines = _data_lines(stream)

        header = next(lines, None)
        if header is None:
            raise GraphFormatError("Missing 'n m' header line.", line=1)
        header_no, header_line = header
        n, m = _parse_pair(header_line, header_no)
        if n < 1 or m < 0:
            raise GraphFormatError(
                f"Line {header_no}: invalid header '{header_line}'.",
                line=header_no,
            )

        # grown line by line, the header count is not trusted for sizing
        edges = []
        count = 0
        for line_no, line in lines:
            if count == m:
                raise GraphFormatError(
                    f"Line {line_no}: more than {m} edge lines.", line=line_no
                )
            u, v = _parse_pair(line, line_no)
            if not (1 <= u <= n and 1 <= v <= n):
                raise GraphFormatError(
                    f"Line {line_no}: edge ({u}, {v}) has an endpoint "
                    f"outside 1..{n}.",
                    line=line_no,
                )
            edges.append((u, v))
            count += 1

        if count < m:
            raise GraphFormatError(
                f"Header announces {m} edges but only {count} were found.",
                line=header_no,
            )
    finally:
        if close:
            stream.close()

    arr = np.array(edges, dtype=np.int64).reshape(-1, 2)
    g = DirectedMultigraph(n, arr)
    logger.debug("Loaded graph with n=%d, m=%d", g.n, g.m)
    return g


def write_graph(g: DirectedMultigraph, stream: TextIO, comment=None):
    """
    Write g in the text format; edges keep their input order.
    """
    if comment:
        stream.write(f"# {comment}\n")
    stream.write(f"{g.n} {g.m}\n")
    for u, v in g.edges():
        stream.write(f"{u} {v}\n")


def read_cycle(source: Source) -> list[Edge]:
    """
    Read an edge sequence, one `u v` pair per line.
    """
    stream, close = _open_source(source)
    try:
        return [_parse_pair(line, no) for no, line in _data_lines(stream)]
    finally:
        if close:
            stream.close()
