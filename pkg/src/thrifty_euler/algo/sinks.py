"""
Write-only consumers of the edge stream.

A sink only needs `write(u, v)`; `close()` is called once the run ends.
"""

from typing import Protocol, TextIO


class EdgeSink(Protocol):
    def write(self, u: int, v: int) -> None: ...

    def close(self) -> None: ...


class ListSink:
    """Collects edges in memory (tests, verification)."""

    def __init__(self):
        self.edges = []

    def write(self, u, v):
        self.edges.append((u, v))

    def close(self):
        pass


class LineSink:
    """
    Writes `u v` lines to a text stream.
    The stream is flushed every `flush_every` edges and on close, so a
    reader sees the cycle while it is being computed.
    """

    def __init__(self, stream: TextIO, flush_every: int = 1024):
        if flush_every < 1:
            raise ValueError("flush_every must be at least 1.")
        self.stream = stream
        self.flush_every = flush_every
        self.count = 0

    def write(self, u, v):
        self.stream.write(f"{u} {v}\n")
        self.count += 1
        if self.count % self.flush_every == 0:
            self.stream.flush()

    def close(self):
        self.stream.flush()


class NullSink:
    """Discards edges, counts them (benchmarks)."""

    def __init__(self):
        self.count = 0

    def write(self, u, v):
        self.count += 1

    def close(self):
        pass
