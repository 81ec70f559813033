try:
    from ._version import version as __version__
except ImportError:
    __version__ = "unknown"

from thrifty_euler.algo.euler_core import NotEulerianDetected, open_run, run
from thrifty_euler.graph.graph_model import (
    DirectedMultigraph,
    build_from_edge_list,
    read_graph,
)
from thrifty_euler.graph.validation import check_eulerian, verify_cycle

__all__ = (
    "DirectedMultigraph",
    "NotEulerianDetected",
    "build_from_edge_list",
    "check_eulerian",
    "open_run",
    "read_graph",
    "run",
    "verify_cycle",
)
