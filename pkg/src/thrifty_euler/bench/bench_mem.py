"""
Benchmark harness: runs the space-efficient traversal and the stack-based
baseline on generated graphs and reports loop iterations, modelled working
memory in bits and wall time.

Memory is accounted from declared field widths, not measured.
"""

import logging
import time
from dataclasses import asdict, dataclass
from typing import Optional

import pandas as pd

from thrifty_euler.algo.baseline import run_baseline
from thrifty_euler.algo.euler_core import (
    SCALAR_REGISTERS,
    NotEulerianDetected,
    counter_width,
    run,
)
from thrifty_euler.algo.sinks import ListSink, NullSink
from thrifty_euler.graph.generators import GenSpec, generate
from thrifty_euler.graph.graph_model import DirectedMultigraph
from thrifty_euler.graph.validation import check_eulerian, verify_cycle

logger = logging.getLogger(__name__)

ALGORITHMS = ("space", "baseline")

CSV_COLUMNS = [
    "graph_id",
    "n",
    "m",
    "algo",
    "iterations",
    "aux_bits",
    "peak_stack",
    "elapsed_ns",
    "verified",
]


def lg_ceil(x: int) -> int:
    """ceil(lg x) for x >= 1."""
    return (x - 1).bit_length()


def account_aux_bits(n: int, m: int) -> int:
    """
    Working bits of the space-efficient traversal:
    next_index and back at ceil(lg(2m + 2)) bits per vertex, visited and
    skipped at one bit per vertex, plus the scalar registers.
    """
    w = lg_ceil(2 * m + 2)
    return 2 * n * w + 2 * n + SCALAR_REGISTERS * w


def account_baseline_bits(n: int, m: int, peak_stack: int) -> int:
    """
    Working bits of the baseline: the vertex stack at its peak, one
    out-list cursor per vertex and the m reversed edges it buffers.
    """
    vertex_bits = lg_ceil(n + 1)
    return (
        peak_stack * vertex_bits
        + n * counter_width(m)
        + m * 2 * vertex_bits
    )


@dataclass
class BenchRow:
    graph_id: str
    n: int
    m: int
    algo: str
    iterations: int
    aux_bits: int
    peak_stack: Optional[int]
    elapsed_ns: int
    verified: bool


def check_algorithm(algo: str):
    if algo not in ALGORITHMS:
        raise ValueError(
            f"Unknown algorithm '{algo}'. Use 'space' or 'baseline'."
        )


def run_algorithm(g: DirectedMultigraph, algo: str, v0=None):
    """
    Run one algorithm to completion.
    output:
        edges - the cycle
        iterations - main loop iterations
        peak_stack - None for the space-efficient traversal
        aux_bits - modelled working bits
        start - start vertex actually used
    """
    check_algorithm(algo)
    if algo == "space":
        sink = ListSink()
        stats = run(g, v0, sink)
        return (
            sink.edges,
            stats.loop_iterations,
            None,
            stats.aux_bits,
            stats.start,
        )

    result = run_baseline(g, v0)
    aux_bits = account_baseline_bits(g.n, g.m, result.peak_stack)
    return (
        result.edges,
        result.loop_iterations,
        result.peak_stack,
        aux_bits,
        result.start,
    )


def _time_algorithm(g, algo, repeats):
    """Best wall time of `repeats` runs, output discarded."""
    best = None
    for _ in range(repeats):
        if algo == "space":
            elapsed = run(g, None, NullSink()).elapsed_ns
        else:
            t_start = time.perf_counter_ns()
            run_baseline(g)
            elapsed = time.perf_counter_ns() - t_start
        best = elapsed if best is None else min(best, elapsed)
    return best


def bench_graph(
    g: DirectedMultigraph, graph_id: str, algo: str, repeats: int = 1
) -> Optional[BenchRow]:
    """
    One benchmark row. The output is verified first; a row whose output
    fails verification is dropped (None) with an error logged.
    """
    check_algorithm(algo)
    try:
        edges, iterations, peak, aux_bits, v0 = run_algorithm(g, algo)
    except NotEulerianDetected as e:
        logger.error("Row %s/%s aborted: %s", graph_id, algo, e)
        return None

    verdict = verify_cycle(g, edges, v0)
    if not verdict.ok:
        logger.error("Row %s/%s aborted: %s", graph_id, algo, verdict)
        return None
    del edges

    elapsed = _time_algorithm(g, algo, max(1, repeats))
    return BenchRow(
        graph_id=graph_id,
        n=g.n,
        m=g.m,
        algo=algo,
        iterations=iterations,
        aux_bits=aux_bits,
        peak_stack=peak,
        elapsed_ns=elapsed,
        verified=True,
    )


def bench(
    specs: list[GenSpec], algos=("space",), repeats: int = 1
) -> list[BenchRow]:
    """
    Generate every graph in specs and benchmark each algorithm on it.
    Rows run one after another.
    """
    for algo in algos:
        check_algorithm(algo)

    rows = []
    for spec in specs:
        g = generate(spec)
        verdict = check_eulerian(g)
        if not verdict.ok:
            logger.error("Graph %s skipped: %s", spec.graph_id, verdict)
            continue

        for algo in algos:
            logger.info("Bench %s with %s (m=%d)", spec.graph_id, algo, g.m)
            row = bench_graph(g, spec.graph_id, algo, repeats)
            if row is not None:
                rows.append(row)
                logger.info(
                    "Bench %s with %s done in %d ns",
                    spec.graph_id,
                    algo,
                    row.elapsed_ns,
                )
    return rows


def rows_to_frame(rows: list[BenchRow]) -> pd.DataFrame:
    df = pd.DataFrame([asdict(r) for r in rows], columns=CSV_COLUMNS)
    df["peak_stack"] = df["peak_stack"].astype("Int64")
    return df


def write_csv(rows: list[BenchRow], path) -> pd.DataFrame:
    df = rows_to_frame(rows)
    df.to_csv(path, index=False)
    return df


def doubling_ratios(frame: pd.DataFrame) -> pd.DataFrame:
    """
    Elapsed-time ratio between rows of the same algorithm (and family, if
    a `family` column is present) whose m doubles.

    Parameters
    ----------
    frame : pd.DataFrame
        Bench rows, as returned by rows_to_frame or read from a bench CSV.

    Returns
    -------
    pd.DataFrame
        Columns algo, m_from, m_to, ratio (plus family when given).
    """
    keys = ["family", "algo"] if "family" in frame.columns else ["algo"]
    out_columns = keys + ["m_from", "m_to", "ratio"]

    records = []
    for key, group in frame.groupby(keys, sort=True):
        key = key if isinstance(key, tuple) else (key,)
        # several rows at one m: keep the fastest
        best = group.groupby("m")["elapsed_ns"].min().sort_index()
        for m_from, m_to in zip(best.index[:-1], best.index[1:]):
            if m_to != 2 * m_from:
                continue
            ratio = best[m_to] / best[m_from] if best[m_from] > 0 else None
            records.append((*key, int(m_from), int(m_to), ratio))

    return pd.DataFrame.from_records(records, columns=out_columns)
