"""
Command line front end.

    thrifty-euler euler  --input F [--start V] [--algo space|baseline]
    thrifty-euler verify --input F --cycle C [--start V]
    thrifty-euler gen    --kind cycles|debruijn|random|single --seed S ...
    thrifty-euler trace  --input F [--start V] [--check-invariants]
    thrifty-euler bench  --spec FILE --out CSV [--db FILE]

Standard output carries data only, diagnostics go to standard error.
Exit codes: 0 success, 1 failed verdict, 2 usage, input or I/O error.
"""

import argparse
import logging
import sys
from typing import Optional

from thrifty_euler.algo.euler_core import NotEulerianDetected, run
from thrifty_euler.algo.reference_tracer import (
    InvariantViolation,
    format_event,
    iter_checked_trace,
    iter_trace,
)
from thrifty_euler.algo.sinks import LineSink
from thrifty_euler.bench.bench_functions import open_session, save_rows
from thrifty_euler.bench.bench_mem import (
    ALGORITHMS,
    bench,
    run_algorithm,
    write_csv,
)
from thrifty_euler.bench.config_functions import load_bench_spec
from thrifty_euler.graph.generators import (
    KIND_ALIASES,
    KIND_PARAMS,
    GenSpec,
    generate,
)
from thrifty_euler.graph.graph_model import (
    GraphFormatError,
    read_cycle,
    read_graph,
    write_graph,
)
from thrifty_euler.graph.validation import check_eulerian, verify_cycle

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERDICT = 1
EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="thrifty-euler",
        description="Eulerian cycles of directed multigraphs in O(n lg m) "
        "bits of working memory",
    )
    p.add_argument(
        "-v", "--verbose", action="store_true", help="Debug logging"
    )
    sub = p.add_subparsers(dest="command", required=True)

    euler = sub.add_parser("euler", help="Write an Eulerian cycle")
    euler.add_argument(
        "--input", required=True, help="Graph file, - for stdin"
    )
    euler.add_argument("--start", type=int, help="Start vertex")
    euler.add_argument("--algo", choices=ALGORITHMS, default="space")
    euler.add_argument(
        "--no-validate",
        action="store_true",
        help="Skip the Eulerian check before the run",
    )
    euler.add_argument(
        "--stats",
        action="store_true",
        help="Report iterations and working bits on stderr",
    )

    verify = sub.add_parser("verify", help="Check a cycle against a graph")
    verify.add_argument("--input", required=True, help="Graph file")
    verify.add_argument(
        "--cycle", default="-", help="Cycle file, - for stdin (default)"
    )
    verify.add_argument("--start", type=int, help="Expected start vertex")

    gen = sub.add_parser("gen", help="Generate an Eulerian graph")
    gen.add_argument(
        "--kind", required=True, choices=sorted(KIND_ALIASES.keys())
    )
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--n", type=int, help="Vertices")
    gen.add_argument(
        "--k", type=int, help="Cycles (cycles) or alphabet size (debruijn)"
    )
    gen.add_argument("--max-len", type=int, help="Longest cycle (cycles)")
    gen.add_argument("--w", type=int, help="Word length (debruijn)")
    gen.add_argument("--m", type=int, help="Edges (random, single)")
    gen.add_argument("--out", default="-", help="Output file, - for stdout")

    tr = sub.add_parser("trace", help="Print the colored traversal")
    tr.add_argument("--input", required=True, help="Graph file, - for stdin")
    tr.add_argument("--start", type=int, help="Start vertex")
    tr.add_argument(
        "--check-invariants",
        action="store_true",
        help="Check every invariant after every step",
    )

    bn = sub.add_parser("bench", help="Run a YAML bench spec")
    bn.add_argument("--spec", required=True, help="Bench spec (YAML)")
    bn.add_argument("--out", required=True, help="CSV output")
    bn.add_argument(
        "--db", help="SQLite history, overrides the bench spec database"
    )

    return p


def _cmd_euler(args) -> int:
    g = read_graph(args.input)

    if not args.no_validate:
        verdict = check_eulerian(g)
        if not verdict.ok:
            print(f"Not Eulerian: {verdict}", file=sys.stderr)
            return EXIT_VERDICT

    out = sys.stdout
    if args.algo == "space":
        stats = run(g, args.start, LineSink(out))
        iterations, aux_bits = stats.loop_iterations, stats.aux_bits
    else:
        edges, iterations, _, aux_bits, _ = run_algorithm(
            g, "baseline", args.start
        )
        sink = LineSink(out)
        for u, v in edges:
            sink.write(u, v)
        sink.close()

    if args.stats:
        print(
            f"# iterations={iterations} aux_bits={aux_bits}", file=sys.stderr
        )
    return EXIT_OK


def _cmd_verify(args) -> int:
    g = read_graph(args.input)
    seq = read_cycle(args.cycle)
    verdict = verify_cycle(g, seq, args.start)
    print(verdict)
    return EXIT_OK if verdict.ok else EXIT_VERDICT


def _cmd_gen(args) -> int:
    kind = KIND_ALIASES[args.kind]
    given = {
        "n": args.n,
        "k": args.k,
        "max_len": args.max_len,
        "w": args.w,
        "m": args.m,
    }
    params = {
        p: given[p] for p in KIND_PARAMS[kind] if given[p] is not None
    }
    spec = GenSpec(kind=kind, params=params, seed=args.seed)
    g = generate(spec)

    comment = spec.graph_id
    if args.out == "-":
        write_graph(g, sys.stdout, comment=comment)
    else:
        with open(args.out, "w") as stream:
            write_graph(g, stream, comment=comment)
    return EXIT_OK


def _cmd_trace(args) -> int:
    g = read_graph(args.input)
    steps = iter_checked_trace if args.check_invariants else iter_trace
    out = sys.stdout
    for event, _ in steps(g, args.start):
        out.write(format_event(event) + "\n")
    out.flush()
    return EXIT_OK


def _cmd_bench(args) -> int:
    spec = load_bench_spec(args.spec)
    rows = bench(spec.graphs, spec.algorithms, spec.repeats)
    write_csv(rows, args.out)

    database_path = args.db or spec.database_path
    if database_path is not None:
        session = open_session(database_path)
        save_rows(session, rows, spec.name)
        session.close()

    expected = len(spec.graphs) * len(spec.algorithms)
    if len(rows) < expected:
        print(
            f"{expected - len(rows)} of {expected} rows failed verification.",
            file=sys.stderr,
        )
        return EXIT_VERDICT
    return EXIT_OK


COMMANDS = {
    "euler": _cmd_euler,
    "verify": _cmd_verify,
    "gen": _cmd_gen,
    "trace": _cmd_trace,
    "bench": _cmd_bench,
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )

    logger.debug("Running %s", args.command)
    try:
        return COMMANDS[args.command](args)
    except GraphFormatError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (NotEulerianDetected, InvariantViolation) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VERDICT
    except (OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
