import io

import pandas as pd
import pytest

from thrifty_euler.bench.bench_functions import list_runs, open_session
from thrifty_euler.bench.bench_mem import CSV_COLUMNS
from thrifty_euler.cli import main
from thrifty_euler.graph.graph_model import read_graph
from thrifty_euler.graph.validation import verify_cycle


def test_euler_fig1(fig1_path, capsys):
    assert main(["euler", "--input", str(fig1_path)]) == 0

    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 8
    assert lines[0] == "1 2"
    assert lines[-1] == "6 1"


def test_euler_stats(fig1_path, capsys):
    assert main(["euler", "--input", str(fig1_path), "--stats"]) == 0
    assert "# iterations=16 aux_bits=97" in capsys.readouterr().err


def test_euler_baseline(fig1_path, capsys, tmp_path):
    code = main(
        ["euler", "--input", str(fig1_path), "--algo", "baseline"]
    )
    assert code == 0

    cycle_path = tmp_path / "cycle.txt"
    cycle_path.write_text(capsys.readouterr().out)
    code = main(
        ["verify", "--input", str(fig1_path), "--cycle", str(cycle_path)]
    )
    assert code == 0
    assert capsys.readouterr().out.strip() == "Valid"


@pytest.mark.parametrize(
    "file_name,verdict",
    [
        ("imbalanced.txt", "DegreeImbalance"),
        ("disconnected.txt", "NotStronglyConnected"),
    ],
)
def test_euler_rejects(fixtures_dir, capsys, file_name, verdict):
    code = main(["euler", "--input", str(fixtures_dir / file_name)])

    assert code == 1
    captured = capsys.readouterr()
    assert captured.out == ""
    assert verdict in captured.err


def test_euler_without_validation(fixtures_dir, capsys):
    """The core guard still catches a graph the check was skipped for."""
    code = main(
        [
            "euler",
            "--input",
            str(fixtures_dir / "disconnected.txt"),
            "--no-validate",
        ]
    )
    assert code == 1
    assert "error:" in capsys.readouterr().err


def test_no_validate_still_refuses_imbalanced(fixtures_dir, capsys):
    code = main(
        [
            "euler",
            "--input",
            str(fixtures_dir / "imbalanced.txt"),
            "--no-validate",
        ]
    )
    assert code == 1
    captured = capsys.readouterr()
    assert captured.out == "1 2\n"
    assert "does not continue" in captured.err


def test_bad_input(fixtures_dir, capsys):
    code = main(["euler", "--input", str(fixtures_dir / "bad_edge.txt")])
    assert code == 2
    assert "Line 3" in capsys.readouterr().err


def test_oversized_header(tmp_path, capsys):
    path = tmp_path / "huge.txt"
    path.write_text("1 10000000000000\n1 1\n")

    assert main(["euler", "--input", str(path)]) == 2
    assert "only 1 were found" in capsys.readouterr().err


def test_missing_file(tmp_path, capsys):
    code = main(["euler", "--input", str(tmp_path / "absent.txt")])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_bad_start(fig1_path, capsys):
    assert main(["euler", "--input", str(fig1_path), "--start", "9"]) == 2


def test_usage_error():
    with pytest.raises(SystemExit) as excinfo:
        main(["euler"])
    assert excinfo.value.code == 2


def test_gen_euler_verify(tmp_path, capsys, monkeypatch):
    graph_path = tmp_path / "dbg.txt"
    code = main(
        ["gen", "--kind", "debruijn", "--k", "2", "--w", "2"]
        + ["--out", str(graph_path)]
    )
    assert code == 0
    g = read_graph(graph_path)
    assert (g.n, g.m) == (4, 8)

    assert main(["euler", "--input", str(graph_path)]) == 0
    cycle_text = capsys.readouterr().out
    assert len(cycle_text.splitlines()) == 8

    monkeypatch.setattr("sys.stdin", io.StringIO(cycle_text))
    assert main(["verify", "--input", str(graph_path)]) == 0
    assert capsys.readouterr().out.strip() == "Valid"


def test_verify_wrong_start(fig1_path, tmp_path, capsys):
    cycle_path = tmp_path / "cycle.txt"
    cycle_path.write_text("2 3\n3 4\n4 5\n5 2\n2 5\n5 6\n6 1\n1 2\n")

    code = main(
        ["verify", "--input", str(fig1_path), "--cycle", str(cycle_path)]
        + ["--start", "1"]
    )
    assert code == 1
    assert "WrongStart" in capsys.readouterr().out


def test_gen_to_stdout(capsys):
    assert main(["gen", "--kind", "random", "--n", "5", "--m", "12"]) == 0

    out = capsys.readouterr().out
    g = read_graph(io.StringIO(out))
    assert (g.n, g.m) == (5, 12)
    assert "random_eulerian" in out


def test_gen_missing_parameter(capsys):
    assert main(["gen", "--kind", "debruijn", "--k", "2"]) == 2
    assert "missing" in capsys.readouterr().err


def test_trace_triangle(fixtures_dir, capsys):
    path = str(fixtures_dir / "triangle.txt")
    assert main(["trace", "--input", path]) == 0

    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "1 Forward 3 1 Black Red 3"
    assert lines[-1] == "9 Terminate - - - - 1"

    assert main(["trace", "--input", path, "--check-invariants"]) == 0
    assert capsys.readouterr().out.splitlines() == lines


def test_bench(fixtures_dir, tmp_path, capsys):
    out_path = tmp_path / "rows.csv"
    db_path = tmp_path / "history.db"
    code = main(
        ["bench", "--spec", str(fixtures_dir / "example_bench.yaml")]
        + ["--out", str(out_path), "--db", str(db_path)]
    )
    assert code == 0

    df = pd.read_csv(out_path)
    assert list(df.columns) == CSV_COLUMNS
    assert len(df) == 8
    assert df["verified"].all()
    ring = df[(df["graph_id"] == "ring-50") & (df["algo"] == "baseline")]
    assert ring["peak_stack"].tolist() == [51]

    session = open_session(db_path)
    assert list_runs(session) == ["small sweep"]
    session.close()


def test_bench_rejects_spec(tmp_path, capsys):
    spec_path = tmp_path / "bench.yaml"
    spec_path.write_text("graphs: []\n")

    code = main(
        ["bench", "--spec", str(spec_path), "--out", str(tmp_path / "x.csv")]
    )
    assert code == 2
    assert "No graphs provided" in capsys.readouterr().err


def test_output_is_deterministic(fixtures_dir, capsys):
    g_path = str(fixtures_dir / "fig1.txt")
    outputs = []
    for _ in range(5):
        assert main(["euler", "--input", g_path]) == 0
        outputs.append(capsys.readouterr().out)
    assert len(set(outputs)) == 1

    g = read_graph(g_path)
    edges = [tuple(map(int, x.split())) for x in outputs[0].splitlines()]
    assert verify_cycle(g, edges, 1).ok
