import logging
from dataclasses import dataclass, field
from typing import Optional

import yaml
from sqlalchemy import create_engine
from sqlalchemy.exc import SQLAlchemyError
from sqlalchemy.orm import sessionmaker

from thrifty_euler.bench.bench_mem import ALGORITHMS
from thrifty_euler.graph.generators import KIND_ALIASES, KIND_PARAMS, GenSpec

logger = logging.getLogger(__name__)


@dataclass
class BenchSpec:
    name: str = "Unnamed"
    algorithms: list = field(default_factory=lambda: ["space"])
    repeats: int = 1
    graphs: list[GenSpec] = field(default_factory=list)
    database_path: Optional[str] = None


def _is_int(x):
    return isinstance(x, int) and not isinstance(x, bool)


def validate_bench_spec(file_path):
    """
    Test whether the bench spec file is executable.
    """

    # load the bench spec
    try:
        with open(file_path) as spec_file:
            config = yaml.safe_load(spec_file)
    except OSError as exc:
        return False, f"Error opening the bench spec: {exc}"
    except yaml.YAMLError as exc:
        return False, f"Error loading the bench spec: {exc}"

    if not isinstance(config, dict):
        return False, "The bench spec is not a mapping."

    # test the settings
    settings = config.get("bench_settings") or {}
    for algo in settings.get("algorithms", ["space"]):
        if algo not in ALGORITHMS:
            return (
                False,
                f'Requested algorithm "{algo}" is not implemented. '
                "Use 'space' or 'baseline'.",
            )
    repeats = settings.get("repeats", 1)
    if not _is_int(repeats) or repeats < 1:
        return False, "Repeats must be a positive integer."

    # test the database path
    if "database" in config:
        database_path = (config["database"] or {}).get("path")
        if database_path is None:
            return False, "The database path is missing in the bench spec."
        status, msg = test_database_connection(database_path)
        if status is False:
            return False, msg

    # test the graphs
    if not config.get("graphs"):
        return False, "No graphs provided in the bench spec."

    for index, graph in enumerate(config["graphs"]):
        if not isinstance(graph, dict) or "kind" not in graph:
            return False, f"Graph {index} has no kind."
        kind = KIND_ALIASES.get(graph["kind"])
        if kind is None:
            return (
                False,
                f'Graph {index}: unknown kind "{graph["kind"]}".',
            )
        for param in KIND_PARAMS[kind] + ("seed",):
            if param == "seed" and param not in graph:
                continue
            if param not in graph:
                return (
                    False,
                    f'Graph {index}: parameter "{param}" is missing '
                    f"for kind {kind}.",
                )
            if not _is_int(graph[param]):
                return (
                    False,
                    f'Graph {index}: parameter "{param}" must be an integer.',
                )

    # test unique graph ids
    status, output = check_unique_ids(config)
    if status is False:
        return False, output

    return True, "Bench spec is executable."


def test_database_connection(database_path):
    """
    Test whether the database file is usable.
    """

    try:
        engine = create_engine(f"sqlite:///{database_path}")
        with engine.connect():
            pass
        sessionmaker(bind=engine)()

        return True, "Database connection successful."
    except SQLAlchemyError as e:
        return False, f"Database connection failed: {e}"


def graph_ids(config):
    """
    Ids of the graphs in a loaded bench spec, '<kind>-<index>' when not given.
    """
    return [
        str(g["id"]) if "id" in g else f"{g['kind']}-{index}"
        for index, g in enumerate(config["graphs"])
    ]


def check_unique_ids(config):
    """
    Check that the graph ids are unique.
    """
    id_list = graph_ids(config)

    if len(id_list) == len(set(id_list)):
        return True, id_list
    else:
        return False, "Graph ids are not unique."


def load_bench_spec(file_path) -> BenchSpec:
    """
    Validate and load a bench spec.
    Raises ValueError with the validation message if it is not executable.
    """
    status, msg = validate_bench_spec(file_path)
    if status is False:
        logger.warning("Bench spec %s rejected: %s", file_path, msg)
        raise ValueError(msg)

    with open(file_path) as spec_file:
        config = yaml.safe_load(spec_file)

    settings = config.get("bench_settings") or {}
    graphs = [
        GenSpec(
            kind=g["kind"],
            params={
                p: g[p]
                for p in KIND_PARAMS[KIND_ALIASES[g["kind"]]]
            },
            seed=g.get("seed", 0),
            graph_id=graph_id,
        )
        for g, graph_id in zip(config["graphs"], graph_ids(config))
    ]

    return BenchSpec(
        name=settings.get("name", "Unnamed"),
        algorithms=list(settings.get("algorithms", ["space"])),
        repeats=settings.get("repeats", 1),
        graphs=graphs,
        database_path=(config.get("database") or {}).get("path"),
    )
