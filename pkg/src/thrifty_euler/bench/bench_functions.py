import logging

import pandas as pd
from sqlalchemy import create_engine, func
from sqlalchemy.orm import sessionmaker

from thrifty_euler.bench.bench_mem import CSV_COLUMNS, BenchRow
from thrifty_euler.bench.bench_model import Base, BenchRunDB

logger = logging.getLogger(__name__)


def open_session(database_path):
    """
    Session on the SQLite bench history; tables are created if missing.
    """
    engine = create_engine(f"sqlite:///{database_path}")
    Base.metadata.create_all(engine)
    return sessionmaker(bind=engine)()


def save_rows(session, rows: list[BenchRow], run_name: str) -> int:
    """
    Append bench rows under run_name.
    input:
        session
        rows - verified BenchRow objects
        run_name - label shared by all rows of one bench invocation
    output:
        number of rows stored
    """
    records = [
        BenchRunDB(
            run_name=run_name,
            graph_id=r.graph_id,
            n=r.n,
            m=r.m,
            algo=r.algo,
            iterations=r.iterations,
            aux_bits=r.aux_bits,
            peak_stack=r.peak_stack,
            elapsed_ns=r.elapsed_ns,
            verified=r.verified,
        )
        for r in rows
    ]
    session.add_all(records)
    session.commit()

    logger.info("Stored %d rows for run '%s'", len(records), run_name)
    return len(records)


def load_rows(session, run_name=None) -> pd.DataFrame:
    """
    Stored rows as a data frame with the bench CSV columns plus run_name
    and created; all runs if run_name is None.
    """
    query = session.query(BenchRunDB)
    if run_name is not None:
        query = query.filter(BenchRunDB.run_name == run_name)
    query = query.order_by(BenchRunDB.id)

    df = pd.read_sql(query.statement, session.bind)
    df["peak_stack"] = df["peak_stack"].astype("Int64")
    df["verified"] = df["verified"].astype(bool)

    return df[["run_name", "created"] + CSV_COLUMNS]


def list_runs(session) -> list[str]:
    """Names of the stored runs, oldest first."""
    query = (
        session.query(BenchRunDB.run_name)
        .group_by(BenchRunDB.run_name)
        .order_by(func.min(BenchRunDB.id))
    )
    return [x[0] for x in query.all()]
