from datetime import datetime

from sqlalchemy import BigInteger, Boolean, Column, DateTime, Integer, String
from sqlalchemy.orm import declarative_base

# peak_stack of rows from the space-efficient traversal
NO_STACK = None

Base = declarative_base()


class BenchRunDB(Base):
    __tablename__ = "bench_runs"

    id = Column(Integer, primary_key=True, autoincrement=True)

    # indexed to fetch whole runs at once
    run_name = Column(String, index=True)
    created = Column(DateTime, default=datetime.now)

    graph_id = Column(String)
    n = Column(Integer)
    m = Column(BigInteger)
    algo = Column(String)

    iterations = Column(BigInteger)
    aux_bits = Column(BigInteger)
    peak_stack = Column(BigInteger, nullable=True, default=NO_STACK)
    elapsed_ns = Column(BigInteger)
    verified = Column(Boolean, default=False)

    def __repr__(self):
        return (
            f"{self.algo} on {self.graph_id} (n={self.n}, m={self.m}) "
            f"from run {self.run_name}"
        )
