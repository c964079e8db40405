import datetime
import os
from contextlib import contextmanager
from typing import Iterable, List, Optional

from sqlalchemy import Column, DateTime, Float, Integer, String, create_engine
from sqlalchemy.engine import Engine
from sqlalchemy.orm import Session, declarative_base, sessionmaker

from .env_manager import DEFAULT_DATABASE_URL

# 创建 Base 类
Base = declarative_base()


class BenchRun(Base):
    __tablename__ = "qsim_bench_run"
    id = Column(Integer, primary_key=True)
    num_qubits = Column(Integer, nullable=False)
    steps = Column(Integer, nullable=False)
    workers = Column(Integer, nullable=False)
    chunk_size = Column(Integer, nullable=False)
    seconds = Column(Float, nullable=False)
    growth = Column(Float)
    output_hash = Column(String(64))
    seed = Column(Integer)
    host = Column(String(255))
    create_time = Column(DateTime, default=datetime.datetime.now)


def get_db_user():
    return os.getenv("DB_USER")


def get_db_password():
    return os.getenv("DB_PASSWORD", "")


def get_db_host():
    return os.getenv("DB_HOST", "127.0.0.1")


def get_db_port():
    return os.getenv("DB_PORT", "3306")


def get_db_name():
    return os.getenv("DB_NAME")


def get_database_url() -> str:
    url = os.getenv("QSIM_DATABASE_URL")
    if url:
        return url
    if get_db_user() and get_db_name():
        return f"mysql+pymysql://{get_db_user()}:{get_db_password()}@{get_db_host()}:{get_db_port()}/{get_db_name()}"
    return DEFAULT_DATABASE_URL


def get_engine(url: Optional[str] = None) -> Engine:
    return create_engine(url or get_database_url(), pool_pre_ping=True)


def init_db(engine: Engine) -> None:
    Base.metadata.create_all(bind=engine)


@contextmanager
def get_db_session(engine: Optional[Engine] = None):
    SessionLocal = sessionmaker(bind=engine or get_engine())
    db: Session = SessionLocal()
    try:
        yield db
        db.commit()
    except Exception:
        db.rollback()
        raise
    finally:
        db.close()


def record_bench_runs(records: Iterable, host: str, seed: Optional[int] = None,
                      engine: Optional[Engine] = None) -> int:
    """Persist BenchRecords; returns the number of rows written."""
    engine = engine or get_engine()
    init_db(engine)
    rows: List[BenchRun] = [
        BenchRun(num_qubits=r.num_qubits, steps=r.steps, workers=r.workers, chunk_size=r.chunk_size,
                 seconds=r.elapsed_seconds, growth=r.growth, output_hash=r.output_hash,
                 seed=seed, host=host)
        for r in records
    ]
    with get_db_session(engine) as db:
        db.add_all(rows)
    return len(rows)
