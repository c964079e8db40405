import io

import pytest
from sqlalchemy import create_engine, select

from qsim.bench.bench_runner import CSV_COLUMNS, host_description, run_bench, write_bench_csv
from qsim.bench.workload import random_circuit, random_input
from qsim.storage_builder import BenchRun, get_database_url, get_db_session, record_bench_runs


def test_workload_is_deterministic():
    assert random_circuit(12, 50, seed=9) == random_circuit(12, 50, seed=9)
    assert random_circuit(12, 50, seed=9) != random_circuit(12, 50, seed=10)
    assert random_input(5, seed=1) == random_input(5, seed=1)
    assert random_input(5, seed=1).is_normalized()


def test_single_size_sweep_gives_one_row_with_blank_growth():
    records = run_bench(8, 8, 20, workers=1)
    assert len(records) == 1
    assert records[0].growth is None
    buf = io.StringIO()
    write_bench_csv(records, buf)
    header, row = buf.getvalue().splitlines()
    assert header.split(",") == CSV_COLUMNS
    fields = row.split(",")
    assert fields[:3] == ["8", "20", "1"]
    assert fields[5] == ""
    assert len(fields[6]) == 64


def test_hash_independent_of_workers():
    one = run_bench(6, 9, 30, workers=1, chunk_size=37)
    four = run_bench(6, 9, 30, workers=4, chunk_size=37, backend="thread")
    assert [r.output_hash for r in one] == [r.output_hash for r in four]
    assert all(r.growth is not None for r in four[1:])


def test_host_description_is_nonempty():
    assert host_description().strip()


def test_record_bench_runs_in_sqlite():
    engine = create_engine("sqlite://")
    records = run_bench(3, 4, 5, workers=1)
    assert record_bench_runs(records, "test-host", seed=0, engine=engine) == 2
    with get_db_session(engine) as db:
        rows = db.execute(select(BenchRun).order_by(BenchRun.num_qubits)).scalars().all()
        assert [r.num_qubits for r in rows] == [3, 4]
        assert rows[0].host == "test-host"
        assert rows[1].output_hash == records[1].output_hash


def test_database_url_from_environment(monkeypatch):
    for name in ("QSIM_DATABASE_URL", "DB_USER", "DB_NAME"):
        monkeypatch.delenv(name, raising=False)
    assert get_database_url().startswith("sqlite:///")
    monkeypatch.setenv("DB_USER", "bench")
    monkeypatch.setenv("DB_NAME", "qsim")
    assert get_database_url().startswith("mysql+pymysql://bench:")
    monkeypatch.setenv("QSIM_DATABASE_URL", "sqlite://")
    assert get_database_url() == "sqlite://"


def test_sweep_hash_identical_across_workers_at_eighteen_qubits():
    hashes = [run_bench(18, 18, 50, workers=w, seed=3, chunk_size=1 << 14, backend="thread")[0].output_hash
              for w in (1, 2, 4, 8)]
    assert len(set(hashes)) == 1


@pytest.mark.slow
def test_growth_per_qubit_in_expected_band():
    records = run_bench(16, 22, 50, workers=4, repeats=3, seed=0, chunk_size=1 << 16, backend="process")
    growth = [r.growth for r in records[1:]]
    assert all(1.5 < g < 4.5 for g in growth), growth
