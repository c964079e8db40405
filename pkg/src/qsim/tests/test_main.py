import pytest

from qsim.interfaces.run_session import RunStatus
from qsim.main import EXIT_INPUT, EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, main
from qsim.session.session_manager import FileSessionManager
from qsim.tests.conftest import load_resource
from qsim.formats.circuit_format import serialize_circuit
from qsim.bench.workload import random_circuit, random_input

CNOT = "qubits 3\ninit 1 0 0 1 0\ninit 2 0 0 1 0\nx 1 c 2\n"


@pytest.fixture(autouse=True)
def quiet_env(monkeypatch, tmp_path):
    monkeypatch.setenv("QSIM_BACKEND", "thread")
    monkeypatch.setenv("QSIM_WORKERS", "2")
    monkeypatch.setenv("QSIM_SESSION_DIR", str(tmp_path / "sessions"))
    monkeypatch.delenv("QSIM_MAX_EXPLICIT_QUBITS", raising=False)


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_run_writes_amplitudes_and_report(tmp_path, capsys):
    circuit = write(tmp_path, "cnot.qc", CNOT)
    out = str(tmp_path / "out.txt")
    assert main(["run", "--circuit", circuit, "--out", out, "--chunk-size", "3",
                 "--post", "--report-format", "kv"]) == EXIT_OK
    with open(out, encoding="utf-8") as f:
        lines = f.read().splitlines()
    assert len(lines) == 8
    assert lines[2] == "2 1 0"
    assert "top.0=2:1" in capsys.readouterr().out


def test_run_window_binary(tmp_path):
    circuit = write(tmp_path, "cnot.qc", CNOT)
    out = str(tmp_path / "out.bin")
    assert main(["run", "--circuit", circuit, "--start", "2", "--len", "4",
                 "--format", "binary", "--out", out]) == EXIT_OK
    with open(out, "rb") as f:
        assert len(f.read()) == 16 + 16 * 4


@pytest.mark.parametrize("argv_tail, text", [
    (["--start", "6", "--len", "4"], CNOT),
    ([], "qubits 3\nx 4\n"),
    ([], "qubits 3\nfrobnicate 1\n"),
])
def test_run_input_errors(tmp_path, argv_tail, text):
    circuit = write(tmp_path, "c.qc", text)
    assert main(["run", "--circuit", circuit] + argv_tail) == EXIT_INPUT


def test_missing_circuit_file(tmp_path):
    assert main(["run", "--circuit", str(tmp_path / "nope.qc")]) == EXIT_INPUT


def test_usage_errors(tmp_path):
    with pytest.raises(SystemExit) as e:
        main(["run", "--workers", "0"])
    assert e.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as e:
        main(["teleport"])
    assert e.value.code == EXIT_USAGE
    assert main(["run"]) == EXIT_USAGE
    assert main(["verify"]) == EXIT_USAGE
    assert main(["bench", "--min-qubits", "5", "--max-qubits", "4"]) == EXIT_USAGE


def test_compile_and_verify_sparse(tmp_path):
    circuit = write(tmp_path, "perm.qc", serialize_circuit(load_resource("signed_permutation.qc")[0]))
    sparse = str(tmp_path / "perm.sparse")
    assert main(["compile", "--circuit", circuit, "--out", sparse]) == EXIT_OK
    with open(sparse, encoding="utf-8") as f:
        assert f.read().splitlines() == ["sparse-u v1 dim=4", "0 3 1 0", "1 0 1 0", "2 2 1 0", "3 1 -1 0"]
    assert main(["verify", "--sparse", sparse]) == EXIT_OK

    binary = str(tmp_path / "perm.bin")
    assert main(["compile", "--circuit", circuit, "--out", binary, "--binary"]) == EXIT_OK
    assert main(["verify", "--sparse", binary]) == EXIT_OK


def test_corrupted_sparse_fails_verification(tmp_path):
    sparse = write(tmp_path, "bad.sparse", "sparse-u v1 dim=4\n0 3 1 0\n1 0 1 0\n2 3 1 0\n3 1 -1 0\n")
    assert main(["verify", "--sparse", sparse]) == EXIT_RUNTIME
    garbage = write(tmp_path, "garbage.sparse", "hello\n")
    assert main(["verify", "--sparse", garbage]) == EXIT_INPUT


def test_compile_over_cap_is_input_error(tmp_path):
    circuit = write(tmp_path, "big.qc", "qubits 27\nx 1\n")
    assert main(["compile", "--circuit", circuit, "--out", str(tmp_path / "big.sparse")]) == EXIT_INPUT
    assert not (tmp_path / "big.sparse").exists()


def test_verify_circuit_against_dense(tmp_path, capsys):
    circuit = write(tmp_path, "r.qc", serialize_circuit(random_circuit(6, 40, seed=2), random_input(6, seed=2)))
    assert main(["verify", "--circuit", circuit, "--against-dense"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "[pass] dense oracle" in out
    assert "FAIL" not in out


def test_bench_csv(tmp_path):
    csv_path = tmp_path / "bench.csv"
    assert main(["bench", "--min-qubits", "4", "--max-qubits", "6", "--steps", "10",
                 "--workers", "1", "--csv", str(csv_path)]) == EXIT_OK
    lines = csv_path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "M,steps,W,chunk,seconds,growth,output_hash"
    assert [line.split(",")[0] for line in lines[1:]] == ["4", "5", "6"]


def test_resume_completes_interrupted_run(tmp_path, capsys):
    text = serialize_circuit(random_circuit(7, 30, seed=4), random_input(7, seed=4))
    circuit = write(tmp_path, "r.qc", text)
    full = str(tmp_path / "full.txt")
    assert main(["run", "--circuit", circuit, "--out", full, "--chunk-size", "16"]) == EXIT_OK
    with open(full, encoding="utf-8") as f:
        expected = f.read().splitlines()

    # simulate a run that stopped after delivering [0, 48)
    partial = str(tmp_path / "partial.txt")
    with open(partial, "w", encoding="utf-8") as f:
        f.write("\n".join(expected[:48]) + "\n")
    manager = FileSessionManager(str(tmp_path / "sessions"))
    context = manager.create_session(circuit, partial, "text", 0, 128, 16)
    context.next_start = 48
    context.status = RunStatus.FAILED
    manager.save_session(context)

    assert main(["run", "--resume", context.run_id, "--session-storage", "file"]) == EXIT_OK
    with open(partial, encoding="utf-8") as f:
        assert f.read().splitlines() == expected
    assert manager.load_session(context.run_id).status is RunStatus.COMPLETED

    assert main(["sessions"]) == EXIT_OK
    assert context.run_id in capsys.readouterr().out
    assert main(["run", "--resume", "missing", "--session-storage", "file"]) == EXIT_USAGE


def test_empty_circuit_run_equals_input_product(tmp_path):
    circuit = write(tmp_path, "empty.qc", "qubits 2\ninit 1 0.6 0 0.8 0\n")
    out = str(tmp_path / "out.txt")
    assert main(["run", "--circuit", circuit, "--out", out]) == EXIT_OK
    with open(out, encoding="utf-8") as f:
        lines = f.read().splitlines()
    assert lines == ["0 0.59999999999999998 0", "1 0.80000000000000004 0", "2 0 0", "3 0 0"]


def test_compile_cnot_is_self_transpose(tmp_path, capsys):
    circuit = write(tmp_path, "cnot.qc", CNOT)
    sparse = str(tmp_path / "cnot.sparse")
    assert main(["compile", "--circuit", circuit, "--out", sparse]) == EXIT_OK
    assert "self_transpose=True" in capsys.readouterr().out
    with open(sparse, encoding="utf-8") as f:
        assert len(f.read().splitlines()) == 9


def test_hostile_sparse_header_is_input_error(tmp_path):
    huge = write(tmp_path, "huge.sparse", "sparse-u v1 dim=99999999999999999\n0 0 1 0\n")
    assert main(["verify", "--sparse", huge]) == EXIT_INPUT
    wide = write(tmp_path, "wide.sparse", f"sparse-u v1 dim={1 << 60}\n0 0 1 0\n")
    assert main(["verify", "--sparse", wide]) == EXIT_INPUT


def test_circuit_errors_name_their_kind(tmp_path, capsys):
    semantic = write(tmp_path, "s.qc", "qubits 2\nx 3\n")
    assert main(["verify", "--circuit", semantic]) == EXIT_INPUT
    assert "Circuit semantic error: line 2" in capsys.readouterr().err
    syntax = write(tmp_path, "y.qc", "qubits 2\nbogus 1\n")
    assert main(["verify", "--circuit", syntax]) == EXIT_INPUT
    assert "Circuit syntax error: line 2" in capsys.readouterr().err


def test_interrupted_run_is_marked_cancelled(tmp_path, monkeypatch):
    circuit = write(tmp_path, "cnot.qc", CNOT)

    def interrupted(circuit, state, plan, sink, backend=None, ledger=None, on_chunk=None):
        on_chunk(plan.total_start + 2)
        raise KeyboardInterrupt

    monkeypatch.setattr("qsim.main.run_parallel", interrupted)
    out = str(tmp_path / "out.txt")
    assert main(["run", "--circuit", circuit, "--out", out, "--session-storage", "file"]) == EXIT_RUNTIME
    (context,) = FileSessionManager(str(tmp_path / "sessions")).list_sessions()
    assert context.status is RunStatus.CANCELLED
    assert context.next_start == 2
