import io

import numpy as np
import pytest

from qsim.analysis.verification import verify_unitary
from qsim.core.sparse import compose_explicit
from qsim.errors import CapacityError, SparseFormatError
from qsim.formats.sparse_format import (
    load_sparse, parse_sparse, parse_sparse_binary, save_sparse, serialize_sparse, serialize_sparse_binary,
)
from qsim.interfaces.quantum_types import Circuit, SparseUnitary
from qsim.tests.conftest import PAPER_COL, PAPER_VAL, make_random_circuit


def roundtrip_text(u):
    buf = io.StringIO()
    serialize_sparse(u, buf)
    buf.seek(0)
    return buf.getvalue(), parse_sparse(buf)


def test_example_matrix_roundtrips_and_verifies():
    u = SparseUnitary(PAPER_COL, PAPER_VAL)
    _, again = roundtrip_text(u)
    assert again.equals(u)
    assert verify_unitary(again).is_unitary


def test_identity_text_form():
    text, _ = roundtrip_text(compose_explicit(Circuit(2)))
    assert text.splitlines() == ["sparse-u v1 dim=4", "0 0 1 0", "1 1 1 0", "2 2 1 0", "3 3 1 0"]


def test_random_circuit_roundtrip_row_by_row(rng):
    u = compose_explicit(make_random_circuit(rng, 6, 40))
    _, again = roundtrip_text(u)
    for i in range(u.dim):
        assert again.col[i] == u.col[i]
        assert again.val[i] == u.val[i]


def test_binary_roundtrip_is_exact(rng, tmp_path):
    u = compose_explicit(make_random_circuit(rng, 7, 40))
    buf = io.BytesIO()
    serialize_sparse_binary(u, buf)
    buf.seek(0)
    assert parse_sparse_binary(buf).equals(u)
    path = str(tmp_path / "u.bin")
    save_sparse(u, path, binary=True)
    assert load_sparse(path).equals(u)


@pytest.mark.parametrize("text", [
    "sparse-u v2 dim=2\n0 0 1 0\n1 1 1 0\n",
    "dense dim=2\n",
    "sparse-u v1 dim=4\n0 0 1 0\n1 1 1 0\n",
    "sparse-u v1 dim=2\n0 0 1 0\n1 1 1 0\n2 0 1 0\n",
    "sparse-u v1 dim=2\n1 0 1 0\n0 1 1 0\n",
    "sparse-u v1 dim=2\n0 0 1 0\n1 0 1 0\n",
    "sparse-u v1 dim=2\n0 0 1 0\n1 5 1 0\n",
    "sparse-u v1 dim=2\n0 0 1\n1 1 1 0\n",
])
def test_malformed_files_rejected(text):
    with pytest.raises(SparseFormatError):
        parse_sparse(io.StringIO(text))


def test_lenient_load_keeps_broken_map(tmp_path):
    path = tmp_path / "bad.sparse"
    path.write_text("sparse-u v1 dim=2\n0 0 1 0\n1 0 1 0\n")
    u = load_sparse(str(path), check_bijective=False)
    assert u.col.tolist() == [0, 0]
    assert not verify_unitary(u).bijective


@pytest.mark.parametrize("header", [
    "sparse-u v1 dim=99999999999999999",
    "sparse-u v1 dim=1",
    "sparse-u v1 dim=0",
    f"sparse-u v1 dim={1 << 63}",
])
def test_bad_dim_rejected_before_allocation(header):
    with pytest.raises(SparseFormatError):
        parse_sparse(io.StringIO(header + "\n0 0 1 0\n"))


def test_dim_over_explicit_cap_rejected(monkeypatch):
    with pytest.raises(CapacityError):
        parse_sparse(io.StringIO(f"sparse-u v1 dim={1 << 40}\n0 0 1 0\n"))
    monkeypatch.setenv("QSIM_MAX_EXPLICIT_QUBITS", "2")
    with pytest.raises(CapacityError):
        parse_sparse(io.StringIO("sparse-u v1 dim=8\n"))
    assert parse_sparse(io.StringIO("sparse-u v1 dim=8\n" + "".join(f"{i} {i} 1 0\n" for i in range(8))),
                        max_qubits=3).dim == 8


def test_binary_payload_size_checked_against_stream():
    buf = io.BytesIO()
    serialize_sparse_binary(SparseUnitary.identity(4), buf)
    raw = buf.getvalue()
    with pytest.raises(SparseFormatError, match="payload"):
        parse_sparse_binary(io.BytesIO(raw[:-5]))
    with pytest.raises(SparseFormatError, match="payload"):
        parse_sparse_binary(io.BytesIO(raw + b"\0"))
    with pytest.raises(CapacityError):
        parse_sparse_binary(io.BytesIO(f"sparse-u b1 dim={1 << 50}\n".encode("ascii")))
