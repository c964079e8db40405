"""Persistence of an explicit phased permutation.

Text:   "sparse-u v1 dim=<n>" then one "<row> <col> <re> <im>" line per row.
Binary: "sparse-u b1 dim=<n>\\n", n little-endian u64 columns, then n
        little-endian (re, im) f64 pairs.
"""
import io
import logging
import re
from typing import BinaryIO, Optional, TextIO, Union

import numpy as np

from ..env_manager import get_max_explicit_qubits
from ..errors import CapacityError, SparseFormatError
from ..interfaces.quantum_types import MAX_QUBITS, SparseUnitary

logger = logging.getLogger(__name__)

TEXT_HEADER = "sparse-u v1"
BINARY_HEADER = "sparse-u b1"
_HEADER_RE = re.compile(r"^sparse-u (v1|b1) dim=(\d+)$")


def serialize_sparse(u: SparseUnitary, sink: TextIO) -> None:
    sink.write(f"{TEXT_HEADER} dim={u.dim}\n")
    for row, (c, v) in enumerate(zip(u.col.tolist(), u.val.tolist())):
        sink.write(f"{row} {c} {v.real:.17g} {v.imag:.17g}\n")


def serialize_sparse_binary(u: SparseUnitary, sink: BinaryIO) -> None:
    sink.write(f"{BINARY_HEADER} dim={u.dim}\n".encode("ascii"))
    sink.write(u.col.astype("<u8").tobytes())
    sink.write(u.val.astype("<c16").tobytes())


def _check_bijective(col: np.ndarray, dim: int) -> None:
    if col.size and (col.min() < 0 or col.max() >= dim):
        raise SparseFormatError("column index out of range")
    if not np.all(np.bincount(col, minlength=dim) == 1):
        raise SparseFormatError("column map is not a bijection")


def _parse_header(line: str, expected: str, max_qubits: Optional[int]) -> int:
    """Header dim, checked before anything of that size is allocated."""
    m = _HEADER_RE.match(line.strip())
    if not m or m.group(1) != expected.split()[1]:
        raise SparseFormatError(f"malformed header {line.strip()!r}")
    dim = int(m.group(2))
    if dim < 2 or dim & (dim - 1):
        raise SparseFormatError(f"dim={dim} is not a power of two >= 2")
    num_qubits = dim.bit_length() - 1
    if num_qubits > MAX_QUBITS:
        raise SparseFormatError(f"dim=2^{num_qubits} exceeds 2^{MAX_QUBITS}")
    cap = get_max_explicit_qubits() if max_qubits is None else max_qubits
    if num_qubits > cap:
        logger.info("Refusing sparse file: M=%d over cap %d", num_qubits, cap)
        raise CapacityError(num_qubits, cap)
    return dim


def parse_sparse(source: TextIO, check_bijective: bool = True,
                 max_qubits: Optional[int] = None) -> SparseUnitary:
    dim = _parse_header(source.readline(), TEXT_HEADER, max_qubits)
    col = np.empty(dim, dtype=np.int64)
    val = np.empty(dim, dtype=np.complex128)
    count = 0
    for line_no, raw in enumerate(source, start=2):
        if not raw.strip():
            continue
        parts = raw.split()
        if len(parts) != 4:
            raise SparseFormatError(f"line {line_no}: expected '<row> <col> <re> <im>'")
        try:
            row, c = int(parts[0]), int(parts[1])
            re_, im_ = float(parts[2]), float(parts[3])
        except ValueError:
            raise SparseFormatError(f"line {line_no}: malformed number") from None
        if row != count:
            raise SparseFormatError(f"line {line_no}: expected row {count}, got {row}")
        if count >= dim:
            raise SparseFormatError(f"more than dim={dim} rows")
        col[count] = c
        val[count] = complex(re_, im_)
        count += 1
    if count != dim:
        raise SparseFormatError(f"row count {count} does not match dim={dim}")
    if check_bijective:
        _check_bijective(col, dim)
    return SparseUnitary(col, val)


def parse_sparse_binary(source: BinaryIO, check_bijective: bool = True,
                        max_qubits: Optional[int] = None) -> SparseUnitary:
    dim = _parse_header(source.readline().decode("ascii", errors="replace"), BINARY_HEADER, max_qubits)
    if source.seekable():
        here = source.tell()
        remaining = source.seek(0, io.SEEK_END) - here
        source.seek(here)
        if remaining != 24 * dim:
            raise SparseFormatError(f"payload of {remaining} bytes does not match dim={dim}")
    col_bytes = source.read(8 * dim)
    val_bytes = source.read(16 * dim)
    if len(col_bytes) != 8 * dim or len(val_bytes) != 16 * dim or source.read(1):
        raise SparseFormatError(f"payload size does not match dim={dim}")
    col = np.frombuffer(col_bytes, dtype="<u8").astype(np.int64)
    val = np.frombuffer(val_bytes, dtype="<c16").astype(np.complex128)
    if check_bijective:
        _check_bijective(col, dim)
    return SparseUnitary(col, val)


def load_sparse(path: str, binary: Union[bool, None] = None,
                check_bijective: bool = True, max_qubits: Optional[int] = None) -> SparseUnitary:
    """Load either form; `binary=None` sniffs the header token."""
    with open(path, "rb") as f:
        head = f.read(len(BINARY_HEADER))
    if binary is None:
        binary = head == BINARY_HEADER.encode("ascii")
    if binary:
        with open(path, "rb") as f:
            return parse_sparse_binary(f, check_bijective, max_qubits)
    with open(path, "r", encoding="utf-8") as f:
        return parse_sparse(f, check_bijective, max_qubits)


def save_sparse(u: SparseUnitary, path: str, binary: bool = False) -> None:
    if binary:
        with open(path, "wb") as f:
            serialize_sparse_binary(u, f)
    else:
        with open(path, "w", encoding="utf-8") as f:
            serialize_sparse(u, f)
