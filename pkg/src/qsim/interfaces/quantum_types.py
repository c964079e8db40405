import cmath
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import FrozenSet, Iterable, List, Optional, Tuple

import numpy as np

from ..errors import AddressRangeError, GateValidationError

# 64-bit unsigned index with headroom
MAX_QUBITS = 62
NORM_TOLERANCE = 1e-12
UNIT_TOLERANCE = 1e-12

# Address bit j (1-based, j=1 is the LSB) is a(j).
Address = int


def check_address(address: Address, num_qubits: int) -> None:
    if address < 0 or address >= (1 << num_qubits):
        raise AddressRangeError(f"address {address} outside [0, 2^{num_qubits})")


def phase_factor(theta: float) -> complex:
    """e^{i theta}, exact for integer multiples of pi/2.

    The quarter-turn test runs on the angle reduced to [-pi, pi]; a raw large
    angle divided by pi/2 is always integral in float64.
    """
    reduced = math.remainder(theta, 2 * math.pi)
    quarter = reduced / (math.pi / 2)
    nearest = round(quarter)
    if abs(quarter - nearest) <= 1e-12:
        return (1 + 0j, 1j, -1 + 0j, -1j)[nearest % 4]
    return cmath.exp(1j * theta)


@dataclass(frozen=True)
class QubitPair:
    """单个量子比特 [q(0) q(1)]"""
    amp0: complex = 1 + 0j
    amp1: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "amp0", complex(self.amp0))
        object.__setattr__(self, "amp1", complex(self.amp1))

    def norm_squared(self) -> float:
        return abs(self.amp0) ** 2 + abs(self.amp1) ** 2

    def is_normalized(self) -> bool:
        return abs(self.norm_squared() - 1.0) <= NORM_TOLERANCE

    def amplitude(self, bit: int) -> complex:
        return self.amp1 if bit else self.amp0


ZERO = QubitPair(1, 0)
ONE = QubitPair(0, 1)


@dataclass(frozen=True)
class InputState:
    """Initial state as an implicit Kronecker product q_M ⊗ ... ⊗ q_1.

    `qubits[0]` is q_1 and owns the least significant address bit.
    """
    qubits: Tuple[QubitPair, ...]

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(self.qubits))
        if not 1 <= len(self.qubits) <= MAX_QUBITS:
            raise AddressRangeError(f"qubit count {len(self.qubits)} outside [1, {MAX_QUBITS}]")

    @property
    def num_qubits(self) -> int:
        return len(self.qubits)

    @classmethod
    def zeros(cls, num_qubits: int) -> "InputState":
        return cls(tuple(ZERO for _ in range(num_qubits)))

    @classmethod
    def from_basis(cls, num_qubits: int, address: Address) -> "InputState":
        check_address(address, num_qubits)
        return cls(tuple(ONE if (address >> j) & 1 else ZERO for j in range(num_qubits)))

    def qubit(self, index: int) -> QubitPair:
        """1-based accessor, q_index."""
        return self.qubits[index - 1]

    def norm(self) -> float:
        return math.prod(math.sqrt(q.norm_squared()) for q in self.qubits)

    def is_normalized(self) -> bool:
        return all(q.is_normalized() for q in self.qubits)


class GateKind(Enum):
    BITFLIP = "x"
    CPHASE = "cphase"
    SWAP = "swap"


def _mask(bits: Iterable[int]) -> int:
    mask = 0
    for b in bits:
        mask |= 1 << (b - 1)
    return mask


@dataclass(frozen=True)
class GateStep:
    """One wiring-diagram step.

    BITFLIP toggles `target` when every bit in `controls` is 1 (NOT, CNOT,
    Toffoli and beyond). CPHASE multiplies by e^{i theta} when every control is
    1. SWAP exchanges the two bits of `swap_pair`. Bit indices are 1-based.
    """
    kind: GateKind
    target: Optional[int] = None
    controls: FrozenSet[int] = frozenset()
    swap_pair: Optional[Tuple[int, int]] = None
    theta: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "controls", frozenset(self.controls))
        if self.swap_pair is not None:
            object.__setattr__(self, "swap_pair", tuple(self.swap_pair))
        self._check_shape()

    @classmethod
    def bitflip(cls, target: int, controls: Iterable[int] = ()) -> "GateStep":
        return cls(GateKind.BITFLIP, target=target, controls=frozenset(controls))

    @classmethod
    def cphase(cls, theta: float, controls: Iterable[int]) -> "GateStep":
        return cls(GateKind.CPHASE, controls=frozenset(controls), theta=float(theta))

    @classmethod
    def swap(cls, a: int, b: int) -> "GateStep":
        return cls(GateKind.SWAP, swap_pair=(a, b))

    def _check_shape(self) -> None:
        if self.kind is GateKind.BITFLIP:
            if self.target is None:
                raise GateValidationError("bit-flip step needs a target")
            if self.target in self.controls:
                raise GateValidationError(f"target {self.target} is also a control")
        elif self.kind is GateKind.CPHASE:
            if not self.controls:
                raise GateValidationError("cphase step needs at least one control")
            if not math.isfinite(self.theta):
                raise GateValidationError(f"cphase angle {self.theta} is not finite")
        elif self.kind is GateKind.SWAP:
            if self.swap_pair is None or len(self.swap_pair) != 2:
                raise GateValidationError("swap step needs exactly two bits")
            if self.swap_pair[0] == self.swap_pair[1]:
                raise GateValidationError(f"swap bits must differ, got {self.swap_pair}")

    def bits(self) -> List[int]:
        if self.kind is GateKind.SWAP:
            return list(self.swap_pair)
        bits = sorted(self.controls)
        if self.target is not None:
            bits.append(self.target)
        return bits

    def validate(self, num_qubits: int) -> None:
        for b in self.bits():
            if not 1 <= b <= num_qubits:
                raise GateValidationError(f"bit index {b} outside [1, {num_qubits}]")

    @property
    def control_mask(self) -> int:
        return _mask(self.controls)

    @property
    def target_mask(self) -> int:
        return _mask([self.target]) if self.target is not None else 0

    @property
    def phase(self) -> complex:
        return phase_factor(self.theta) if self.kind is GateKind.CPHASE else 1 + 0j

    def is_involution(self) -> bool:
        return self.kind in (GateKind.BITFLIP, GateKind.SWAP)

    def inverse(self) -> "GateStep":
        if self.kind is GateKind.CPHASE:
            return GateStep.cphase(-self.theta, self.controls)
        return self


@dataclass(frozen=True)
class Circuit:
    """Ordered steps, step 1 applied first; the matrix is U_n ... U_1."""
    num_qubits: int
    steps: Tuple[GateStep, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        if not 1 <= self.num_qubits <= MAX_QUBITS:
            raise AddressRangeError(f"qubit count {self.num_qubits} outside [1, {MAX_QUBITS}]")
        for step in self.steps:
            step.validate(self.num_qubits)

    @property
    def dim(self) -> int:
        return 1 << self.num_qubits

    def has_phases(self) -> bool:
        return any(s.kind is GateKind.CPHASE for s in self.steps)

    def __add__(self, other: "Circuit") -> "Circuit":
        if other.num_qubits != self.num_qubits:
            raise GateValidationError("cannot concatenate circuits of different width")
        return Circuit(self.num_qubits, self.steps + other.steps)


def invert_circuit(circuit: Circuit) -> Circuit:
    return Circuit(circuit.num_qubits, tuple(s.inverse() for s in reversed(circuit.steps)))


@dataclass(frozen=True, eq=False)
class SparseUnitary:
    """Phased permutation: output(i) = val[i] * input(col[i])."""
    col: np.ndarray
    val: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "col", np.asarray(self.col, dtype=np.int64))
        object.__setattr__(self, "val", np.asarray(self.val, dtype=np.complex128))
        if self.col.shape != self.val.shape or self.col.ndim != 1:
            raise ValueError("col and val must be one-dimensional and of equal length")

    @property
    def dim(self) -> int:
        return int(self.col.shape[0])

    @classmethod
    def identity(cls, dim: int) -> "SparseUnitary":
        return cls(np.arange(dim, dtype=np.int64), np.ones(dim, dtype=np.complex128))

    def equals(self, other: "SparseUnitary") -> bool:
        return (self.dim == other.dim
                and np.array_equal(self.col, other.col)
                and np.array_equal(self.val, other.val))

    def transpose(self) -> "SparseUnitary":
        # U[i, col[i]] = val[i]  ->  T[col[i], i] = val[i]
        tcol = np.empty_like(self.col)
        tval = np.empty_like(self.val)
        tcol[self.col] = np.arange(self.dim, dtype=np.int64)
        tval[self.col] = self.val
        return SparseUnitary(tcol, tval)

    def adjoint(self) -> "SparseUnitary":
        t = self.transpose()
        return SparseUnitary(t.col, np.conj(t.val))

    def is_self_transpose(self) -> bool:
        return self.equals(self.transpose())

    def apply(self, vector: np.ndarray) -> np.ndarray:
        return self.val * np.asarray(vector, dtype=np.complex128)[self.col]

    def __matmul__(self, other: "SparseUnitary") -> "SparseUnitary":
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        return SparseUnitary(other.col[self.col], self.val * other.val[self.col])

    def to_dense(self) -> np.ndarray:
        from ..analysis.dense_oracle import dense_expand
        return dense_expand(self)


@dataclass(frozen=True, eq=False)
class StateChunk:
    """Output amplitudes for indices [start, start + len(amps))."""
    start: int
    amps: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.complex128))

    def __post_init__(self):
        object.__setattr__(self, "amps", np.asarray(self.amps, dtype=np.complex128))

    def __len__(self) -> int:
        return int(self.amps.shape[0])

    @property
    def end(self) -> int:
        return self.start + len(self)

    def indices(self) -> np.ndarray:
        return np.arange(self.start, self.end, dtype=np.uint64)

    def equals(self, other: "StateChunk") -> bool:
        return self.start == other.start and np.array_equal(self.amps, other.amps)
