from typing import Optional


class QsimError(Exception):
    """Base class for every error raised by qsim."""


class ConfigError(QsimError):
    """An environment/config value could not be interpreted."""


class AddressRangeError(QsimError, ValueError):
    """Address or chunk range outside [0, 2^M)."""


class GateValidationError(QsimError, ValueError):
    """A gate step is not valid for the circuit it is placed in."""


class CapacityError(QsimError):
    """Explicit materialization refused because the dimension is over the cap."""

    def __init__(self, num_qubits: int, cap: int, what: str = "explicit matrix"):
        self.num_qubits = num_qubits
        self.cap = cap
        super().__init__(
            f"{what} for M={num_qubits} exceeds the cap M<={cap}; "
            f"use the lazy 'run' path or raise QSIM_MAX_EXPLICIT_QUBITS"
        )


class CircuitFormatError(QsimError, ValueError):
    """Problem in a circuit text file, with its line number."""

    kind = "error"

    def __init__(self, line: Optional[int], message: str):
        self.line = line
        self.message = message
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message}")


class CircuitSyntaxError(CircuitFormatError):
    kind = "syntax error"


class CircuitSemanticError(CircuitFormatError):
    kind = "semantic error"


class SparseFormatError(QsimError, ValueError):
    """Malformed sparse-unitary file."""


class ChunkFormatError(QsimError, ValueError):
    """Malformed state-chunk file."""


class ChunkOrderError(QsimError, ValueError):
    """Chunks were not fed in one ascending, contiguous sequence."""


class SinkError(QsimError):
    """The chunk sink failed; everything below `completed_until` was delivered."""

    def __init__(self, completed_until: int, cause: BaseException):
        self.completed_until = completed_until
        self.cause = cause
        super().__init__(f"sink failed after index {completed_until}: {cause}")
