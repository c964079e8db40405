"""Line-based circuit format.

    qubits <M>
    init <q> <re0> <im0> <re1> <im1>
    x <target> [c <c1> <c2> ...]
    cphase <theta> c <c1> ...
    swap <a> <b>
    # comment

One step per line, applied top to bottom. Bit indices are 1-based (a(1) is
the LSB). Angles are radians: a decimal literal or pi, -pi, pi/N, K*pi, K*pi/N.
"""
import logging
import math
import re
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from ..errors import CircuitSemanticError, CircuitSyntaxError, GateValidationError
from ..interfaces.quantum_types import (
    MAX_QUBITS, ZERO, Circuit, GateKind, GateStep, InputState, QubitPair,
)

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"
_PI_RE = re.compile(r"^([+-]?(?:\d+(?:\.\d*)?|\.\d+)\*)?([+-])?pi(?:/(\d+))?$")


@dataclass
class CircuitDocument:
    """解析后的电路文件"""
    num_qubits: int
    init_directives: List[Tuple[int, QubitPair]] = field(default_factory=list)
    gate_lines: List[GateStep] = field(default_factory=list)
    source_locations: List[int] = field(default_factory=list)

    def to_circuit(self) -> Circuit:
        return Circuit(self.num_qubits, tuple(self.gate_lines))

    def to_input_state(self) -> InputState:
        qubits = [ZERO] * self.num_qubits
        for index, pair in self.init_directives:
            qubits[index - 1] = pair
        return InputState(tuple(qubits))


def _parse_int(token: str, line: int, what: str) -> int:
    if not re.fullmatch(r"[0-9]+", token):
        raise CircuitSyntaxError(line, f"expected integer {what}, got {token!r}")
    return int(token)


def _parse_float(token: str, line: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise CircuitSyntaxError(line, f"malformed number {token!r}") from None
    if not math.isfinite(value):
        raise CircuitSyntaxError(line, f"non-finite number {token!r}")
    return value


def parse_angle(token: str, line: int = None) -> float:
    m = _PI_RE.match(token.lower())
    if m:
        factor = float(m.group(1)[:-1]) if m.group(1) else 1.0
        sign = -1.0 if m.group(2) == "-" else 1.0
        denom = int(m.group(3)) if m.group(3) else 1
        if denom == 0:
            raise CircuitSyntaxError(line, f"division by zero in angle {token!r}")
        return sign * factor * math.pi / denom
    return _parse_float(token, line)


def _bit(token: str, line: int, num_qubits: int, what: str) -> int:
    value = _parse_int(token, line, what)
    if not 1 <= value <= num_qubits:
        raise CircuitSemanticError(line, f"{what} {value} outside [1, {num_qubits}]")
    return value


def _controls(tokens: List[str], line: int, num_qubits: int, required: bool) -> List[int]:
    if not tokens:
        if required:
            raise CircuitSyntaxError(line, "expected 'c' followed by control bits")
        return []
    if tokens[0] != "c" or len(tokens) < 2:
        raise CircuitSyntaxError(line, "expected 'c' followed by control bits")
    bits = [_bit(t, line, num_qubits, "control") for t in tokens[1:]]
    if len(set(bits)) != len(bits):
        raise CircuitSemanticError(line, f"duplicate control bit in {bits}")
    return bits


def _parse_step(keyword: str, args: List[str], line: int, num_qubits: int) -> GateStep:
    try:
        if keyword == "x":
            if not args:
                raise CircuitSyntaxError(line, "x needs a target bit")
            target = _bit(args[0], line, num_qubits, "target")
            controls = _controls(args[1:], line, num_qubits, required=False)
            if target in controls:
                raise CircuitSemanticError(line, f"target {target} is also a control")
            return GateStep.bitflip(target, controls)
        if keyword == "cphase":
            if not args:
                raise CircuitSyntaxError(line, "cphase needs an angle")
            theta = parse_angle(args[0], line)
            return GateStep.cphase(theta, _controls(args[1:], line, num_qubits, required=True))
        # swap
        if len(args) != 2:
            raise CircuitSyntaxError(line, "swap needs exactly two bits")
        a = _bit(args[0], line, num_qubits, "swap bit")
        b = _bit(args[1], line, num_qubits, "swap bit")
        if a == b:
            raise CircuitSemanticError(line, f"swap bits must differ, got {a} {b}")
        return GateStep.swap(a, b)
    except GateValidationError as e:
        raise CircuitSemanticError(line, str(e)) from None


def parse_circuit_document(text: str) -> CircuitDocument:
    doc = None
    seen_init: Dict[int, int] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split("#", 1)[0].split()
        if not tokens:
            continue
        keyword, args = tokens[0], tokens[1:]

        if keyword == "qubits":
            if doc is not None:
                raise CircuitSemanticError(line_no, "duplicate 'qubits' declaration")
            if len(args) != 1:
                raise CircuitSyntaxError(line_no, "qubits takes exactly one count")
            m = _parse_int(args[0], line_no, "qubit count")
            if not 1 <= m <= MAX_QUBITS:
                raise CircuitSemanticError(line_no, f"qubit count {m} outside [1, {MAX_QUBITS}]")
            doc = CircuitDocument(num_qubits=m)
            continue

        if keyword not in ("init", "x", "cphase", "swap"):
            raise CircuitSyntaxError(line_no, f"unknown keyword {keyword!r}")
        if doc is None:
            raise CircuitSyntaxError(line_no, "'qubits' must come before any other directive")

        if keyword == "init":
            if len(args) != 5:
                raise CircuitSyntaxError(line_no, "init takes <q> <re0> <im0> <re1> <im1>")
            q = _bit(args[0], line_no, doc.num_qubits, "qubit")
            if q in seen_init:
                raise CircuitSemanticError(
                    line_no, f"qubit {q} already initialized on line {seen_init[q]}")
            re0, im0, re1, im1 = (_parse_float(t, line_no) for t in args[1:])
            seen_init[q] = line_no
            doc.init_directives.append((q, QubitPair(complex(re0, im0), complex(re1, im1))))
            continue

        doc.gate_lines.append(_parse_step(keyword, args, line_no, doc.num_qubits))
        doc.source_locations.append(line_no)

    if doc is None:
        raise CircuitSyntaxError(None, "missing 'qubits' declaration")
    return doc


def parse_circuit(text: str) -> Tuple[Circuit, InputState]:
    """Parse circuit text; qubits without an init line start as |0> = [1, 0]."""
    doc = parse_circuit_document(text)
    state = doc.to_input_state()
    if not state.is_normalized():
        logger.warning("Input state is not normalized (norm=%.17g); accepted as given", state.norm())
    return doc.to_circuit(), state


def _fmt(x: float) -> str:
    return FLOAT_FORMAT % x


def serialize_circuit(circuit: Circuit, state: InputState = None) -> str:
    lines = [f"qubits {circuit.num_qubits}"]
    if state is not None:
        for index, q in enumerate(state.qubits, start=1):
            if q != ZERO:
                lines.append(" ".join(["init", str(index), _fmt(q.amp0.real), _fmt(q.amp0.imag),
                                       _fmt(q.amp1.real), _fmt(q.amp1.imag)]))
    for step in circuit.steps:
        controls = " ".join(str(c) for c in sorted(step.controls))
        if step.kind is GateKind.BITFLIP:
            lines.append(f"x {step.target} c {controls}" if controls else f"x {step.target}")
        elif step.kind is GateKind.CPHASE:
            lines.append(f"cphase {_fmt(step.theta)} c {controls}")
        else:
            lines.append(f"swap {step.swap_pair[0]} {step.swap_pair[1]}")
    return "\n".join(lines) + "\n"
