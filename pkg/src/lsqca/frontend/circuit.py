"""Gate-level circuits and their two text formats (QASM subset and native)."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Optional

ONE_QUBIT = ("H", "S", "Sdg", "X", "Y", "Z", "T", "Tdg", "PrepZ", "PrepX")
TWO_QUBIT = ("CNOT",)
THREE_QUBIT = ("Toffoli",)
MEASURE = ("MeasZ", "MeasX")
CONDITIONAL = ("CondS",)
PAULI = frozenset({"X", "Y", "Z"})

ARITY = {
    **{g: 1 for g in ONE_QUBIT + MEASURE + CONDITIONAL},
    **{g: 2 for g in TWO_QUBIT},
    **{g: 3 for g in THREE_QUBIT},
}
_CANON = {name.lower(): name for name in ARITY}

MAX_QUBITS = 2**20


@dataclass(frozen=True)
class Gate:
    name: str
    qubits: tuple[int, ...]
    value: Optional[int] = None

    def __post_init__(self) -> None:
        if self.name not in ARITY:
            raise ValueError(f"unknown gate {self.name!r}")
        if len(self.qubits) != ARITY[self.name]:
            raise ValueError(f"{self.name} takes {ARITY[self.name]} qubits, got {len(self.qubits)}")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"{self.name} has repeated qubit operands {self.qubits}")
        needs_value = self.name in MEASURE or self.name in CONDITIONAL
        if needs_value != (self.value is not None):
            raise ValueError(f"{self.name}: classical slot {'required' if needs_value else 'not allowed'}")

    def __str__(self) -> str:
        parts = [self.name, *map(str, self.qubits)]
        if self.value is not None:
            parts.append(f"c{self.value}")
        return " ".join(parts)


def H(q):
    return Gate("H", (q,))


def S(q):
    return Gate("S", (q,))


def T(q):
    return Gate("T", (q,))


def Tdg(q):
    return Gate("Tdg", (q,))


def X(q):
    return Gate("X", (q,))


def CNOT(c, t):
    return Gate("CNOT", (c, t))


def Toffoli(a, b, t):
    return Gate("Toffoli", (a, b, t))


def MeasZ(q, v):
    return Gate("MeasZ", (q,), v)


@dataclass
class GateCircuit:
    qubit_count: int
    gates: list[Gate] = field(default_factory=list)
    # qubit index -> register name ("control", "temporal", "system", ...)
    registers: dict[int, str] = field(default_factory=dict)
    name: str = ""

    def __post_init__(self) -> None:
        if not 0 <= self.qubit_count < MAX_QUBITS:
            raise ValueError(f"qubit count {self.qubit_count} out of range")
        for g in self.gates:
            self._check(g)

    def _check(self, g: Gate) -> None:
        for q in g.qubits:
            if not 0 <= q < self.qubit_count:
                raise ValueError(f"{g}: qubit {q} out of range (n={self.qubit_count})")

    def append(self, gate: Gate) -> "GateCircuit":
        self._check(gate)
        self.gates.append(gate)
        return self

    def extend(self, gates) -> "GateCircuit":
        for g in gates:
            self.append(g)
        return self

    def __iter__(self) -> Iterator[Gate]:
        return iter(self.gates)

    def __len__(self) -> int:
        return len(self.gates)

    def count(self, *names: str) -> int:
        return sum(1 for g in self.gates if g.name in names)

    @property
    def t_count(self) -> int:
        return self.count("T", "Tdg")

    @property
    def toffoli_count(self) -> int:
        return self.count("Toffoli")

    def validate_classical(self) -> None:
        """Each classical slot must be written before any CondS reads it."""
        written: set[int] = set()
        for g in self.gates:
            if g.name in CONDITIONAL and g.value not in written:
                raise ValueError(f"{g}: reads classical slot c{g.value} before it is written")
            if g.name in MEASURE:
                written.add(g.value)


class CircuitParseError(ValueError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


def parse_gate_circuit(text: str, format: str = "qasm") -> GateCircuit:
    if format in ("qasm", "qasm-subset"):
        return _parse_qasm(text)
    if format in ("native", "gc"):
        return _parse_native(text)
    raise ValueError(f"unknown circuit format {format!r}")


# -- native format ---------------------------------------------------------
#
#   qubits 3
#   register control 0 1
#   H 0
#   CNOT 0 1
#   MeasZ 1 c0


def _parse_native(text: str) -> GateCircuit:
    circuit: Optional[GateCircuit] = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *args = line.split()
        try:
            if head == "qubits":
                if circuit is not None:
                    raise ValueError("qubit count declared twice")
                circuit = GateCircuit(int(args[0]))
                continue
            if circuit is None:
                raise ValueError("missing 'qubits N' header")
            if head == "register":
                for q in args[1:]:
                    circuit.registers[int(q)] = args[0]
                continue
            name = _CANON.get(head.lower())
            if name is None:
                raise ValueError(f"unsupported gate {head!r}")
            value = None
            if args and args[-1].startswith("c"):
                value = int(args.pop()[1:])
            circuit.append(Gate(name, tuple(int(a) for a in args), value))
        except (ValueError, IndexError) as exc:
            raise CircuitParseError(lineno, str(exc)) from None
    return circuit if circuit is not None else GateCircuit(0)


def render_native(circuit: GateCircuit) -> str:
    lines = [f"qubits {circuit.qubit_count}"]
    by_reg: dict[str, list[int]] = {}
    for q, reg in sorted(circuit.registers.items()):
        by_reg.setdefault(reg, []).append(q)
    for reg, qs in by_reg.items():
        lines.append(f"register {reg} " + " ".join(map(str, qs)))
    lines.extend(str(g) for g in circuit.gates)
    return "\n".join(lines) + "\n"


# -- QASM subset -----------------------------------------------------------

_QASM_GATES = {
    "h": "H",
    "s": "S",
    "sdg": "Sdg",
    "x": "X",
    "y": "Y",
    "z": "Z",
    "t": "T",
    "tdg": "Tdg",
    "cx": "CNOT",
    "ccx": "Toffoli",
    "reset": "PrepZ",
}
_IGNORED = {"barrier", "include", "OPENQASM"}
_DECL = re.compile(r"(qreg|creg)\s+([A-Za-z_]\w*)\s*\[\s*(\d+)\s*\]")
_ARG = re.compile(r"([A-Za-z_]\w*)\s*(?:\[\s*(\d+)\s*\])?")


def _strip_comments(text: str) -> str:
    return re.sub(r"//[^\n]*", "", text)


def _statements(text: str) -> Iterator[tuple[int, str]]:
    """Yield ``(line, statement)`` pairs; a statement may span lines."""
    parts: list[str] = []
    start = 0
    for lineno, line in enumerate(_strip_comments(text).splitlines(), start=1):
        *done, rest = line.split(";")
        for piece in done:
            if not parts or not "".join(parts).strip():
                start = lineno
            stmt = " ".join(parts + [piece]).strip()
            parts = []
            if stmt:
                yield start, stmt
        if rest.strip():
            if not parts:
                start = lineno
            parts.append(rest)
    if parts and " ".join(parts).strip():
        yield start, " ".join(parts).strip()


def _parse_qasm(text: str) -> GateCircuit:
    qregs: dict[str, tuple[int, int]] = {}
    cregs: dict[str, tuple[int, int]] = {}
    nq = nc = 0
    pending: list[tuple[int, str, list[str]]] = []

    for lineno, stmt in _statements(text):
        head = stmt.split(None, 1)[0]
        if head in _IGNORED:
            continue
        decl = _DECL.fullmatch(stmt)
        if decl:
            kind, name, size = decl.group(1), decl.group(2), int(decl.group(3))
            if name in qregs or name in cregs:
                raise CircuitParseError(lineno, f"register {name!r} declared twice")
            if kind == "qreg":
                qregs[name] = (nq, size)
                nq += size
            else:
                cregs[name] = (nc, size)
                nc += size
            continue
        if head == "measure":
            body = stmt[len("measure"):]
            if "->" not in body:
                raise CircuitParseError(lineno, "measure without '->'")
            src, dst = body.split("->")
            pending.append((lineno, "measure", [src.strip(), dst.strip()]))
            continue
        if head not in _QASM_GATES:
            raise CircuitParseError(lineno, f"unsupported gate {head!r}")
        args = [a.strip() for a in stmt[len(head):].split(",")]
        pending.append((lineno, head, args))

    circuit = GateCircuit(nq)

    def resolve(lineno: int, arg: str, regs: dict) -> list[int]:
        m = _ARG.fullmatch(arg)
        if m is None or m.group(1) not in regs:
            raise CircuitParseError(lineno, f"unknown register reference {arg!r}")
        base, size = regs[m.group(1)]
        if m.group(2) is None:
            return list(range(base, base + size))
        idx = int(m.group(2))
        if idx >= size:
            raise CircuitParseError(lineno, f"index {idx} out of range for {m.group(1)}[{size}]")
        return [base + idx]

    for lineno, head, args in pending:
        if head == "measure":
            qs = resolve(lineno, args[0], qregs)
            cs = resolve(lineno, args[1], cregs)
            if len(qs) != len(cs):
                raise CircuitParseError(lineno, "measure register sizes differ")
            circuit.extend(MeasZ(q, c) for q, c in zip(qs, cs))
            continue
        name = _QASM_GATES[head]
        cols = [resolve(lineno, a, qregs) for a in args]
        if len(cols) != ARITY[name]:
            raise CircuitParseError(lineno, f"{head} takes {ARITY[name]} arguments")
        width = max(len(c) for c in cols)
        if any(len(c) not in (1, width) for c in cols):
            raise CircuitParseError(lineno, "register sizes differ in broadcast")
        for k in range(width):
            qs = tuple(c[k] if len(c) > 1 else c[0] for c in cols)
            try:
                circuit.append(Gate(name, qs))
            except ValueError as exc:
                raise CircuitParseError(lineno, str(exc)) from None
    return circuit


def render_qasm(circuit: GateCircuit) -> str:
    """Write a circuit as OpenQASM 2.0 (gates without a QASM name are rejected)."""
    rev = {v: k for k, v in _QASM_GATES.items()}
    ncl = 1 + max((g.value for g in circuit.gates if g.value is not None), default=-1)
    out = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{circuit.qubit_count}];"]
    if ncl:
        out.append(f"creg c[{ncl}];")
    for g in circuit.gates:
        if g.name == "MeasZ":
            out.append(f"measure q[{g.qubits[0]}] -> c[{g.value}];")
        elif g.name in rev:
            out.append(f"{rev[g.name]} " + ",".join(f"q[{q}]" for q in g.qubits) + ";")
        else:
            raise ValueError(f"{g.name} has no QASM form")
    return "\n".join(out) + "\n"
